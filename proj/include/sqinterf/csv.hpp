#ifndef SQINTERF_CSV_HPP
#define SQINTERF_CSV_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sqinterf {

/// %.12g with `inf`/`nan` spelled out, so outputs are byte-stable across
/// platforms.
inline std::string format_csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

using CsvCell = std::variant<double, std::string>;

/// Deterministic CSV output: first line a `# key=value,...` comment naming
/// every fixed parameter, second line the column names, then the rows.
/// Written atomically (temp file + rename).
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns)
      : columns_(std::move(columns)) {
    if (columns_.empty())
      throw std::invalid_argument("csv table needs at least one column");
  }

  void set_param(const std::string& key, const std::string& value) {
    params_.emplace_back(key, value);
  }
  void set_param(const std::string& key, double value) {
    params_.emplace_back(key, format_csv_number(value));
  }

  void add_row(std::vector<CsvCell> cells) {
    if (cells.size() != columns_.size())
      throw std::invalid_argument("csv row width mismatch");
    rows_.push_back(std::move(cells));
  }

  std::string to_string() const {
    std::ostringstream out;
    out << "#";
    for (std::size_t i = 0; i < params_.size(); ++i)
      out << (i == 0 ? " " : ",") << params_[i].first << "="
          << params_[i].second;
    out << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
      out << (i == 0 ? "" : ",") << columns_[i];
    out << "\n";
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ",";
        if (std::holds_alternative<double>(row[i]))
          out << format_csv_number(std::get<double>(row[i]));
        else
          out << std::get<std::string>(row[i]);
      }
      out << "\n";
    }
    return out.str();
  }

  void write(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
      f << to_string();
      if (!f) throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
      throw std::runtime_error("rename to " + path + " failed");
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> params_;
  std::vector<std::vector<CsvCell>> rows_;
};

}  // namespace sqinterf

#endif  // SQINTERF_CSV_HPP
