// sqinterf: command-line front end for the interferometer sensitivity
// toolkit. Subcommands: figure, sweep, optimize, range, oracle-check.
// Output is deterministic CSV; see csv.hpp for the schema.

#include "sqinterf/analysis.hpp"
#include "sqinterf/csv.hpp"
#include "sqinterf/fock.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace sqinterf;

constexpr double kPi = 3.14159265358979323846;

// command-line misuse distinct from numerical/validation failures: exit 1
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Scheme resolve_scheme(const std::string& scheme, const std::string& detection) {
  // full combined names pass straight through
  for (const char* full :
       {"su2-homodyne", "su11-seeded-homodyne", "su11-seeded-direct",
        "su11-unseeded-direct", "su11-nondegenerate"})
    if (scheme == full) return scheme_from_string(scheme);
  if (scheme == "su2") {
    if (detection == "homodyne") return Scheme::Su2Homodyne;
    throw UsageError("su2 supports only homodyne detection");
  }
  if (scheme == "su11-seeded") {
    if (detection == "homodyne") return Scheme::Su11SeededHomodyne;
    if (detection == "direct") return Scheme::Su11SeededDirect;
  }
  if (scheme == "su11-unseeded") {
    if (detection == "direct") return Scheme::Su11UnseededDirect;
    throw UsageError("the unseeded scheme is direct-detection only");
  }
  throw UsageError("unknown scheme: " + scheme +
                   " (expected su2 | su11-seeded | su11-unseeded)");
}

double db_to_r(double db) { return db * std::log(10.0) / 20.0; }

void emit(const CsvTable& table, const std::string& output) {
  if (output.empty())
    std::cout << table.to_string();
  else
    table.write(output);
}

void set_common_params(CsvTable& t, const SchemeConfig& cfg) {
  t.set_param("r1", cfg.r1);
  t.set_param("r2", cfg.r2);
  t.set_param("mu", cfg.mu);
  t.set_param("eta", cfg.eta);
  t.set_param("alpha", cfg.alpha);
  t.set_param("psi", cfg.psi);
  t.set_param("dnd", cfg.delta_n_d);
  t.set_param("scheme", to_string(cfg.scheme));
}

std::vector<double> linear_grid(double lo, double hi, double step) {
  std::vector<double> g;
  const int n = static_cast<int>(std::round((hi - lo) / step));
  for (int i = 0; i <= n; ++i) g.push_back(lo + i * step);
  return g;
}

// ---- figure reproductions ------------------------------------------------

void figure_phi_curve(CsvTable& t, SchemeConfig cfg, const std::string& label,
                      double lo, double hi, double step) {
  for (double phi : linear_grid(lo, hi, step)) {
    const SensitivityPoint p = closed_form(cfg, phi);
    t.add_row({label, phi, p.dphi, p.dphi_over_snl});
  }
}

void figure_param_sweep(CsvTable& t, const SchemeConfig& cfg,
                        const std::string& label, const std::string& param,
                        const std::vector<double>& grid, double x_sign) {
  SweepSpec spec;
  spec.varying = param;
  spec.grid = grid;
  spec.fixed = cfg;
  for (const SweepRow& row : run_sweep(spec))
    t.add_row({label, x_sign * row.value, row.dphi_min, row.dphi_min_over_snl,
               row.range_width});
}

CsvTable run_figure(int id, SchemeConfig cfg) {
  const std::vector<std::string> curve_cols{"series", "phi", "dphi",
                                            "dphi_over_snl"};
  const std::vector<std::string> sweep_cols{"series", "x", "dphi_min",
                                            "dphi_min_over_snl", "range"};
  const std::vector<double> etas{1.0, 0.3, 0.1};
  // |r2| grid for the unbalancing sweeps
  const std::vector<double> r2_grid = linear_grid(0.0, 5.0, 0.05);
  std::vector<double> r2_neg;
  for (double x : r2_grid) r2_neg.push_back(-x);

  auto with_eta = [&](double e) {
    SchemeConfig c = cfg;
    c.eta = e;
    return c;
  };
  auto eta_label = [](double e) { return "eta=" + format_csv_number(e); };

  switch (id) {
    case 2: {
      CsvTable t(curve_cols);
      cfg.scheme = Scheme::Su2Homodyne;
      set_common_params(t, cfg);
      t.set_param("figure", 2.0);
      for (double e : etas)
        figure_phi_curve(t, with_eta(e), eta_label(e), -1.5, 1.5, 0.005);
      return t;
    }
    case 3: {
      CsvTable t(sweep_cols);
      cfg.scheme = Scheme::Su2Homodyne;
      set_common_params(t, cfg);
      t.set_param("figure", 3.0);
      for (double e : etas)
        figure_param_sweep(t, with_eta(e), eta_label(e), "r2", r2_neg, -1.0);
      return t;
    }
    case 4: {
      CsvTable t(curve_cols);
      cfg.scheme = Scheme::Su11SeededHomodyne;
      set_common_params(t, cfg);
      t.set_param("figure", 4.0);
      for (double e : etas)
        figure_phi_curve(t, with_eta(e), eta_label(e), -1.5, 1.5, 0.005);
      return t;
    }
    case 5: {
      CsvTable t(sweep_cols);
      cfg.scheme = Scheme::Su11SeededHomodyne;
      set_common_params(t, cfg);
      t.set_param("figure", 5.0);
      for (double e : etas)
        figure_param_sweep(t, with_eta(e), eta_label(e), "r2", r2_neg, -1.0);
      return t;
    }
    case 6: {
      CsvTable t(curve_cols);
      cfg.scheme = Scheme::Su11SeededDirect;
      set_common_params(t, cfg);
      t.set_param("figure", 6.0);
      for (double psi : {0.0, 0.2}) {
        SchemeConfig c = cfg;
        c.psi = psi;
        figure_phi_curve(t, c, "psi=" + format_csv_number(psi), -0.78, 0.78,
                         0.002);
      }
      return t;
    }
    case 7: {
      CsvTable t(sweep_cols);
      cfg.scheme = Scheme::Su11SeededDirect;
      set_common_params(t, cfg);
      t.set_param("figure", 7.0);
      std::vector<double> grid;  // |r2| >= 1.15 keeps the direct scheme gainful
      for (double x : linear_grid(1.15, 5.0, 0.05)) grid.push_back(-x);
      for (double e : etas)
        figure_param_sweep(t, with_eta(e), eta_label(e), "r2", grid, -1.0);
      return t;
    }
    case 8: {
      CsvTable t(curve_cols);
      cfg.scheme = Scheme::Su11UnseededDirect;
      cfg.alpha = 0.0;
      cfg.delta_n_d = 0.0;
      set_common_params(t, cfg);
      t.set_param("figure", 8.0);
      for (double e : etas)
        figure_phi_curve(t, with_eta(e), eta_label(e), -0.78, 0.78, 0.002);
      return t;
    }
    case 9: {
      CsvTable t(sweep_cols);
      cfg.scheme = Scheme::Su11UnseededDirect;
      cfg.alpha = 0.0;
      if (cfg.delta_n_d == 0.0) cfg.delta_n_d = 100.0;
      set_common_params(t, cfg);
      t.set_param("figure", 9.0);
      std::vector<double> grid;
      for (double x : linear_grid(1.15, 5.0, 0.05)) grid.push_back(-x);
      for (double e : etas)
        figure_param_sweep(t, with_eta(e), eta_label(e), "r2", grid, -1.0);
      return t;
    }
    case 10: {
      CsvTable t(sweep_cols);
      set_common_params(t, cfg);
      t.set_param("figure", 10.0);
      const std::vector<double> r1_grid = linear_grid(0.2, 2.0, 0.02);
      for (Scheme s : {Scheme::Su2Homodyne, Scheme::Su11SeededHomodyne,
                       Scheme::Su11SeededDirect}) {
        SchemeConfig c = cfg;
        c.scheme = s;
        figure_param_sweep(t, c, to_string(s), "r1", r1_grid, 1.0);
      }
      return t;
    }
    default:
      throw UsageError("unknown figure id " + std::to_string(id));
  }
}

// ---- oracle check --------------------------------------------------------

struct OracleOp {
  int kind;  // 0 squeeze, 1 rotate, 2 displace, 3 loss
  double a = 0.0, b = 0.0;
};

bool moments_close(double engine, double fock, double tol, double* worst) {
  const double err = std::fabs(engine - fock);
  const double scaled = err / std::max(1.0, std::fabs(engine));
  if (scaled > *worst) *worst = scaled;
  return err <= std::max(tol, tol * std::fabs(engine));
}

int run_oracle_check(int cases) {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> ur(-0.5, 0.5);
  std::uniform_real_distribution<double> uphi(-kPi, kPi);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  std::uniform_real_distribution<double> ut(0.5, 1.0);
  std::uniform_int_distribution<int> ulen(1, 6);
  std::uniform_int_distribution<int> ukind(0, 3);

  int failures = 0;
  double worst = 0.0;
  for (int c = 0; c < cases; ++c) {
    std::vector<OracleOp> chain(ulen(rng));
    for (OracleOp& op : chain) {
      op.kind = ukind(rng);
      switch (op.kind) {
        case 0: op.a = ur(rng); break;
        case 1: op.a = uphi(rng); break;
        case 2: op.a = ud(rng); op.b = ud(rng); break;
        case 3: op.a = ut(rng); break;
      }
    }
    GaussianState g = vacuum(1);
    for (const OracleOp& op : chain) {
      switch (op.kind) {
        case 0: g = squeeze(g, 0, op.a); break;
        case 1: g = rotate(g, 0, op.a); break;
        case 2: g = displace(g, 0, op.a, op.b); break;
        case 3: g = loss(g, 0, op.a); break;
      }
    }
    FockMoments fm;
    bool ok_dim = false;
    for (int dim = 40; dim <= 320; dim *= 2) {
      FockState f = fock_vacuum(dim);
      for (const OracleOp& op : chain) {
        switch (op.kind) {
          case 0: f = fock_squeeze(f, 0, op.a); break;
          case 1: f = fock_rotate(f, 0, op.a); break;
          case 2: f = fock_displace(f, 0, op.a, op.b); break;
          case 3: f = fock_loss(f, 0, op.a); break;
        }
      }
      if (fock_leakage(f) < 1e-8) {
        fm = fock_moments(f);
        ok_dim = true;
        break;
      }
    }
    if (!ok_dim) {
      std::fprintf(stderr, "case %d: truncation cap exceeded\n", c);
      ++failures;
      continue;
    }
    const MomentReport hc = homodyne_stats(g, 0, Quadrature::Cosine);
    const MomentReport hs = homodyne_stats(g, 0, Quadrature::Sine);
    const MomentReport pn = photon_stats(g, 0);
    const double tol = 1e-6;
    const bool ok = moments_close(hc.mean, fm.mean_c, tol, &worst) &&
                    moments_close(hs.mean, fm.mean_s, tol, &worst) &&
                    moments_close(hc.variance, fm.var_c, tol, &worst) &&
                    moments_close(hs.variance, fm.var_s, tol, &worst) &&
                    moments_close(pn.mean, fm.n, tol, &worst) &&
                    moments_close(pn.variance, fm.var_n, tol, &worst);
    if (!ok) {
      std::fprintf(stderr, "case %d: moment mismatch beyond 1e-6\n", c);
      ++failures;
    }
  }
  std::printf("oracle-check: %d/%d chains agree (worst deviation %.3g)\n",
              cases - failures, cases, worst);
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-state sensitivity toolkit for squeezing-assisted "
               "interferometers"};
  app.fallthrough();
  app.set_config("--config", "", "flat key=value config file");

  SchemeConfig cfg;
  cfg.alpha = 100.0;
  std::string scheme_name = "su2";
  std::string detection = "homodyne";
  bool gains_in_db = false;
  std::string output;

  app.add_option("--r1", cfg.r1, "input squeeze factor");
  app.add_option("--r2", cfg.r2, "output squeeze factor (<= 0)");
  app.add_option("--mu", cfg.mu, "internal transmissivity");
  app.add_option("--eta", cfg.eta, "external transmissivity");
  app.add_option("--alpha", cfg.alpha, "classical amplitude");
  app.add_option("--psi", cfg.psi, "seed phase offset");
  app.add_option("--dnd", cfg.delta_n_d, "photocounter number noise");
  app.add_option("--scheme", scheme_name,
                 "su2 | su11-seeded | su11-unseeded (or a full scheme name)");
  app.add_option("--detection", detection, "homodyne | direct");
  app.add_flag("--db", gains_in_db, "interpret --r1/--r2 as dB gains");
  app.add_option("-o,--output", output, "output CSV path (default: stdout)");

  auto* fig = app.add_subcommand("figure", "reproduce a figure dataset");
  int figure_id = 0;
  fig->add_option("id", figure_id, "figure id (2-10)")->required();

  auto* sweep = app.add_subcommand("sweep", "sweep one parameter");
  std::string sweep_param;
  double sweep_from = 0.0, sweep_to = 0.0, sweep_step = 0.0;
  sweep->add_option("--param", sweep_param, "r1|r2|mu|eta|phi|psi")
      ->required();
  sweep->add_option("--from", sweep_from)->required();
  sweep->add_option("--to", sweep_to)->required();
  sweep->add_option("--step", sweep_step)->required();

  auto* opt = app.add_subcommand("optimize",
                                 "optimal r1 at fixed N, or the optimal "
                                 "working point of the configured scheme");
  double opt_n = 0.0;
  auto* opt_n_flag = opt->add_option("--n", opt_n, "photon budget N");

  auto* range = app.add_subcommand("range", "supersensitive phase range");

  auto* oracle = app.add_subcommand("oracle-check",
                                    "engine vs Fock-oracle randomized suite");
  int oracle_cases = 200;
  oracle->add_option("--cases", oracle_cases, "number of random chains");

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);

    if (gains_in_db) {
      cfg.r1 = db_to_r(cfg.r1);
      cfg.r2 = db_to_r(cfg.r2);
    }
    cfg.scheme = resolve_scheme(scheme_name, detection);

    if (*fig) {
      emit(run_figure(figure_id, cfg), output);
      return 0;
    }
    if (*sweep) {
      cfg.validate();
      SweepSpec spec;
      spec.varying = sweep_param;
      spec.fixed = cfg;
      if (sweep_step == 0.0)
        throw std::invalid_argument("sweep step must be nonzero");
      for (double v = sweep_from;
           (sweep_step > 0) ? v <= sweep_to + 1e-12 : v >= sweep_to - 1e-12;
           v += sweep_step)
        spec.grid.push_back(v);
      CsvTable t({"value", "dphi_min", "dphi_min_over_snl", "range", "note"});
      set_common_params(t, cfg);
      t.set_param("varying", sweep_param);
      for (const SweepRow& row : run_sweep(spec))
        t.add_row({row.value, row.dphi_min, row.dphi_min_over_snl,
                   row.range_width, row.note});
      emit(t, output);
      return 0;
    }
    if (*opt) {
      if (opt_n_flag->count() > 0) {
        const auto [r1, dmin] = optimize_r1(opt_n);
        CsvTable t({"n", "r1_opt", "dphi_min"});
        t.set_param("mode", "optimize-r1");
        t.add_row({opt_n, r1, dmin});
        emit(t, output);
      } else {
        cfg.validate();
        const auto [phi0, dmin] = optimal_working_point(cfg);
        CsvTable t({"phi0", "dphi_min", "dphi_min_over_snl"});
        set_common_params(t, cfg);
        t.add_row({phi0, dmin, dmin / snl_reference(cfg)});
        emit(t, output);
      }
      return 0;
    }
    if (*range) {
      cfg.validate();
      const RangeResult r = supersensitive_range(cfg);
      CsvTable t({"phi_lo", "phi_hi"});
      set_common_params(t, cfg);
      t.set_param("total_width", r.total_width);
      t.set_param("split_by_peak", r.split_by_peak ? "true" : "false");
      for (const auto& [lo, hi] : r.intervals) t.add_row({lo, hi});
      emit(t, output);
      return 0;
    }
    if (*oracle) return run_oracle_check(oracle_cases);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
