#ifndef SQINTERF_ANALYSIS_HPP
#define SQINTERF_ANALYSIS_HPP

#include "sqinterf/sensitivity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace sqinterf {

/// Numeric error propagation (Delta phi)^2 = Delta O^2 / (d<O>/dphi)^2
/// through the Gaussian engine. The slope uses central differences with
/// step h and a Richardson refinement at h/2; the refined value is
/// returned. Returns +inf when the slope vanishes.
inline double numeric_sensitivity(const SchemeConfig& cfg, double phi,
                                  double h = 1e-5) {
  cfg.validate();
  auto moments = [&](double p) {
    auto [st, plan] = build_scheme(cfg, p);
    return measure(st, plan);
  };
  const MomentReport m0 = moments(phi);
  double var = m0.variance;
  if (cfg.scheme == Scheme::Su11UnseededDirect)
    var += cfg.delta_n_d * cfg.delta_n_d;
  auto slope_at = [&](double step) {
    return (moments(phi + step).mean - moments(phi - step).mean) /
           (2.0 * step);
  };
  const double s1 = slope_at(h);
  const double s2 = slope_at(h / 2.0);
  const double slope = (4.0 * s2 - s1) / 3.0;  // Richardson extrapolation
  // scale-aware zero-slope cutoff: differencing a mean of magnitude m
  // cannot resolve slopes below ~m*eps/h
  if (std::fabs(slope) < 1e-14 * std::max(1.0, std::fabs(m0.mean)))
    return kInf;
  return std::sqrt(var) / std::fabs(slope);
}

/// Supersensitive working-point intervals: where Delta phi < Delta phi_SNL.
struct RangeResult {
  std::vector<std::pair<double, double>> intervals;
  double total_width = 0.0;
  bool split_by_peak = false;
};

namespace detail {

inline double bisect_crossing(const std::function<double(double)>& f,
                              double lo, double hi, double tol = 1e-6) {
  // f changes sign on [lo, hi]; returns the root to tolerance tol.
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Default scan window per scheme: one period of the deterioration factor.
inline std::pair<double, double> default_phi_window(Scheme s) {
  switch (s) {
    case Scheme::Su2Homodyne:
    case Scheme::Su11SeededHomodyne:
      return {-std::acos(-1.0) / 2.0, std::acos(-1.0) / 2.0};
    default:
      return {-std::acos(-1.0) / 4.0, std::acos(-1.0) / 4.0};
  }
}

inline RangeResult supersensitive_range(const SchemeConfig& cfg,
                                        std::pair<double, double> window,
                                        double resolution = 1e-4) {
  cfg.validate();
  RangeResult out;
  const double ref = snl_reference(cfg);
  if (cfg.scheme == Scheme::Su2Homodyne ||
      cfg.scheme == Scheme::Su11SeededHomodyne) {
    // closed form: a single interval centered at phi = 0
    const double dmin = homodyne_dphi_min(cfg);
    if (dmin < ref) {
      const double half =
          std::atan(std::sqrt((ref * ref - dmin * dmin) / homodyne_k(cfg)));
      out.intervals.emplace_back(-half, half);
      out.total_width = 2.0 * half;
    }
    return out;
  }
  // direct schemes: grid scan + bisection refinement of each crossing
  auto excess = [&](double p) { return closed_form(cfg, p).dphi - ref; };
  const auto [lo, hi] = window;
  if (!(hi > lo)) throw std::invalid_argument("empty scan window");
  const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / resolution)));
  bool inside = false;
  double start = 0.0;
  double prev_phi = lo;
  double prev_val = excess(lo);
  for (int i = 1; i <= n; ++i) {
    const double p = lo + (hi - lo) * i / n;
    const double v = excess(p);
    const bool super = v < 0.0;
    if (super && !inside) {
      start = std::isinf(prev_val)
                  ? p
                  : detail::bisect_crossing(excess, prev_phi, p);
      inside = true;
    } else if (!super && inside) {
      const double end = std::isinf(v)
                             ? prev_phi
                             : detail::bisect_crossing(excess, prev_phi, p);
      out.intervals.emplace_back(start, end);
      inside = false;
    }
    prev_phi = p;
    prev_val = v;
  }
  if (inside) out.intervals.emplace_back(start, hi);
  for (const auto& [a, b] : out.intervals) out.total_width += b - a;
  // the insensitive point (zero slope) splits the region when it falls in a
  // gap between intervals
  const double peak =
      cfg.scheme == Scheme::Su11SeededDirect ? -cfg.psi : 0.0;
  if (peak > lo && peak < hi && out.intervals.size() >= 2) {
    bool in_gap = true;
    bool left = false, right = false;
    for (const auto& [a, b] : out.intervals) {
      if (peak >= a && peak <= b) in_gap = false;
      if (b <= peak) left = true;
      if (a >= peak) right = true;
    }
    out.split_by_peak = in_gap && left && right;
  }
  return out;
}

inline RangeResult supersensitive_range(const SchemeConfig& cfg) {
  return supersensitive_range(cfg, default_phi_window(cfg.scheme));
}

/// Optimal input squeeze factor at fixed total photon number N (lossless):
/// e^{2 r1} = 2N + 1, with the remaining budget in the coherent amplitude.
inline std::pair<double, double> optimize_r1(double n) {
  if (!(n > 0.0)) throw std::invalid_argument("optimize_r1 requires N > 0");
  const double r1 = 0.5 * std::log(2.0 * n + 1.0);
  return {r1, heisenberg_exact(n)};
}

namespace detail {

/// Golden-section minimization with a coarse bracketing scan. Reports the
/// leftmost minimizer on plateaus.
inline std::pair<double, double> minimize_scalar(
    const std::function<double(double)>& f, double lo, double hi,
    double tol = 1e-8, int coarse = 2001) {
  int best = -1;
  double fbest = kInf;
  std::vector<double> xs(coarse), fs(coarse);
  for (int i = 0; i < coarse; ++i) {
    xs[i] = lo + (hi - lo) * i / (coarse - 1);
    fs[i] = f(xs[i]);
    if (fs[i] < fbest) {
      fbest = fs[i];
      best = i;
    }
  }
  if (best < 0) throw std::runtime_error("minimize_scalar: no finite value");
  double a = xs[std::max(0, best - 1)];
  double b = xs[std::min(coarse - 1, best + 1)];
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  int iter = 0;
  while (b - a > tol) {
    if (++iter > 200)
      throw std::runtime_error("minimize_scalar: iteration cap exceeded");
    if (fc <= fd) {  // prefer the left half on ties
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace detail

/// Best working point and sensitivity for the configured scheme. Homodyne
/// schemes peak at phi = 0 exactly; direct schemes are minimized
/// numerically over the default window.
inline std::pair<double, double> optimal_working_point(
    const SchemeConfig& cfg) {
  cfg.validate();
  if (cfg.scheme == Scheme::Su2Homodyne ||
      cfg.scheme == Scheme::Su11SeededHomodyne)
    return {0.0, homodyne_dphi_min(cfg)};
  const auto [lo, hi] = default_phi_window(cfg.scheme);
  auto f = [&](double p) { return closed_form(cfg, p).dphi; };
  return detail::minimize_scalar(f, lo, hi);
}

/// The output gain |r2| at which the external-loss term of the homodyne
/// dphi_min contributes 1% of the internal terms, i.e. the gain needed to
/// recover lossless-detection sensitivity to 1%. Zero when eta = 1.
inline double recovery_gain(const SchemeConfig& cfg) {
  cfg.validate();
  if (cfg.eta >= 1.0) return 0.0;
  const double internal = cfg.mu * std::exp(-2.0 * cfg.r1) + (1.0 - cfg.mu);
  return 0.5 * std::log(100.0 * (1.0 - cfg.eta) / (cfg.eta * internal));
}

/// Parameter sweep driving the figure reproductions.
struct SweepSpec {
  std::string varying;       ///< one of r1, r2, mu, eta, phi, psi
  std::vector<double> grid;  ///< strictly monotone, length >= 2
  SchemeConfig fixed;

  void validate() const {
    if (grid.size() < 2)
      throw std::invalid_argument("sweep grid needs at least 2 points");
    const bool inc = grid[1] > grid[0];
    for (std::size_t i = 1; i < grid.size(); ++i)
      if ((grid[i] > grid[i - 1]) != inc || grid[i] == grid[i - 1])
        throw std::invalid_argument("sweep grid must be strictly monotone");
    static const char* names[] = {"r1", "r2", "mu", "eta", "phi", "psi"};
    if (std::find(std::begin(names), std::end(names), varying) ==
        std::end(names))
      throw std::invalid_argument("unknown sweep parameter: " + varying);
  }
};

struct SweepRow {
  double value = 0.0;
  double dphi_min = 0.0;
  double dphi_min_over_snl = 0.0;
  double range_width = 0.0;
  std::string note;  ///< non-empty when the point failed to evaluate
};

inline SchemeConfig with_parameter(SchemeConfig cfg, const std::string& name,
                                   double v) {
  if (name == "r1") cfg.r1 = v;
  else if (name == "r2") cfg.r2 = v;
  else if (name == "mu") cfg.mu = v;
  else if (name == "eta") cfg.eta = v;
  else if (name == "psi") cfg.psi = v;
  else if (name == "phi") { /* handled by the caller */ }
  else throw std::invalid_argument("unknown parameter: " + name);
  return cfg;
}

inline int sweep_thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("SQINTERF_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < n)
      n = static_cast<unsigned>(cap);
  }
  return static_cast<int>(n);
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows(spec.grid.size());
  auto eval = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.value = spec.grid[i];
    try {
      if (spec.varying == "phi") {
        const SensitivityPoint p = closed_form(spec.fixed, spec.grid[i]);
        row.dphi_min = p.dphi;
        row.dphi_min_over_snl = p.dphi_over_snl;
        row.range_width = 0.0;
        return;
      }
      const SchemeConfig cfg =
          with_parameter(spec.fixed, spec.varying, spec.grid[i]);
      const auto [phi0, dmin] = optimal_working_point(cfg);
      (void)phi0;
      row.dphi_min = dmin;
      row.dphi_min_over_snl = dmin / snl_reference(cfg);
      row.range_width = supersensitive_range(cfg).total_width;
    } catch (const std::exception& e) {
      row.dphi_min = kInf;
      row.dphi_min_over_snl = kInf;
      row.range_width = 0.0;
      row.note = e.what();
    }
  };
  const int threads = sweep_thread_count();
  if (threads <= 1 || rows.size() < 2) {
    for (std::size_t i = 0; i < rows.size(); ++i) eval(i);
    return rows;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};  // rows are disjoint; only the index is shared
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= rows.size()) return;
        eval(i);
      }
    });
  }
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace sqinterf

#endif  // SQINTERF_ANALYSIS_HPP
