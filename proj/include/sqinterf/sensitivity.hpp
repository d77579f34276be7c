#ifndef SQINTERF_SENSITIVITY_HPP
#define SQINTERF_SENSITIVITY_HPP

#include "sqinterf/schemes.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace sqinterf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One sample of a phase-sensitivity curve. `dphi` is +inf at insensitive
/// working points (zero slope of the measured observable).
struct SensitivityPoint {
  double phi = 0.0;
  double dphi = 0.0;
  double dphi_over_snl = 0.0;
  std::string formula_id;
  bool flux_ok = true;  ///< false when the mean flux is too low for the formula
};

inline double snl(double n) {
  if (!(n > 0.0)) throw std::invalid_argument("snl requires N > 0");
  return 1.0 / (2.0 * std::sqrt(n));
}

inline double heisenberg(double n) {
  if (!(n > 0.0)) throw std::invalid_argument("heisenberg requires N > 0");
  return 1.0 / (2.0 * n);
}

/// Exact optimized form 1/sqrt(4N(N+1)); approaches heisenberg(N) for large N.
inline double heisenberg_exact(double n) {
  if (!(n > 0.0)) throw std::invalid_argument("heisenberg_exact requires N > 0");
  return 1.0 / std::sqrt(4.0 * n * (n + 1.0));
}

inline double caves_sensitivity(double n, double r) {
  if (!(n > 0.0))
    throw std::invalid_argument("caves_sensitivity requires N > 0");
  return std::exp(-r) / (2.0 * std::sqrt(n));
}

/// Mean photon number used for the SNL reference: alpha^2 + sinh^2 r1
/// exactly, or just alpha^2 when `approx_n` is set (reproduces the
/// high-precision-regime normalization of the figures).
inline double reference_photon_number(const SchemeConfig& cfg,
                                      bool approx_n = false) {
  const double sq = std::sinh(cfg.r1) * std::sinh(cfg.r1);
  return approx_n ? cfg.alpha * cfg.alpha : cfg.alpha * cfg.alpha + sq;
}

inline double snl_reference(const SchemeConfig& cfg, bool approx_n = false) {
  return snl(reference_photon_number(cfg, approx_n));
}

namespace detail {

inline SensitivityPoint make_point(const SchemeConfig& cfg, double phi,
                                   double dphi, const char* id,
                                   bool flux_ok = true) {
  SensitivityPoint p;
  p.phi = phi;
  p.dphi = dphi;
  p.dphi_over_snl = dphi / snl_reference(cfg);
  p.formula_id = id;
  p.flux_ok = flux_ok;
  return p;
}

}  // namespace detail

/// Best homodyne sensitivity, reached at phi = 0. Identical for the SU(2)
/// and the seeded SU(1,1) homodyne schemes.
inline double homodyne_dphi_min(const SchemeConfig& cfg) {
  if (cfg.alpha <= 0.0)
    throw std::invalid_argument("homodyne schemes require alpha > 0");
  const double v = std::exp(-2.0 * cfg.r1) + (1.0 - cfg.mu) / cfg.mu +
                   (1.0 - cfg.eta) / (cfg.mu * cfg.eta) * std::exp(2.0 * cfg.r2);
  return std::sqrt(v) / (2.0 * cfg.alpha);
}

/// The tan^2(phi) deterioration factor K of the homodyne sensitivity
/// (Delta phi)^2 = dphi_min^2 + K tan^2(phi). The SU(1,1) version carries
/// an extra e^{2 r1} from the anti-squeezed quadrature.
inline double homodyne_k(const SchemeConfig& cfg) {
  if (cfg.alpha <= 0.0)
    throw std::invalid_argument("homodyne schemes require alpha > 0");
  const double ext = (1.0 - cfg.eta) / (cfg.mu * cfg.eta) * std::exp(2.0 * cfg.r2);
  double k = 0.0;
  switch (cfg.scheme) {
    case Scheme::Su2Homodyne:
      k = 1.0 / cfg.mu + ext;
      break;
    case Scheme::Su11SeededHomodyne:
      k = std::exp(2.0 * cfg.r1) + (1.0 - cfg.mu) / cfg.mu + ext;
      break;
    default:
      throw std::invalid_argument("homodyne_k: not a homodyne scheme");
  }
  return k / (4.0 * cfg.alpha * cfg.alpha);
}

inline SensitivityPoint su2_homodyne(const SchemeConfig& cfg, double phi) {
  if (cfg.scheme != Scheme::Su2Homodyne)
    throw std::invalid_argument("su2_homodyne: wrong scheme tag");
  cfg.validate();
  const double dmin = homodyne_dphi_min(cfg);
  const double c = std::cos(phi);
  if (std::fabs(c) < 1e-15)
    return detail::make_point(cfg, phi, kInf, "su2-homodyne");
  const double t = std::tan(phi);
  const double d2 = dmin * dmin + homodyne_k(cfg) * t * t;
  return detail::make_point(cfg, phi, std::sqrt(d2), "su2-homodyne");
}

inline SensitivityPoint su11_homodyne(const SchemeConfig& cfg, double phi) {
  if (cfg.scheme != Scheme::Su11SeededHomodyne)
    throw std::invalid_argument("su11_homodyne: wrong scheme tag");
  cfg.validate();
  const double dmin = homodyne_dphi_min(cfg);
  const double c = std::cos(phi);
  if (std::fabs(c) < 1e-15)
    return detail::make_point(cfg, phi, kInf, "su11-homodyne");
  const double t = std::tan(phi);
  const double d2 = dmin * dmin + homodyne_k(cfg) * t * t;
  return detail::make_point(cfg, phi, std::sqrt(d2), "su11-homodyne");
}

/// Intermediate quantities of the direct-detection sensitivity formulas.
struct DirectDetectionTerms {
  double sigma_a2 = 0.0;   ///< amplified-quadrature variance contribution
  double sigma_m2 = 0.0;   ///< internal-loss contribution
  double sigma_n2 = 0.0;   ///< external-loss contribution
  double dn_dphi = 0.0;    ///< slope of the mean photon number
  double theta_abs2 = 0.0; ///< |theta(phi)|^2 (seeded classical amplitude)
  double c_abs2 = 0.0;     ///< |C(phi)|^2
  double s_abs2 = 0.0;     ///< |S(phi)|^2
  double a = 0.0;          ///< phase-independent factor A (unseeded)
  double b = 0.0;          ///< phase-independent factor B (unseeded)
};

namespace detail {

inline std::pair<std::complex<double>, std::complex<double>> bogolyubov_cs(
    double r1, double r2, double phi) {
  const std::complex<double> em(std::cos(phi), -std::sin(phi));
  const std::complex<double> ep = std::conj(em);
  const std::complex<double> c =
      std::cosh(r1) * std::cosh(r2) * em + std::sinh(r1) * std::sinh(r2) * ep;
  const std::complex<double> s =
      std::sinh(r1) * std::cosh(r2) * em + std::cosh(r1) * std::sinh(r2) * ep;
  return {c, s};
}

}  // namespace detail

inline DirectDetectionTerms direct_detection_terms(const SchemeConfig& cfg,
                                                   double phi) {
  cfg.validate();
  DirectDetectionTerms t;
  const double pp = phi + cfg.psi;
  const double cp2 = std::cos(pp) * std::cos(pp);
  const double sp2 = std::sin(pp) * std::sin(pp);
  t.sigma_n2 = std::exp(2.0 * cfg.r2) * cp2 + std::exp(-2.0 * cfg.r2) * sp2;
  t.sigma_m2 = std::exp(4.0 * cfg.r2) * cp2 + std::exp(-4.0 * cfg.r2) * sp2;
  t.sigma_a2 =
      std::cosh(2.0 * cfg.r1) * std::cosh(4.0 * cfg.r2) +
      std::sinh(2.0 * cfg.r1) *
          (std::cosh(4.0 * cfg.r2) * std::cos(2.0 * phi) * std::cos(2.0 * pp) +
           std::sin(2.0 * phi) * std::sin(2.0 * pp)) +
      (std::cosh(2.0 * cfg.r1) * std::cos(2.0 * pp) +
       std::sinh(2.0 * cfg.r1) * std::cos(2.0 * phi)) *
          std::sinh(4.0 * cfg.r2);
  const double a2 = cfg.alpha * cfg.alpha;
  t.theta_abs2 = a2 * (std::cosh(2.0 * cfg.r2) +
                       std::sinh(2.0 * cfg.r2) * std::cos(2.0 * pp));
  auto [c, s] = detail::bogolyubov_cs(cfg.r1, cfg.r2, phi);
  t.c_abs2 = std::norm(c);
  t.s_abs2 = std::norm(s);
  const double sh2 = std::sinh(cfg.r2) * std::sinh(cfg.r2);
  const double lm = (1.0 - cfg.mu) / cfg.mu;
  t.a = 2.0 * lm * sh2 + (1.0 - cfg.mu * cfg.eta) / (cfg.mu * cfg.eta);
  t.b = lm * sh2 * (t.a + 1.0 / cfg.mu) +
        cfg.delta_n_d * cfg.delta_n_d / (cfg.mu * cfg.mu * cfg.eta * cfg.eta);
  if (cfg.scheme == Scheme::Su11UnseededDirect) {
    t.dn_dphi = cfg.mu * cfg.eta * std::sinh(2.0 * cfg.r1) *
                std::sinh(2.0 * cfg.r2) * std::sin(2.0 * phi);
  } else {
    t.dn_dphi = -2.0 * cfg.mu * cfg.eta * a2 * std::sinh(2.0 * cfg.r2) *
                std::sin(2.0 * pp);
  }
  return t;
}

/// Seeded direct detection, exact form valid at any phi away from the
/// insensitive points sin 2(phi+psi) = 0.
inline SensitivityPoint su11_direct_seeded_exact(const SchemeConfig& cfg,
                                                 double phi) {
  if (cfg.scheme != Scheme::Su11SeededDirect)
    throw std::invalid_argument("su11_direct_seeded_exact: wrong scheme tag");
  cfg.validate();
  if (cfg.alpha <= 0.0)
    throw std::invalid_argument("seeded scheme requires alpha > 0");
  const DirectDetectionTerms t = direct_detection_terms(cfg, phi);
  const double s2pp = std::sin(2.0 * (phi + cfg.psi));
  if (s2pp == 0.0)
    return detail::make_point(cfg, phi, kInf, "su11-direct-seeded-exact");
  const double num = t.sigma_a2 + (1.0 - cfg.mu) / cfg.mu * t.sigma_m2 +
                     (1.0 - cfg.eta) / (cfg.mu * cfg.eta) * t.sigma_n2;
  const double sh = std::sinh(2.0 * cfg.r2);
  const double den =
      4.0 * cfg.alpha * cfg.alpha * sh * sh * s2pp * s2pp;
  return detail::make_point(cfg, phi, std::sqrt(num / den),
                            "su11-direct-seeded-exact");
}

/// Seeded direct detection, small-angle / high-gain approximation.
/// Valid for e^{-r1}, e^{-|r2|} << 1 and small |phi|, |psi|; the caller
/// owns the regime.
inline SensitivityPoint su11_direct_seeded_approx(const SchemeConfig& cfg,
                                                  double phi) {
  if (cfg.scheme != Scheme::Su11SeededDirect)
    throw std::invalid_argument("su11_direct_seeded_approx: wrong scheme tag");
  cfg.validate();
  if (cfg.alpha <= 0.0)
    throw std::invalid_argument("seeded scheme requires alpha > 0");
  const double ar2 = std::fabs(cfg.r2);
  const double pp = phi + cfg.psi;
  if (pp == 0.0)
    return detail::make_point(cfg, phi, kInf, "su11-direct-seeded-approx");
  const double q = std::exp(-4.0 * ar2) / pp;
  const double v =
      std::exp(-2.0 * cfg.r1) +
      (phi + q) * (phi + q) * std::exp(2.0 * cfg.r1) +
      (1.0 - cfg.mu) / cfg.mu * (1.0 + std::exp(-8.0 * ar2) / (pp * pp)) +
      (1.0 - cfg.eta) / (cfg.mu * cfg.eta) * std::exp(-2.0 * ar2) *
          (1.0 + std::exp(-4.0 * ar2) / (pp * pp));
  return detail::make_point(cfg, phi,
                            std::sqrt(v / (4.0 * cfg.alpha * cfg.alpha)),
                            "su11-direct-seeded-approx");
}

/// Mean flux below which the unseeded direct formulas lose their footing;
/// flagged on the returned point, never an error.
inline constexpr double kUnseededFluxThreshold = 10.0;

/// Unseeded direct detection, exact. The photocounting variance is taken
/// from the exact fourth-moment expansion of the zero-mean Gaussian output,
///   (Delta N_f)^2 = |<f f>|^2 + <N_f>(<N_f> + 1),
/// which keeps the internal-loss/anti-squeezer interference term that the
/// factorized A/B bookkeeping drops.
inline SensitivityPoint su11_direct_unseeded_exact(const SchemeConfig& cfg,
                                                   double phi) {
  if (cfg.scheme != Scheme::Su11UnseededDirect)
    throw std::invalid_argument("su11_direct_unseeded_exact: wrong scheme tag");
  cfg.validate();
  auto [c, s] = detail::bogolyubov_cs(cfg.r1, cfg.r2, phi);
  const double ch = std::cosh(cfg.r2), sh = std::sinh(cfg.r2);
  const double nbar =
      cfg.eta * (cfg.mu * std::norm(s) + (1.0 - cfg.mu) * sh * sh);
  const std::complex<double> ff =
      cfg.mu * cfg.eta * c * s + cfg.eta * (1.0 - cfg.mu) * ch * sh;
  const double var =
      std::norm(ff) + nbar * (nbar + 1.0) + cfg.delta_n_d * cfg.delta_n_d;
  const double slope = cfg.mu * cfg.eta * std::sinh(2.0 * cfg.r1) *
                       std::sinh(2.0 * cfg.r2) * std::sin(2.0 * phi);
  const bool flux_ok = nbar >= kUnseededFluxThreshold;
  if (slope == 0.0)
    return detail::make_point(cfg, phi, kInf, "su11-direct-unseeded-exact",
                              flux_ok);
  return detail::make_point(cfg, phi, std::sqrt(var) / std::fabs(slope),
                            "su11-direct-unseeded-exact", flux_ok);
}

/// Unseeded direct detection, small-phi three-term form with R = r1 + r2.
inline SensitivityPoint su11_direct_unseeded_smallphi(const SchemeConfig& cfg,
                                                      double phi) {
  if (cfg.scheme != Scheme::Su11UnseededDirect)
    throw std::invalid_argument(
        "su11_direct_unseeded_smallphi: wrong scheme tag");
  cfg.validate();
  if (phi == 0.0)
    return detail::make_point(cfg, phi, kInf, "su11-direct-unseeded-smallphi");
  const DirectDetectionTerms t = direct_detection_terms(cfg, phi);
  const double r = cfg.r1 + cfg.r2;
  const double s12 = std::sinh(2.0 * cfg.r1) * std::sinh(2.0 * cfg.r2);
  const double s2r = std::sinh(2.0 * r);
  const double shr = std::sinh(r);
  const double d2 =
      0.5 * (phi * phi +
             (std::cosh(2.0 * r) + 0.5 * t.a) / std::fabs(s12) +
             (s2r * s2r + 2.0 * (t.a * shr * shr + t.b)) /
                 (4.0 * phi * phi * s12 * s12));
  return detail::make_point(cfg, phi, std::sqrt(d2),
                            "su11-direct-unseeded-smallphi");
}

/// Closed-form minimizer of the small-phi unseeded expression.
inline double unseeded_phi_min_closed(const SchemeConfig& cfg) {
  const DirectDetectionTerms t = direct_detection_terms(cfg, 0.0);
  const double r = cfg.r1 + cfg.r2;
  const double s12 =
      std::fabs(std::sinh(2.0 * cfg.r1) * std::sinh(2.0 * cfg.r2));
  const double s2r = std::sinh(2.0 * r);
  const double shr = std::sinh(r);
  const double phi0_sq =
      std::sqrt(s2r * s2r + 2.0 * (t.a * shr * shr + t.b)) / (2.0 * s12);
  return std::sqrt(phi0_sq);
}

/// Dispatch to the exact closed form matching the configured scheme.
inline SensitivityPoint closed_form(const SchemeConfig& cfg, double phi) {
  switch (cfg.scheme) {
    case Scheme::Su2Homodyne: return su2_homodyne(cfg, phi);
    case Scheme::Su11SeededHomodyne: return su11_homodyne(cfg, phi);
    case Scheme::Su11SeededDirect: return su11_direct_seeded_exact(cfg, phi);
    case Scheme::Su11UnseededDirect:
      return su11_direct_unseeded_exact(cfg, phi);
    case Scheme::Su11Nondegenerate:
      throw std::invalid_argument(
          "closed_form: decompose the non-degenerate scheme first");
  }
  throw std::logic_error("unreachable");
}

}  // namespace sqinterf

#endif  // SQINTERF_SENSITIVITY_HPP
