#ifndef SQINTERF_SCHEMES_HPP
#define SQINTERF_SCHEMES_HPP

#include "sqinterf/gaussian.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace sqinterf {

enum class Scheme {
  Su2Homodyne,
  Su11SeededHomodyne,
  Su11SeededDirect,
  Su11UnseededDirect,
  Su11Nondegenerate,
};

enum class Observable {
  CosineQuadrature,
  SineQuadrature,
  PhotonNumber,
  PhotonNumberTotal,
};

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::Su2Homodyne: return "su2-homodyne";
    case Scheme::Su11SeededHomodyne: return "su11-seeded-homodyne";
    case Scheme::Su11SeededDirect: return "su11-seeded-direct";
    case Scheme::Su11UnseededDirect: return "su11-unseeded-direct";
    case Scheme::Su11Nondegenerate: return "su11-nondegenerate";
  }
  return "?";
}

inline Scheme scheme_from_string(const std::string& s) {
  if (s == "su2-homodyne") return Scheme::Su2Homodyne;
  if (s == "su11-seeded-homodyne") return Scheme::Su11SeededHomodyne;
  if (s == "su11-seeded-direct") return Scheme::Su11SeededDirect;
  if (s == "su11-unseeded-direct") return Scheme::Su11UnseededDirect;
  if (s == "su11-nondegenerate") return Scheme::Su11Nondegenerate;
  throw std::invalid_argument("unknown scheme: " + s);
}

/// Free parameters of the interferometer and its detection chain.
///
/// Sign convention: r1 >= 0 (input squeezer), r2 <= 0 (output
/// anti-squeezer); the mirrored pair (r1 <= 0, r2 >= 0) is accepted too so
/// the antisymmetric half of a non-degenerate chain can be configured.
/// Mixed signs (r1*r2 > 0) are rejected.
///
/// For the SU(1,1) schemes `alpha` is the classical amplitude *inside* the
/// interferometer (e^{r1} times the seed amplitude); the builders derive the
/// physical seed from it. For the SU(2) scheme `alpha` is the coherent input
/// amplitude itself.
struct SchemeConfig {
  double r1 = 1.15;       ///< input squeeze factor
  double r2 = -3.0;       ///< output squeeze factor
  double mu = 0.9;        ///< internal transmissivity
  double eta = 0.3;       ///< external (detection) transmissivity
  double alpha = 0.0;     ///< classical amplitude, see above
  double psi = 0.0;       ///< seed phase offset (seeded direct detection)
  double delta_n_d = 0.0; ///< photocounter number noise (unseeded direct)
  Scheme scheme = Scheme::Su2Homodyne;
  std::array<double, 2> seed_split{0.0, 0.0};  ///< (alpha_s, alpha_i), non-degenerate

  void validate() const {
    auto bad = [](const std::string& what) {
      throw std::invalid_argument("invalid config: " + what);
    };
    if (!(mu > 0.0 && mu <= 1.0)) bad("mu must lie in (0, 1]");
    if (!(eta > 0.0 && eta <= 1.0)) bad("eta must lie in (0, 1]");
    if (alpha < 0.0) bad("alpha must be >= 0");
    if (delta_n_d < 0.0) bad("delta_n_d must be >= 0");
    if (r1 * r2 > 0.0) bad("squeeze factors must satisfy r1*r2 <= 0");
    if (scheme == Scheme::Su11UnseededDirect && alpha != 0.0)
      bad("alpha must be 0 for the unseeded scheme");
  }
};

struct DetectorPlan {
  Observable observable = Observable::SineQuadrature;
  std::vector<int> modes{0};
};

inline MomentReport measure(const GaussianState& st, const DetectorPlan& plan) {
  switch (plan.observable) {
    case Observable::CosineQuadrature:
      return homodyne_stats(st, plan.modes.at(0), Quadrature::Cosine);
    case Observable::SineQuadrature:
      return homodyne_stats(st, plan.modes.at(0), Quadrature::Sine);
    case Observable::PhotonNumber:
      return photon_stats(st, plan.modes.at(0));
    case Observable::PhotonNumberTotal:
      return photon_stats_total(st, plan.modes);
  }
  throw std::logic_error("unreachable");
}

/// SU(2) interferometer with squeezed input and output anti-squeezer.
/// Coherent light enters port 1, squeezed vacuum port 2; the arms pick up
/// antisymmetric phase shifts +-phi and internal loss mu; the dark port is
/// anti-squeezed by r2 and read out in the sine quadrature after loss eta.
inline std::pair<GaussianState, DetectorPlan> build_su2(
    const SchemeConfig& cfg, double phi) {
  if (cfg.scheme != Scheme::Su2Homodyne)
    throw std::invalid_argument("build_su2 requires the su2-homodyne scheme");
  cfg.validate();
  GaussianState st = vacuum(2);
  st = displace(st, 0, std::sqrt(2.0) * cfg.alpha, 0.0);
  st = squeeze(st, 1, cfg.r1);
  st = beamsplitter_5050(st, 0, 1, +1);
  st = rotate(st, 0, phi);
  st = rotate(st, 1, -phi);
  st = loss(st, 0, cfg.mu);
  st = loss(st, 1, cfg.mu);
  st = beamsplitter_5050(st, 0, 1, -1);  // mode 0 becomes the dark port
  st = squeeze(st, 0, cfg.r2);
  st = loss(st, 0, cfg.eta);
  return {std::move(st), DetectorPlan{Observable::SineQuadrature, {0}}};
}

/// Degenerate SU(1,1) chain: seed, DOPA1 (r1), phase shift, internal loss,
/// DOPA2 (r2), external loss. The seed is chosen so the classical amplitude
/// inside the interferometer is alpha*e^{-i psi}.
inline std::pair<GaussianState, DetectorPlan> build_su11_degenerate(
    const SchemeConfig& cfg, double phi) {
  if (cfg.scheme != Scheme::Su11SeededHomodyne &&
      cfg.scheme != Scheme::Su11SeededDirect &&
      cfg.scheme != Scheme::Su11UnseededDirect)
    throw std::invalid_argument(
        "build_su11_degenerate requires a degenerate SU(1,1) scheme");
  cfg.validate();
  GaussianState st = vacuum(1);
  if (cfg.scheme != Scheme::Su11UnseededDirect && cfg.alpha != 0.0) {
    // internal amplitude (sqrt2 a cos psi, -sqrt2 a sin psi), pulled back
    // through DOPA1
    const double ac = std::sqrt(2.0) * cfg.alpha * std::cos(cfg.psi);
    const double as = -std::sqrt(2.0) * cfg.alpha * std::sin(cfg.psi);
    st = displace(st, 0, std::exp(-cfg.r1) * ac, std::exp(cfg.r1) * as);
  }
  st = squeeze(st, 0, cfg.r1);
  st = rotate(st, 0, phi);
  st = loss(st, 0, cfg.mu);
  st = squeeze(st, 0, cfg.r2);
  st = loss(st, 0, cfg.eta);
  const Observable obs = cfg.scheme == Scheme::Su11SeededHomodyne
                             ? Observable::SineQuadrature
                             : Observable::PhotonNumber;
  return {std::move(st), DetectorPlan{obs, {0}}};
}

/// Non-degenerate SU(1,1) chain on signal/idler modes with equal phase
/// shifts and equal losses in both arms. seed_split holds the internal
/// classical amplitudes (alpha_s, alpha_i).
inline std::pair<GaussianState, DetectorPlan> build_su11_nondegenerate(
    const SchemeConfig& cfg, double phi) {
  if (cfg.scheme != Scheme::Su11Nondegenerate)
    throw std::invalid_argument(
        "build_su11_nondegenerate requires the non-degenerate scheme");
  cfg.validate();
  GaussianState st = vacuum(2);
  const double as = cfg.seed_split[0];
  const double ai = cfg.seed_split[1];
  if (as != 0.0 || ai != 0.0) {
    // invert the NOPA1 mean map to seed the requested internal amplitudes
    const double ch = std::cosh(cfg.r1), sh = std::sinh(cfg.r1);
    st = displace(st, 0, std::sqrt(2.0) * (as * ch - ai * sh), 0.0);
    st = displace(st, 1, std::sqrt(2.0) * (ai * ch - as * sh), 0.0);
  }
  st = squeeze_two_mode(st, 0, 1, cfg.r1);
  st = rotate(st, 0, phi);
  st = rotate(st, 1, phi);
  st = loss(st, 0, cfg.mu);
  st = loss(st, 1, cfg.mu);
  st = squeeze_two_mode(st, 0, 1, cfg.r2);
  st = loss(st, 0, cfg.eta);
  st = loss(st, 1, cfg.eta);
  return {std::move(st), DetectorPlan{Observable::PhotonNumberTotal, {0, 1}}};
}

/// Builder dispatch on the configured scheme.
inline std::pair<GaussianState, DetectorPlan> build_scheme(
    const SchemeConfig& cfg, double phi) {
  switch (cfg.scheme) {
    case Scheme::Su2Homodyne: return build_su2(cfg, phi);
    case Scheme::Su11SeededHomodyne:
    case Scheme::Su11SeededDirect:
    case Scheme::Su11UnseededDirect: return build_su11_degenerate(cfg, phi);
    case Scheme::Su11Nondegenerate: return build_su11_nondegenerate(cfg, phi);
  }
  throw std::logic_error("unreachable");
}

/// Change of basis to the symmetric/antisymmetric modes
/// a_pm = (a_s +- a_i)/sqrt(2). Valid only when the +- modes decouple;
/// residual cross-covariance above 1e-10 signals an asymmetric chain.
inline std::pair<GaussianState, GaussianState> decompose_pm(
    const GaussianState& st) {
  if (st.num_modes() != 2)
    throw std::invalid_argument("decompose_pm needs a two-mode state");
  const double q = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd t(4, 4);
  t.setZero();
  t.block<2, 2>(0, 0) = q * Eigen::Matrix2d::Identity();
  t.block<2, 2>(0, 2) = q * Eigen::Matrix2d::Identity();
  t.block<2, 2>(2, 0) = q * Eigen::Matrix2d::Identity();
  t.block<2, 2>(2, 2) = -q * Eigen::Matrix2d::Identity();
  Eigen::VectorXd m = t * st.mean();
  Eigen::MatrixXd c = t * st.cov() * t.transpose();
  if (c.block<2, 2>(0, 2).cwiseAbs().maxCoeff() > 1e-10)
    throw std::domain_error(
        "residual +/- cross-correlation: chain is not symmetric");
  GaussianState plus(m.head<2>(), c.block<2, 2>(0, 0));
  GaussianState minus(m.tail<2>(), c.block<2, 2>(2, 2));
  return {std::move(plus), std::move(minus)};
}

/// Inverse-variance combination of two independent phase estimates.
inline double combine_pm_sensitivity(double dphi_plus, double dphi_minus) {
  if (!(dphi_plus > 0.0) || !(dphi_minus > 0.0))
    throw std::invalid_argument("sensitivities must be positive");
  const bool pinf = std::isinf(dphi_plus);
  const bool minf = std::isinf(dphi_minus);
  if (pinf && minf)
    throw std::invalid_argument("both channels are insensitive");
  if (pinf) return dphi_minus;
  if (minf) return dphi_plus;
  return 1.0 / std::sqrt(1.0 / (dphi_plus * dphi_plus) +
                         1.0 / (dphi_minus * dphi_minus));
}

}  // namespace sqinterf

#endif  // SQINTERF_SCHEMES_HPP
