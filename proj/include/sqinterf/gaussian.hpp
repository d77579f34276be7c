#ifndef SQINTERF_GAUSSIAN_HPP
#define SQINTERF_GAUSSIAN_HPP

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqinterf {

/// First and second moment of a measured observable.
struct MomentReport {
  double mean = 0.0;
  double variance = 0.0;
};

enum class Quadrature { Cosine, Sine };

/// Gaussian state of M bosonic modes, stored as the mean quadrature vector
/// and the quadrature covariance matrix in the (c1, s1, c2, s2, ...) basis.
/// Vacuum has zero mean and variance 1/2 per quadrature.
///
/// States are immutable values; every operation below returns a new state.
class GaussianState {
 public:
  explicit GaussianState(int num_modes)
      : num_modes_(num_modes),
        mean_(Eigen::VectorXd::Zero(2 * num_modes)),
        cov_(0.5 * Eigen::MatrixXd::Identity(2 * num_modes, 2 * num_modes)) {
    if (num_modes < 1) throw std::invalid_argument("num_modes must be >= 1");
  }

  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
      : num_modes_(static_cast<int>(mean.size()) / 2),
        mean_(std::move(mean)),
        cov_(std::move(cov)) {
    if (mean_.size() < 2 || mean_.size() % 2 != 0 ||
        cov_.rows() != mean_.size() || cov_.cols() != mean_.size())
      throw std::invalid_argument("inconsistent mean/cov dimensions");
    enforce_valid_covariance();
  }

  int num_modes() const { return num_modes_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  void check_mode(int mode) const {
    if (mode < 0 || mode >= num_modes_)
      throw std::invalid_argument("mode index out of range: " +
                                  std::to_string(mode));
  }

 private:
  // Symmetrize and clamp round-off negatives. Eigenvalues below -1e-12
  // signal a bug in the calling transformation, not round-off.
  void enforce_valid_covariance() {
    cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -1e-12)
      throw std::domain_error("covariance lost positivity (min eigenvalue " +
                              std::to_string(lo) + ")");
    if (lo < 0.0) {
      Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
      cov_ = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    }
  }

  int num_modes_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

namespace detail {

inline Eigen::Matrix2d squeeze_block(double r) {
  Eigen::Matrix2d s;
  s << std::exp(r), 0.0, 0.0, std::exp(-r);
  return s;
}

inline Eigen::Matrix2d rotation_block(double phi) {
  Eigen::Matrix2d o;
  o << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
  return o;
}

// Idler-conjugation block: flips the sign of the sine quadrature.
inline Eigen::Matrix2d conjugation_block() {
  Eigen::Matrix2d z;
  z << 1.0, 0.0, 0.0, -1.0;
  return z;
}

inline GaussianState apply_linear(const GaussianState& st,
                                  const Eigen::MatrixXd& t) {
  return GaussianState(t * st.mean(), t * st.cov() * t.transpose());
}

}  // namespace detail

inline GaussianState vacuum(int num_modes) { return GaussianState(num_modes); }

inline GaussianState displace(const GaussianState& st, int mode, double dc,
                              double ds) {
  st.check_mode(mode);
  Eigen::VectorXd m = st.mean();
  m[2 * mode] += dc;
  m[2 * mode + 1] += ds;
  return GaussianState(std::move(m), st.cov());
}

inline GaussianState squeeze(const GaussianState& st, int mode, double r) {
  st.check_mode(mode);
  Eigen::MatrixXd t =
      Eigen::MatrixXd::Identity(2 * st.num_modes(), 2 * st.num_modes());
  t.block<2, 2>(2 * mode, 2 * mode) = detail::squeeze_block(r);
  return detail::apply_linear(st, t);
}

/// Non-degenerate squeezer: b_s = a_s cosh r + a_i^dag sinh r and the
/// idler counterpart. Equivalent to +r / -r single-mode squeezers in the
/// symmetric/antisymmetric mode basis.
inline GaussianState squeeze_two_mode(const GaussianState& st, int mode_s,
                                      int mode_i, double r) {
  st.check_mode(mode_s);
  st.check_mode(mode_i);
  if (mode_s == mode_i)
    throw std::invalid_argument("signal and idler modes must differ");
  Eigen::MatrixXd t =
      Eigen::MatrixXd::Identity(2 * st.num_modes(), 2 * st.num_modes());
  const Eigen::Matrix2d z = detail::conjugation_block();
  t.block<2, 2>(2 * mode_s, 2 * mode_s) = std::cosh(r) * Eigen::Matrix2d::Identity();
  t.block<2, 2>(2 * mode_i, 2 * mode_i) = std::cosh(r) * Eigen::Matrix2d::Identity();
  t.block<2, 2>(2 * mode_s, 2 * mode_i) = std::sinh(r) * z;
  t.block<2, 2>(2 * mode_i, 2 * mode_s) = std::sinh(r) * z;
  return detail::apply_linear(st, t);
}

inline GaussianState rotate(const GaussianState& st, int mode, double phi) {
  st.check_mode(mode);
  Eigen::MatrixXd t =
      Eigen::MatrixXd::Identity(2 * st.num_modes(), 2 * st.num_modes());
  t.block<2, 2>(2 * mode, 2 * mode) = detail::rotation_block(phi);
  return detail::apply_linear(st, t);
}

/// Loss channel of power transmissivity t on one mode: mean scales by
/// sqrt(t), cross-covariances by sqrt(t), and (1-t)/2 of vacuum noise is
/// mixed into the mode's diagonal block.
inline GaussianState loss(const GaussianState& st, int mode,
                          double transmissivity) {
  st.check_mode(mode);
  if (transmissivity < 0.0 || transmissivity > 1.0)
    throw std::invalid_argument("transmissivity must lie in [0, 1]");
  Eigen::MatrixXd t =
      Eigen::MatrixXd::Identity(2 * st.num_modes(), 2 * st.num_modes());
  t.block<2, 2>(2 * mode, 2 * mode) =
      std::sqrt(transmissivity) * Eigen::Matrix2d::Identity();
  Eigen::VectorXd m = t * st.mean();
  Eigen::MatrixXd c = t * st.cov() * t.transpose();
  c(2 * mode, 2 * mode) += (1.0 - transmissivity) / 2.0;
  c(2 * mode + 1, 2 * mode + 1) += (1.0 - transmissivity) / 2.0;
  return GaussianState(std::move(m), std::move(c));
}

/// 50/50 beamsplitter: out1 = (in1 + sign*in2)/sqrt(2),
/// out2 = (in1 - sign*in2)/sqrt(2).
inline GaussianState beamsplitter_5050(const GaussianState& st, int m1, int m2,
                                       int sign = +1) {
  st.check_mode(m1);
  st.check_mode(m2);
  if (m1 == m2) throw std::invalid_argument("beamsplitter modes must differ");
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +-1");
  const double s = static_cast<double>(sign);
  const double q = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd t =
      Eigen::MatrixXd::Identity(2 * st.num_modes(), 2 * st.num_modes());
  t.block<2, 2>(2 * m1, 2 * m1) = q * Eigen::Matrix2d::Identity();
  t.block<2, 2>(2 * m1, 2 * m2) = s * q * Eigen::Matrix2d::Identity();
  t.block<2, 2>(2 * m2, 2 * m1) = q * Eigen::Matrix2d::Identity();
  t.block<2, 2>(2 * m2, 2 * m2) = -s * q * Eigen::Matrix2d::Identity();
  return detail::apply_linear(st, t);
}

inline MomentReport homodyne_stats(const GaussianState& st, int mode,
                                   Quadrature q) {
  st.check_mode(mode);
  const int i = 2 * mode + (q == Quadrature::Sine ? 1 : 0);
  return {st.mean()[i], st.cov()(i, i)};
}

/// Photon-number mean and variance of one mode from the quadrature moments:
///   <N>     = (tr sigma + |d|^2 - 1)/2
///   (dN)^2  = (tr sigma^2 - 1/2)/2 + d^T sigma d
/// The -1/2 is the operator-ordering correction; the expression is exact
/// for Gaussian states.
inline MomentReport photon_stats(const GaussianState& st, int mode) {
  st.check_mode(mode);
  const Eigen::Vector2d d = st.mean().segment<2>(2 * mode);
  const Eigen::Matrix2d s = st.cov().block<2, 2>(2 * mode, 2 * mode);
  const double n = (s.trace() + d.squaredNorm() - 1.0) / 2.0;
  const double v = 0.5 * ((s * s).trace() - 0.5) + d.dot(s * d);
  return {n, v};
}

/// Total photon number over a set of modes, including cross-mode
/// correlations in the variance.
inline MomentReport photon_stats_total(const GaussianState& st,
                                       const std::vector<int>& modes) {
  if (modes.empty()) throw std::invalid_argument("mode list must be non-empty");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    st.check_mode(modes[i]);
    for (std::size_t j = i + 1; j < modes.size(); ++j)
      if (modes[i] == modes[j])
        throw std::invalid_argument("duplicate mode in photon_stats_total");
  }
  const int k = static_cast<int>(modes.size());
  Eigen::VectorXd d(2 * k);
  Eigen::MatrixXd s(2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    d.segment<2>(2 * i) = st.mean().segment<2>(2 * modes[i]);
    for (int j = 0; j < k; ++j)
      s.block<2, 2>(2 * i, 2 * j) =
          st.cov().block<2, 2>(2 * modes[i], 2 * modes[j]);
  }
  const double n = (s.trace() + d.squaredNorm() - k) / 2.0;
  const double v = 0.5 * (s * s).trace() - 0.25 * k + d.dot(s * d);
  return {n, v};
}

}  // namespace sqinterf

#endif  // SQINTERF_GAUSSIAN_HPP
