#ifndef SQINTERF_FOCK_HPP
#define SQINTERF_FOCK_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqinterf {

/// Truncated number-basis density matrix for one or two modes. Serves as
/// the brute-force oracle for the Gaussian engine at small gain; never used
/// in production paths.
struct FockState {
  int dim = 0;        ///< truncation dimension per mode
  int num_modes = 1;  ///< 1 or 2
  Eigen::MatrixXcd rho;
};

namespace fock_detail {

inline Eigen::MatrixXcd annihilation(int dim) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

/// Annihilation operator of `mode` in the full (possibly tensor-product)
/// space, ordered so mode 0 varies slowest.
inline Eigen::MatrixXcd mode_annihilation(const FockState& st, int mode) {
  const Eigen::MatrixXcd a = annihilation(st.dim);
  if (st.num_modes == 1) return a;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(st.dim, st.dim);
  const Eigen::MatrixXcd& left = (mode == 0) ? a : id;
  const Eigen::MatrixXcd& right = (mode == 0) ? id : a;
  Eigen::MatrixXcd out(st.dim * st.dim, st.dim * st.dim);
  for (int i = 0; i < st.dim; ++i)
    for (int j = 0; j < st.dim; ++j)
      out.block(i * st.dim, j * st.dim, st.dim, st.dim) = left(i, j) * right;
  return out;
}

inline void check_state(const FockState& st) {
  if (st.dim < 2) throw std::invalid_argument("fock dim must be >= 2");
  if (st.num_modes != 1 && st.num_modes != 2)
    throw std::invalid_argument("fock oracle supports 1 or 2 modes");
  const int full = st.num_modes == 1 ? st.dim : st.dim * st.dim;
  if (st.rho.rows() != full || st.rho.cols() != full)
    throw std::invalid_argument("fock rho has wrong dimensions");
}

inline FockState apply_unitary(const FockState& st, const Eigen::MatrixXcd& u) {
  FockState out = st;
  out.rho = u * st.rho * u.adjoint();
  return out;
}

}  // namespace fock_detail

inline FockState fock_vacuum(int dim, int num_modes = 1) {
  FockState st;
  st.dim = dim;
  st.num_modes = num_modes;
  const int full = num_modes == 1 ? dim : dim * dim;
  st.rho = Eigen::MatrixXcd::Zero(full, full);
  st.rho(0, 0) = 1.0;
  fock_detail::check_state(st);
  return st;
}

/// Population of the top 10% of the basis per mode; results with leakage
/// above 1e-8 should be rejected and re-run at a larger dimension.
inline double fock_leakage(const FockState& st) {
  fock_detail::check_state(st);
  // at least two states, so parity-even states cannot hide the leakage
  const int cut = st.dim - std::max(2, st.dim / 10);
  double leak = 0.0;
  if (st.num_modes == 1) {
    for (int n = cut; n < st.dim; ++n) leak += st.rho(n, n).real();
    return leak;
  }
  for (int i = 0; i < st.dim; ++i)
    for (int j = 0; j < st.dim; ++j)
      if (i >= cut || j >= cut)
        leak += st.rho(i * st.dim + j, i * st.dim + j).real();
  return leak;
}

inline void require_low_leakage(const FockState& st, double tol = 1e-8) {
  const double leak = fock_leakage(st);
  if (leak > tol)
    throw std::runtime_error(
        "fock truncation leakage " + std::to_string(leak) +
        " exceeds tolerance; rerun with dim >= " + std::to_string(2 * st.dim));
}

/// Squeeze unitary exp((r/2)(a^dag^2 - a^2)): quadrature c scales by e^r,
/// matching the Gaussian engine's S(r).
inline FockState fock_squeeze(const FockState& st, int mode, double r) {
  fock_detail::check_state(st);
  const Eigen::MatrixXcd a = fock_detail::mode_annihilation(st, mode);
  const Eigen::MatrixXcd ad = a.adjoint();
  const Eigen::MatrixXcd gen = 0.5 * r * (ad * ad - a * a);
  return fock_detail::apply_unitary(st, gen.exp());
}

/// Two-mode squeeze unitary exp(r(a_s^dag a_i^dag - a_s a_i)).
inline FockState fock_squeeze_two_mode(const FockState& st, double r) {
  fock_detail::check_state(st);
  if (st.num_modes != 2)
    throw std::invalid_argument("fock_squeeze_two_mode needs 2 modes");
  const Eigen::MatrixXcd as = fock_detail::mode_annihilation(st, 0);
  const Eigen::MatrixXcd ai = fock_detail::mode_annihilation(st, 1);
  const Eigen::MatrixXcd gen = r * (as.adjoint() * ai.adjoint() - as * ai);
  return fock_detail::apply_unitary(st, gen.exp());
}

/// Phase rotation exp(-i phi N), matching the engine's O(phi).
inline FockState fock_rotate(const FockState& st, int mode, double phi) {
  fock_detail::check_state(st);
  const int full = st.num_modes == 1 ? st.dim : st.dim * st.dim;
  Eigen::VectorXcd ph(full);
  for (int k = 0; k < full; ++k) {
    const int n = st.num_modes == 1 ? k : (mode == 0 ? k / st.dim : k % st.dim);
    ph(k) = std::exp(std::complex<double>(0.0, -phi * n));
  }
  const Eigen::MatrixXcd u = ph.asDiagonal();
  return fock_detail::apply_unitary(st, u);
}

/// Displacement by mean quadratures (dc, ds): beta = (dc + i ds)/sqrt(2).
inline FockState fock_displace(const FockState& st, int mode, double dc,
                               double ds) {
  fock_detail::check_state(st);
  const std::complex<double> beta(dc / std::sqrt(2.0), ds / std::sqrt(2.0));
  const Eigen::MatrixXcd a = fock_detail::mode_annihilation(st, mode);
  const Eigen::MatrixXcd gen = beta * a.adjoint() - std::conj(beta) * a;
  return fock_detail::apply_unitary(st, gen.exp());
}

/// Loss channel of transmissivity t via Kraus operators
/// K_k |n> = sqrt(C(n,k)) t^{(n-k)/2} (1-t)^{k/2} |n-k>, the closed form of
/// an ancilla-vacuum beamsplitter followed by a partial trace.
inline FockState fock_loss(const FockState& st, int mode, double t) {
  fock_detail::check_state(st);
  if (t < 0.0 || t > 1.0)
    throw std::invalid_argument("transmissivity must lie in [0, 1]");
  const int d = st.dim;
  // log-factorials for the binomial coefficients
  std::vector<double> lf(d + 1, 0.0);
  for (int n = 1; n <= d; ++n) lf[n] = lf[n - 1] + std::log(double(n));
  FockState out = st;
  out.rho.setZero();
  for (int k = 0; k < d; ++k) {
    Eigen::MatrixXcd kk = Eigen::MatrixXcd::Zero(d, d);
    for (int n = k; n < d; ++n) {
      const double logc = 0.5 * (lf[n] - lf[k] - lf[n - k]);
      double amp;
      if (t == 0.0)
        amp = (n == k) ? 1.0 : 0.0;
      else if (t == 1.0)
        amp = (k == 0) ? 1.0 : 0.0;
      else
        amp = std::exp(logc + 0.5 * (n - k) * std::log(t) +
                       0.5 * k * std::log(1.0 - t));
      kk(n - k, n) = amp;
    }
    if (st.num_modes == 1) {
      out.rho += kk * st.rho * kk.adjoint();
    } else {
      const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
      const Eigen::MatrixXcd& left = (mode == 0) ? kk : id;
      const Eigen::MatrixXcd& right = (mode == 0) ? id : kk;
      Eigen::MatrixXcd full(d * d, d * d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          full.block(i * d, j * d, d, d) = left(i, j) * right;
      out.rho += full * st.rho * full.adjoint();
    }
  }
  return out;
}

/// All first/second moments used for cross-checks against the Gaussian
/// engine: quadrature means and variances plus photon mean and variance.
struct FockMoments {
  double mean_c = 0.0, mean_s = 0.0;
  double var_c = 0.0, var_s = 0.0;
  double n = 0.0, var_n = 0.0;
};

inline FockMoments fock_moments(const FockState& st, int mode = 0) {
  fock_detail::check_state(st);
  const Eigen::MatrixXcd a = fock_detail::mode_annihilation(st, mode);
  const Eigen::MatrixXcd ad = a.adjoint();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Eigen::MatrixXcd xc = inv_sqrt2 * (a + ad);
  const Eigen::MatrixXcd xs =
      std::complex<double>(0.0, -inv_sqrt2) * (a - ad);
  const Eigen::MatrixXcd nn = ad * a;
  auto expect = [&](const Eigen::MatrixXcd& op) {
    return (op * st.rho).trace().real();
  };
  FockMoments m;
  m.mean_c = expect(xc);
  m.mean_s = expect(xs);
  m.var_c = expect(xc * xc) - m.mean_c * m.mean_c;
  m.var_s = expect(xs * xs) - m.mean_s * m.mean_s;
  m.n = expect(nn);
  m.var_n = expect(nn * nn) - m.n * m.n;
  return m;
}

/// Total photon mean/variance over both modes of a two-mode state.
inline std::pair<double, double> fock_total_photons(const FockState& st) {
  fock_detail::check_state(st);
  if (st.num_modes != 2)
    throw std::invalid_argument("fock_total_photons needs 2 modes");
  const Eigen::MatrixXcd n0 = fock_detail::mode_annihilation(st, 0).adjoint() *
                              fock_detail::mode_annihilation(st, 0);
  const Eigen::MatrixXcd n1 = fock_detail::mode_annihilation(st, 1).adjoint() *
                              fock_detail::mode_annihilation(st, 1);
  const Eigen::MatrixXcd nt = n0 + n1;
  const double n = (nt * st.rho).trace().real();
  const double n2 = (nt * nt * st.rho).trace().real();
  return {n, n2 - n * n};
}

inline double fock_trace(const FockState& st) { return st.rho.trace().real(); }

}  // namespace sqinterf

#endif  // SQINTERF_FOCK_HPP
