#include "sqinterf/gaussian.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace sqinterf;
using Catch::Approx;

TEST_CASE("vacuum state", "[gaussian]") {
  const GaussianState v = vacuum(2);
  REQUIRE(v.num_modes() == 2);
  REQUIRE(v.mean().norm() == 0.0);
  REQUIRE((v.cov() - 0.5 * Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);
  const MomentReport h = homodyne_stats(v, 0, Quadrature::Cosine);
  CHECK(h.mean == 0.0);
  CHECK(h.variance == 0.5);
  CHECK_THROWS_AS(vacuum(0), std::invalid_argument);
}

TEST_CASE("displace moves the mean only", "[gaussian]") {
  const double a = 2.0;
  GaussianState st = displace(vacuum(1), 0, std::sqrt(2.0) * a, 0.0);
  CHECK(st.mean()[0] == Approx(2.828427124746190).epsilon(1e-14));
  CHECK(st.mean()[1] == 0.0);
  CHECK((st.cov() - 0.5 * Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
  // Poisson statistics of a coherent state
  st = displace(vacuum(1), 0, std::sqrt(2.0), 0.0);
  const MomentReport p = photon_stats(st, 0);
  CHECK(p.mean == Approx(1.0).margin(1e-12));
  CHECK(p.variance == Approx(1.0).margin(1e-12));
  // inverse
  st = displace(displace(vacuum(1), 0, 0.3, -0.7), 0, -0.3, 0.7);
  CHECK(st.mean().norm() == Approx(0.0).margin(1e-15));
  CHECK_THROWS_AS(displace(vacuum(1), 1, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("squeeze scales the quadrature variances", "[gaussian]") {
  const GaussianState st = squeeze(vacuum(1), 0, 1.15);
  CHECK(st.cov()(0, 0) == Approx(4.987091227407359).epsilon(1e-13));
  CHECK(st.cov()(1, 1) == Approx(0.050129421861401874).epsilon(1e-13));
  // inverse
  const GaussianState back = squeeze(st, 0, -1.15);
  CHECK((back.cov() - 0.5 * Eigen::MatrixXd::Identity(2, 2)).norm() <
        1e-14);
  // photon content of squeezed vacuum
  const MomentReport p = photon_stats(squeeze(vacuum(1), 0, 0.5), 0);
  CHECK(p.mean == Approx(0.2715403174076219).epsilon(1e-13));
  CHECK(p.variance == Approx(0.6905489227709077).epsilon(1e-13));
}

TEST_CASE("rotation convention and invariance", "[gaussian]") {
  const double pi = std::acos(-1.0);
  GaussianState st = displace(vacuum(1), 0, 1.3, 0.0);
  st = rotate(st, 0, pi / 2.0);
  CHECK(st.mean()[0] == Approx(0.0).margin(1e-15));
  CHECK(st.mean()[1] == Approx(-1.3).epsilon(1e-14));
  // inverse
  GaussianState b = rotate(rotate(displace(vacuum(1), 0, 0.4, 0.9), 0, 0.7),
                           0, -0.7);
  CHECK(b.mean()[0] == Approx(0.4).epsilon(1e-13));
  CHECK(b.mean()[1] == Approx(0.9).epsilon(1e-13));
  // vacuum is rotation invariant
  const GaussianState v = rotate(vacuum(1), 0, 0.37);
  CHECK((v.cov() - 0.5 * Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("loss channel", "[gaussian]") {
  const GaussianState sq = squeeze(vacuum(1), 0, 1.15);
  SECTION("t=1 is the identity") {
    const GaussianState st = loss(sq, 0, 1.0);
    CHECK((st.cov() - sq.cov()).norm() < 1e-14);
  }
  SECTION("t=0 resets to vacuum") {
    const GaussianState st = loss(displace(sq, 0, 2.0, 1.0), 0, 0.0);
    CHECK(st.mean().norm() == 0.0);
    CHECK((st.cov() - 0.5 * Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
  }
  SECTION("pinned variance at t=0.9") {
    const GaussianState st = loss(sq, 0, 0.9);
    CHECK(st.cov()(0, 0) == Approx(4.538382104666623).epsilon(1e-13));
  }
  SECTION("losses compose multiplicatively") {
    const GaussianState a = loss(loss(sq, 0, 0.8), 0, 0.7);
    const GaussianState b = loss(sq, 0, 0.8 * 0.7);
    CHECK((a.cov() - b.cov()).norm() < 1e-12);
    CHECK((a.mean() - b.mean()).norm() < 1e-12);
  }
  CHECK_THROWS_AS(loss(sq, 0, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(loss(sq, 0, -0.1), std::invalid_argument);
}

TEST_CASE("50/50 beamsplitter", "[gaussian]") {
  GaussianState st = displace(vacuum(2), 0, std::sqrt(2.0) * 3.0, 0.0);
  GaussianState out = beamsplitter_5050(st, 0, 1, +1);
  CHECK(out.mean()[0] == Approx(3.0).epsilon(1e-14));
  CHECK(out.mean()[2] == Approx(3.0).epsilon(1e-14));
  // applying the splitter twice restores the input
  GaussianState twice = beamsplitter_5050(out, 0, 1, +1);
  CHECK((twice.mean() - st.mean()).norm() < 1e-12);
  CHECK((twice.cov() - st.cov()).norm() < 1e-12);
  // total photon number is preserved
  const GaussianState sq = squeeze(vacuum(2), 0, 0.6);
  const GaussianState split = beamsplitter_5050(sq, 0, 1, +1);
  CHECK(photon_stats_total(split, {0, 1}).mean ==
        Approx(photon_stats_total(sq, {0, 1}).mean).epsilon(1e-12));
  CHECK_THROWS_AS(beamsplitter_5050(st, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(beamsplitter_5050(st, 0, 1, 2), std::invalid_argument);
}

TEST_CASE("two-mode squeezer equals +-r single-mode squeezers", "[gaussian]") {
  const double r = 0.8;
  const GaussianState tm = squeeze_two_mode(vacuum(2), 0, 1, r);
  // basis change to (a_s +- a_i)/sqrt2 via a balanced beamsplitter
  const GaussianState pm = beamsplitter_5050(tm, 0, 1, +1);
  GaussianState ref = squeeze(squeeze(vacuum(2), 0, r), 1, -r);
  CHECK((pm.cov() - ref.cov()).norm() < 1e-12);
  // r = 0 is the identity
  const GaussianState id = squeeze_two_mode(vacuum(2), 0, 1, 0.0);
  CHECK((id.cov() - 0.5 * Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-15);
  CHECK_THROWS_AS(squeeze_two_mode(vacuum(2), 0, 0, 0.3),
                  std::invalid_argument);
  // photon content of two-mode squeezed vacuum
  const GaussianState tmsv = squeeze_two_mode(vacuum(2), 0, 1, 0.5);
  CHECK(photon_stats_total(tmsv, {0, 1}).mean ==
        Approx(2.0 * 0.2715403174076219).epsilon(1e-12));
}

TEST_CASE("photon_stats_total covers cross-correlations", "[gaussian]") {
  // uncorrelated modes: variances add
  GaussianState st = squeeze(vacuum(2), 0, 0.4);
  st = displace(st, 1, 1.0, 0.5);
  const MomentReport t = photon_stats_total(st, {0, 1});
  const MomentReport a = photon_stats(st, 0);
  const MomentReport b = photon_stats(st, 1);
  CHECK(t.mean == Approx(a.mean + b.mean).epsilon(1e-12));
  CHECK(t.variance == Approx(a.variance + b.variance).epsilon(1e-12));
  // correlated modes: total variance of TMSV is sinh^2(2r), far from the sum
  const GaussianState tmsv = squeeze_two_mode(vacuum(2), 0, 1, 0.5);
  const double sh2 = std::sinh(1.0) * std::sinh(1.0);
  CHECK(photon_stats_total(tmsv, {0, 1}).variance ==
        Approx(sh2).epsilon(1e-12));
  CHECK_THROWS_AS(photon_stats_total(st, {}), std::invalid_argument);
  CHECK_THROWS_AS(photon_stats_total(st, {0, 0}), std::invalid_argument);
}

TEST_CASE("purity and PSD invariants", "[gaussian]") {
  // lossless chains keep det(sigma) = 1/4 per mode
  GaussianState st = vacuum(2);
  st = squeeze(st, 0, 0.9);
  st = rotate(st, 0, 0.3);
  st = beamsplitter_5050(st, 0, 1, +1);
  st = squeeze_two_mode(st, 0, 1, 0.5);
  const Eigen::MatrixXd full = st.cov();
  // global purity: det(2 sigma) = 1 for a pure Gaussian state
  CHECK(std::fabs((2.0 * full).determinant() - 1.0) < 1e-10);
  // with loss, covariance stays PSD
  st = loss(st, 0, 0.5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(st.cov());
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
  // a non-PSD covariance is rejected
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(0, 0) = -1.0;
  CHECK_THROWS_AS(GaussianState(Eigen::VectorXd::Zero(2), bad),
                  std::domain_error);
}
