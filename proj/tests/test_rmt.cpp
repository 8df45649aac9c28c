#include <doctest.h>

#include <cmath>

#include "gridcorr/rmt.hpp"
#include "gridcorr/synth.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gridcorr;
using doctest::Approx;

TEST_CASE("Marchenko-Pastur bounds") {
  auto b = mp_bounds(100, 400);
  CHECK(b.q == 0.25);
  CHECK(b.lambda_minus == Approx(0.25).epsilon(1e-15));
  CHECK(b.lambda_plus == Approx(2.25).epsilon(1e-15));
  auto eq = mp_bounds(50, 50);
  CHECK(eq.lambda_minus == 0.0);
  CHECK(eq.lambda_plus == 4.0);
  auto wide = mp_bounds(2568, 168);
  CHECK(wide.q == Approx(15.2857).epsilon(1e-4));
  CHECK(wide.lambda_plus == Approx(24.1054).epsilon(1e-4));
}

TEST_CASE("Marchenko-Pastur density") {
  const double q = 0.25;
  CHECK(mp_density(0.1, q) == 0.0);
  CHECK(mp_density(3.0, q) == 0.0);
  CHECK(mp_density(1.0, q) > 0.0);
  auto b = mp_bounds(100, 400);
  double mass = oracle::mp_mass([&](double l) { return mp_density(l, q); }, b.lambda_minus, b.lambda_plus);
  CHECK(mass == Approx(1.0).epsilon(1e-6));
  CHECK(capture_error([] { mp_density(1.0, 1.5); }) == Errc::invalid_argument);
}

TEST_CASE("sorted eigen-decomposition agrees with Jacobi") {
  std::mt19937_64 rng(1);
  Eigen::MatrixXd c = oracle::random_correlation(12, rng);
  auto [values, vectors] = sorted_eigen(c);
  Eigen::VectorXd ref = oracle::jacobi_eigenvalues(c);
  for (Index k = 0; k < 12; ++k) CHECK(values(k) == Approx(ref(11 - k)).epsilon(1e-10));
  CHECK((vectors * values.asDiagonal() * vectors.transpose() - c).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("identity matrix is pure noise") {
  CorrelationMatrix c;
  c.values = Eigen::MatrixXd::Identity(10, 10);
  auto s = rmt_split(c, 1000);
  CHECK((s.random_part - c.values).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(s.group_part.isZero(0.0));
  CHECK(s.market_part.isZero(0.0));
  CHECK_FALSE(s.has_market);
}

TEST_CASE("planted market mode") {
  const int n = 50;
  const double a = 0.9;
  CorrelationMatrix c;
  c.values = (1 - a) * Eigen::MatrixXd::Identity(n, n) + a * Eigen::MatrixXd::Ones(n, n);
  auto s = rmt_split(c, 5000);
  CHECK(s.has_market);
  CHECK(s.market_eigenvalue == Approx(oracle::jacobi_eigenvalues(c.values)(n - 1)).epsilon(1e-10));
  CHECK(s.market_eigenvalue == Approx(1 - a + a * n).epsilon(1e-10));
  CHECK_FALSE(s.market_part.isZero(1e-6));
  // A one-signed eigenvector gives a one-signed rank-one projection.
  CHECK((s.market_part.array() > 0).all());
  CHECK(s.n_group_modes == 0);
}

TEST_CASE("planted blocks give group modes and a filtered matrix") {
  SynthSpec spec;
  spec.seed = 4;
  auto sp = generate_block_panel(spec);
  auto c = pearson(sp.panel);
  auto s = rmt_split(c, sp.panel.n_times());
  CHECK(s.has_market);
  CHECK(s.n_group_modes == 3);
  auto f = rmt_filtered(c, sp.panel.n_times());
  CHECK(f.measure == Measure::rmt_filtered);
  CHECK((f.values - s.group_part).cwiseAbs().maxCoeff() == 0.0);
  CHECK(f.param("n_group_modes") == 3.0);
  CHECK(asymmetry(f.values) == 0.0);
}

TEST_CASE("split reconstructs C and parts are orthogonal") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto p = generate_random_panel(30, seed % 2 ? 20 : 200, seed);
    auto c = pearson(p);
    auto s = rmt_split(c, p.n_times());
    CHECK((s.random_part + s.group_part + s.market_part - c.values).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((s.random_part * s.group_part).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((s.random_part * s.market_part).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((s.group_part * s.market_part).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("pure-noise panels leak few eigenvalues above the upper edge") {
  long above = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto p = generate_random_panel(200, 1000, 100 + seed);
    auto s = rmt_split(pearson(p), 1000);
    for (Index k = 0; k < s.eigenvalues.size(); ++k) above += s.eigenvalues(k) > s.bounds.lambda_plus;
    total += s.eigenvalues.size();
  }
  CHECK(static_cast<double>(above) / total <= 0.02);
}

TEST_CASE("non-Pearson inputs are refused") {
  CorrelationMatrix c;
  c.values = Eigen::MatrixXd::Identity(3, 3);
  c.measure = Measure::event_sync;
  CHECK(capture_error([&] { rmt_split(c, 100); }) == Errc::invalid_argument);
}

TEST_CASE("eigenvalue histogram") {
  Eigen::VectorXd v(5);
  v << 0, 1, 2, 3, 4;
  auto h = eigenvalue_histogram(v, 4);
  REQUIRE(h.size() == 4);
  CHECK(h[0].center == 0.5);
  CHECK(h[3].center == 3.5);
  CHECK(h[0].count + h[1].count + h[2].count + h[3].count == 5);
  CHECK(h[3].count == 2);
}
