#include <doctest.h>

#include <cmath>
#include <random>

#include "gridcorr/sparse.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gridcorr;
using doctest::Approx;

namespace {

CorrelationMatrix corr(const Eigen::MatrixXd& v) {
  CorrelationMatrix c;
  c.values = v;
  return c;
}

double min_eig(const Eigen::MatrixXd& m) { return oracle::jacobi_eigenvalues(m)(0); }

// Three-node oracle: exhaustive grid over the off-diagonals, then a pattern
// search in all 26 directions. Feasibility (min eigenvalue >= eps) is checked
// through the principal minors of S - eps I.
Eigen::MatrixXd grid_oracle(const Eigen::MatrixXd& c, double rho, double eps_pd) {
  auto feasible = [&](double a, double b, double d) {
    const double u = 1.0 - eps_pd;
    if (u < 0 || u * u - a * a < 0 || u * u - b * b < 0 || u * u - d * d < 0) return false;
    return u * u * u + 2 * a * b * d - u * (a * a + b * b + d * d) >= 0;
  };
  auto score = [&](double a, double b, double d) {
    if (!feasible(a, b, d)) return std::numeric_limits<double>::infinity();
    return 2 * ((a - c(0, 1)) * (a - c(0, 1)) + (b - c(0, 2)) * (b - c(0, 2)) + (d - c(1, 2)) * (d - c(1, 2))) +
           2 * rho * (std::abs(a) + std::abs(b) + std::abs(d));
  };
  double x[3] = {0, 0, 0}, best = score(0, 0, 0);
  const int steps = 200;
  for (int i = -steps; i <= steps; ++i)
    for (int j = -steps; j <= steps; ++j)
      for (int k = -steps; k <= steps; ++k) {
        double a = double(i) / steps, b = double(j) / steps, d = double(k) / steps;
        double v = score(a, b, d);
        if (v < best) {
          best = v;
          x[0] = a;
          x[1] = b;
          x[2] = d;
        }
      }
  for (double h = 1.0 / steps; h > 1e-12; h *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj)
          for (int dk = -1; dk <= 1; ++dk) {
            double v = score(x[0] + di * h, x[1] + dj * h, x[2] + dk * h);
            if (v < best) {
              best = v;
              x[0] += di * h;
              x[1] += dj * h;
              x[2] += dk * h;
              moved = true;
            }
          }
    }
  }
  Eigen::MatrixXd s(3, 3);
  s << 1, x[0], x[1], x[0], 1, x[2], x[1], x[2], 1;
  return s;
}

}  // namespace

TEST_CASE("soft threshold off the diagonal") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 0.3, -0.05, 1;
  CHECK(soft_threshold_offdiag(m, 0.0) == m);
  auto s = soft_threshold_offdiag(m, 0.1);
  CHECK(s(0, 1) == Approx(0.2).epsilon(1e-15));
  CHECK(s(1, 0) == 0.0);
  CHECK(s(0, 0) == 1.0);
}

TEST_CASE("PD projection") {
  std::mt19937_64 rng(5);
  Eigen::MatrixXd pd = oracle::random_correlation(6, rng);
  CHECK((pd_projection(pd, 1e-8) - pd).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXd d(2, 2);
  d << 1, 0, 0, -1;
  auto p = pd_projection(d, 1e-8);
  CHECK(p(0, 0) == Approx(1.0).epsilon(1e-15));
  CHECK(p(1, 1) == Approx(1e-8).epsilon(1e-9));
  CHECK(std::abs(p(0, 1)) < 1e-15);

  std::normal_distribution<double> g;
  Eigen::MatrixXd a(5, 5);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j) a(i, j) = g(rng);
  a = 0.5 * (a + a.transpose()).eval();
  REQUIRE(min_eig(a) < 0);
  auto proj = pd_projection(a, 1e-3);
  Eigen::VectorXd ev_a = oracle::jacobi_eigenvalues(a), ev_p = oracle::jacobi_eigenvalues(proj);
  for (Index k = 0; k < 5; ++k) CHECK(ev_p(k) == Approx(std::max(ev_a(k), 1e-3)).epsilon(1e-10));
  CHECK((a * proj - proj * a).cwiseAbs().maxCoeff() < 1e-10);
  // No feasible perturbation of the projection gets closer to A.
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  const double dist = (proj - a).norm();
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::MatrixXd e(5, 5);
    for (Index i = 0; i < 5; ++i)
      for (Index j = i; j < 5; ++j) e(i, j) = e(j, i) = u(rng);
    Eigen::MatrixXd q = proj + e;
    if (min_eig(q) >= 1e-3) CHECK((q - a).norm() >= dist - 1e-12);
  }
}

TEST_CASE("objective and nonzero counting") {
  Eigen::MatrixXd s(2, 2), e(2, 2);
  s << 1, 0.2, 0.2, 1;
  e << 1, 0.5, 0.5, 1;
  CHECK(sparse_objective(s, e, 0.1) == Approx(2 * 0.09 + 0.1 * 0.4).epsilon(1e-14));
  CHECK(count_offdiag_nonzeros(s, 1e-10) == 1);
  CHECK(count_offdiag_nonzeros(Eigen::MatrixXd::Identity(3, 3), 1e-10) == 0);
}

TEST_CASE("three-node example against a grid-search oracle") {
  Eigen::MatrixXd c(3, 3);
  c << 1, 0.5, 0.4, 0.5, 1, 0.05, 0.4, 0.05, 1;
  SparseConfig cfg;
  cfg.rho = 0.2;
  auto r = sparse_correlation(corr(c), cfg);
  CHECK(r.report.converged);
  CHECK(r.matrix.values(1, 2) == 0.0);
  CHECK(r.matrix.values(0, 1) > 0.0);
  CHECK(r.matrix.values(0, 1) < 0.5);
  CHECK(r.matrix.values(0, 2) > 0.0);
  CHECK(r.matrix.values(0, 2) < 0.4);
  auto ref = grid_oracle(c, cfg.rho, cfg.eps_pd);
  CHECK(r.report.objective == Approx(sparse_objective(ref, c, cfg.rho)).epsilon(1e-6));
  CHECK(r.report.nnz_offdiag == 2);
}

TEST_CASE("oracle agreement when the PD floor binds") {
  // Indefinite pseudo-correlation: the floor is active at the optimum.
  Eigen::MatrixXd c(3, 3);
  c << 1, 0.9, 0.9, 0.9, 1, -0.9, 0.9, -0.9, 1;
  REQUIRE(min_eig(c) < 0);
  SparseConfig cfg;
  cfg.rho = 0.05;
  cfg.eps_pd = 1e-3;
  auto r = sparse_correlation(corr(c), cfg);
  auto ref = grid_oracle(c, cfg.rho, cfg.eps_pd);
  CHECK(min_eig(r.matrix.values) >= cfg.eps_pd / 2);
  CHECK(r.report.objective == Approx(sparse_objective(ref, c, cfg.rho)).epsilon(1e-4));
}

TEST_CASE("solver contracts on random PD inputs") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 4 + 3 * trial;
    Eigen::MatrixXd c = oracle::random_correlation(n, rng);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    SparseConfig cfg;
    cfg.rho = 0;
    auto r0 = sparse_correlation(corr(c), cfg);
    CHECK((r0.matrix.values - c).cwiseAbs().maxCoeff() <= cfg.tol);

    double max_off = (c - eye).cwiseAbs().maxCoeff();
    cfg.rho = 2 * max_off;
    CHECK((sparse_correlation(corr(c), cfg).matrix.values - eye).cwiseAbs().maxCoeff() <= cfg.tol);
    cfg.rho = 2.2 * max_off;
    CHECK(sparse_correlation(corr(c), cfg).matrix.values == eye);

    long long prev = n * n;
    for (double rho : {0.0, 0.05, 0.1, 0.3, 0.6, 1.2}) {
      cfg.rho = rho;
      auto r = sparse_correlation(corr(c), cfg);
      CHECK(r.report.nnz_offdiag <= prev);
      prev = r.report.nnz_offdiag;
      CHECK(min_eig(r.matrix.values) >= cfg.eps_pd / 2);
      CHECK((r.matrix.values.diagonal().array() == 1.0).all());
      CHECK(asymmetry(r.matrix.values) == 0.0);
    }
  }
}

TEST_CASE("invalid inputs") {
  Eigen::MatrixXd c(2, 2);
  c << 1, 0.5, 0.4, 1;
  CHECK(capture_error([&] { sparse_correlation(corr(c), {}); }) == Errc::invalid_argument);
  c << 2, 0.5, 0.5, 1;
  CHECK(capture_error([&] { sparse_correlation(corr(c), {}); }) == Errc::invalid_argument);
  SparseConfig neg;
  neg.rho = -1;
  CHECK(capture_error([&] { sparse_correlation(corr(Eigen::MatrixXd::Identity(2, 2)), neg); }) ==
        Errc::invalid_argument);
}
