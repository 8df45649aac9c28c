#include "gridcorr/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gridcorr/defaults.hpp"
#include "gridcorr/error.hpp"

namespace gridcorr {

MPBounds mp_bounds(Index n, Index t) {
  require(n >= 2 && t >= 2, "Marchenko-Pastur bounds need N >= 2 and T >= 2");
  MPBounds b;
  b.q = static_cast<double>(n) / static_cast<double>(t);
  double r = std::sqrt(b.q);
  b.lambda_minus = (1.0 - r) * (1.0 - r);
  b.lambda_plus = (1.0 + r) * (1.0 + r);
  return b;
}

double mp_density(double lambda, double q) {
  if (!(q > 0.0 && q <= 1.0)) fail(Errc::invalid_argument, "Marchenko-Pastur density requires q in (0, 1]");
  double r = std::sqrt(q);
  double lo = (1.0 - r) * (1.0 - r), hi = (1.0 + r) * (1.0 + r);
  if (!(lambda > lo && lambda < hi)) return 0.0;
  return std::sqrt((hi - lambda) * (lambda - lo)) / (2.0 * std::numbers::pi * q * lambda);
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> sorted_eigen(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) fail(Errc::undefined, "eigen-decomposition did not converge");
  const Index n = m.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return ev(a) > ev(b); });
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(n, n);
  for (Index k = 0; k < n; ++k) {
    values(k) = ev(order[static_cast<std::size_t>(k)]);
    vectors.col(k) = es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
  return {values, vectors};
}

RmtSplit rmt_split(const CorrelationMatrix& c, Index t) {
  require(c.measure == Measure::pearson || c.measure == Measure::smoothed_pearson,
          "RMT filtering applies to Pearson-type matrices only");
  if (c.values.rows() != c.values.cols() || asymmetry(c.values) > 1e-12)
    fail(Errc::invalid_argument, "RMT filtering needs a symmetric matrix");
  const Index n = c.values.rows();
  RmtSplit s;
  s.bounds = mp_bounds(n, t);
  auto [values, vectors] = sorted_eigen(c.values);
  s.eigenvalues = values;
  s.random_part = Eigen::MatrixXd::Zero(n, n);
  s.group_part = Eigen::MatrixXd::Zero(n, n);
  s.market_part = Eigen::MatrixXd::Zero(n, n);

  for (Index k = 0; k < n; ++k) {
    Eigen::MatrixXd proj = values(k) * vectors.col(k) * vectors.col(k).transpose();
    if (values(k) <= s.bounds.lambda_plus) {
      s.random_part += proj;
      continue;
    }
    if (k == 0) {
      const auto& v = vectors.col(0);
      Index pos = (v.array() > 0.0).count(), neg = (v.array() < 0.0).count();
      if (static_cast<double>(std::max(pos, neg)) >= defaults::kMarketSignFraction * static_cast<double>(n)) {
        s.market_part = proj;
        s.market_eigenvalue = values(0);
        s.has_market = true;
        continue;
      }
    }
    s.group_part += proj;
    ++s.n_group_modes;
  }
  auto sym = [](Eigen::MatrixXd& m) { m = 0.5 * (m + m.transpose()).eval(); };
  sym(s.random_part);
  sym(s.group_part);
  sym(s.market_part);
  return s;
}

CorrelationMatrix rmt_filtered(const CorrelationMatrix& c, Index t) {
  auto s = rmt_split(c, t);
  CorrelationMatrix out;
  out.values = std::move(s.group_part);
  out.measure = Measure::rmt_filtered;
  out.nodes = c.nodes;
  out.params = c.params;
  out.params["T"] = static_cast<double>(t);
  out.params["lambda_plus"] = s.bounds.lambda_plus;
  out.params["n_group_modes"] = static_cast<double>(s.n_group_modes);
  out.params["market_eigenvalue"] = s.market_eigenvalue;
  return out;
}

std::vector<HistogramBin> eigenvalue_histogram(const Eigen::VectorXd& values, int bins) {
  require(bins >= 1, "histogram needs at least one bin");
  require(values.size() > 0, "histogram needs values");
  double lo = values.minCoeff(), hi = values.maxCoeff();
  double width = hi > lo ? (hi - lo) / bins : 1.0;
  std::vector<HistogramBin> out(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) out[static_cast<std::size_t>(b)] = {lo + (b + 0.5) * width, 0};
  for (Index i = 0; i < values.size(); ++i) {
    int b = hi > lo ? static_cast<int>((values(i) - lo) / width) : 0;
    b = std::clamp(b, 0, bins - 1);
    ++out[static_cast<std::size_t>(b)].count;
  }
  return out;
}

}  // namespace gridcorr
