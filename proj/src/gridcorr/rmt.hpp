#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gridcorr/correlation.hpp"

namespace gridcorr {

/// Marchenko-Pastur support for aspect ratio q = N/T.
struct MPBounds {
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  double q = 0.0;
};

MPBounds mp_bounds(Index n, Index t);

/// Marchenko-Pastur eigenvalue density for unit-variance noise, q in (0, 1].
double mp_density(double lambda, double q);

/// C = random + group + market, each a spectral projection of C.
struct RmtSplit {
  Eigen::MatrixXd random_part;
  Eigen::MatrixXd group_part;
  Eigen::MatrixXd market_part;
  double market_eigenvalue = 0.0;  // 0 when no market mode was detected
  bool has_market = false;
  int n_group_modes = 0;
  MPBounds bounds;
  Eigen::VectorXd eigenvalues;  // descending
};

/// Sorted (descending, stable) eigen-decomposition of a symmetric matrix.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> sorted_eigen(const Eigen::MatrixXd& m);

RmtSplit rmt_split(const CorrelationMatrix& c, Index t);

/// The group component as a matrix tagged rmt_filtered.
CorrelationMatrix rmt_filtered(const CorrelationMatrix& c, Index t);

struct HistogramBin {
  double center;
  long long count;
};

/// Equal-width histogram over [min, max] of the values.
std::vector<HistogramBin> eigenvalue_histogram(const Eigen::VectorXd& values, int bins);

}  // namespace gridcorr
