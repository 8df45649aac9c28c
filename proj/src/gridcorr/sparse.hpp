#pragma once

#include <Eigen/Dense>

#include "gridcorr/correlation.hpp"

namespace gridcorr {

struct SparseConfig {
  double rho = 0.1;        // L1 penalty on off-diagonal entries
  double tol = 1e-8;       // max-norm change between iterates
  int max_iter = 10000;
  double eps_pd = 1e-8;    // eigenvalue floor
  double zero_eps = 1e-10; // entries below this magnitude count as (and are set to) zero
  double step = 2.0;       // ADMM penalty parameter
};

struct SparseSolveReport {
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
  long long nnz_offdiag = 0;  // unordered pairs i < j
};

struct SparseResult {
  CorrelationMatrix matrix;
  SparseSolveReport report;
};

/// x -> sign(x) max(|x| - t, 0) off the diagonal; diagonal untouched.
Eigen::MatrixXd soft_threshold_offdiag(const Eigen::MatrixXd& m, double t);

/// Floors the eigenvalues of a symmetric matrix at eps_pd.
Eigen::MatrixXd pd_projection(const Eigen::MatrixXd& m, double eps_pd);

/// ||S - S_emp||_F^2 + rho * sum_{i != j} |S_ij|.
double sparse_objective(const Eigen::MatrixXd& s, const Eigen::MatrixXd& s_emp, double rho);

long long count_offdiag_nonzeros(const Eigen::MatrixXd& m, double zero_eps);

/// L1-penalised nearest correlation matrix with unit diagonal and a
/// positive-definite floor. Alternates the L1 proximal step and the PD
/// projection (ADMM with scaled dual) until successive iterates agree to tol.
SparseResult sparse_correlation(const CorrelationMatrix& c_emp, const SparseConfig& cfg);

}  // namespace gridcorr
