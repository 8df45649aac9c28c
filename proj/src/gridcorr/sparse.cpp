#include "gridcorr/sparse.hpp"

#include <cmath>

#include "gridcorr/error.hpp"

namespace gridcorr {

Eigen::MatrixXd soft_threshold_offdiag(const Eigen::MatrixXd& m, double t) {
  require(t >= 0.0, "soft-threshold level must be >= 0");
  Eigen::MatrixXd out = m;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      if (i == j) continue;
      double x = m(i, j);
      double mag = std::abs(x) - t;
      out(i, j) = mag > 0.0 ? std::copysign(mag, x) : 0.0;
    }
  return out;
}

Eigen::MatrixXd pd_projection(const Eigen::MatrixXd& m, double eps_pd) {
  require(eps_pd > 0.0, "eigenvalue floor must be > 0");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) fail(Errc::undefined, "eigen-decomposition did not converge");
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() >= eps_pd) return m;
  ev = ev.cwiseMax(eps_pd);
  Eigen::MatrixXd out = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

double sparse_objective(const Eigen::MatrixXd& s, const Eigen::MatrixXd& s_emp, double rho) {
  double l1 = s.cwiseAbs().sum() - s.diagonal().cwiseAbs().sum();
  return (s - s_emp).squaredNorm() + rho * l1;
}

long long count_offdiag_nonzeros(const Eigen::MatrixXd& m, double zero_eps) {
  long long nnz = 0;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > zero_eps) ++nnz;
  return nnz;
}

SparseResult sparse_correlation(const CorrelationMatrix& c_emp, const SparseConfig& cfg) {
  require(cfg.rho >= 0.0, "rho must be >= 0");
  require(cfg.tol > 0.0, "tol must be > 0");
  require(cfg.eps_pd > 0.0, "eps_pd must be > 0");
  require(cfg.max_iter >= 1, "max_iter must be >= 1");
  require(cfg.step > 0.0, "ADMM step must be > 0");
  const Eigen::MatrixXd& s_emp = c_emp.values;
  if (s_emp.rows() != s_emp.cols() || asymmetry(s_emp) > 1e-12)
    fail(Errc::invalid_argument, "sparse estimation needs a symmetric matrix");
  if ((s_emp.diagonal().array() - 1.0).abs().maxCoeff() > 1e-8)
    fail(Errc::invalid_argument, "sparse estimation needs a unit-diagonal matrix");

  const Index n = s_emp.rows();
  const double mu = cfg.step;
  const double shrink = cfg.rho / (2.0 + mu);
  const double blend = 1.0 + 0.5 * mu;

  Eigen::MatrixXd sigma = s_emp;
  Eigen::MatrixXd theta = pd_projection(s_emp, cfg.eps_pd);
  Eigen::MatrixXd dual = Eigen::MatrixXd::Zero(n, n);
  SparseSolveReport report;

  for (int it = 1; it <= cfg.max_iter; ++it) {
    // L1 proximal step against the data term and the consensus term.
    Eigen::MatrixXd target = (s_emp + 0.5 * mu * (theta - dual)) / blend;
    Eigen::MatrixXd next = soft_threshold_offdiag(target, shrink);
    next.diagonal().setOnes();
    next = 0.5 * (next + next.transpose()).eval();

    theta = pd_projection(next + dual, cfg.eps_pd);
    dual += next - theta;

    double change = (next - sigma).cwiseAbs().maxCoeff();
    double gap = (next - theta).cwiseAbs().maxCoeff();
    sigma = std::move(next);
    report.iterations = it;
    if (change <= cfg.tol && gap <= cfg.tol) {
      report.converged = true;
      break;
    }
  }

  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && std::abs(sigma(i, j)) < cfg.zero_eps) sigma(i, j) = 0.0;

  // The consensus gap can leave the sparse iterate marginally below the
  // floor; a convex blend with the identity keeps the pattern and diagonal.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma, Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff();
  if (lmin < cfg.eps_pd) {
    double alpha = (cfg.eps_pd - lmin) / (1.0 - lmin);
    sigma = (1.0 - alpha) * sigma + alpha * Eigen::MatrixXd::Identity(n, n);
    sigma.diagonal().setOnes();
  }

  report.objective = sparse_objective(sigma, s_emp, cfg.rho);
  report.nnz_offdiag = count_offdiag_nonzeros(sigma, cfg.zero_eps);

  SparseResult out;
  out.matrix.values = std::move(sigma);
  out.matrix.measure = Measure::sparse;
  out.matrix.nodes = c_emp.nodes;
  out.matrix.params["rho"] = cfg.rho;
  out.matrix.params["converged"] = report.converged ? 1.0 : 0.0;
  out.report = report;
  return out;
}

}  // namespace gridcorr
