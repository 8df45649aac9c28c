#pragma once

// Slow reference implementations used to check the library. None of them
// call into gridcorr.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Cyclic Jacobi rotations; eigenvalues ascending.
inline VectorXd jacobi_eigenvalues(MatrixXd a, double tol = 1e-14, int max_sweeps = 100) {
  const int n = static_cast<int>(a.rows());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < tol * tol) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  VectorXd ev = a.diagonal();
  std::sort(ev.data(), ev.data() + n);
  return ev;
}

// Row-wise Pearson with explicit loops.
inline MatrixXd pearson(const MatrixXd& x) {
  const long n = x.rows(), t = x.cols();
  MatrixXd c(n, n);
  std::vector<double> mean(n), sd(n);
  for (long i = 0; i < n; ++i) {
    double s = 0;
    for (long k = 0; k < t; ++k) s += x(i, k);
    mean[i] = s / t;
    double v = 0;
    for (long k = 0; k < t; ++k) v += (x(i, k) - mean[i]) * (x(i, k) - mean[i]);
    sd[i] = std::sqrt(v);
  }
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      double s = 0;
      for (long k = 0; k < t; ++k) s += (x(i, k) - mean[i]) * (x(j, k) - mean[j]);
      c(i, j) = s / (sd[i] * sd[j]);
    }
  return c;
}

// Weighted Pearson with w_t proportional to exp((t - T) / theta).
inline MatrixXd smoothed_pearson(const MatrixXd& x, double theta) {
  const long n = x.rows(), t = x.cols();
  std::vector<double> w(t);
  double total = 0;
  for (long k = 0; k < t; ++k) total += (w[k] = std::exp(static_cast<double>(k - (t - 1)) / theta));
  for (auto& v : w) v /= total;
  std::vector<double> mean(n, 0.0);
  for (long i = 0; i < n; ++i)
    for (long k = 0; k < t; ++k) mean[i] += w[k] * x(i, k);
  MatrixXd cov(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      double s = 0;
      for (long k = 0; k < t; ++k) s += w[k] * (x(i, k) - mean[i]) * (x(j, k) - mean[j]);
      cov(i, j) = s;
    }
  MatrixXd c(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) c(i, j) = cov(i, j) / std::sqrt(cov(i, i) * cov(j, j));
  return c;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

// {-1, 0, +1} events: above the median of positives, below the median of negatives.
inline std::vector<int> ternary(const std::vector<double>& s) {
  std::vector<double> pos, neg;
  for (double v : s) {
    if (v > 0) pos.push_back(v);
    if (v < 0) neg.push_back(v);
  }
  double mp = pos.empty() ? std::numeric_limits<double>::infinity() : median(pos);
  double mn = neg.empty() ? -std::numeric_limits<double>::infinity() : median(neg);
  std::vector<int> e(s.size(), 0);
  for (size_t k = 0; k < s.size(); ++k) {
    if (s[k] > mp) e[k] = 1;
    else if (s[k] < mn) e[k] = -1;
  }
  return e;
}

// J_ij = sum_t e_i(t) sum_{|t - t'| <= tau} e_j(t').
inline double sync_count(const std::vector<int>& a, const std::vector<int>& b, int tau) {
  const long t = static_cast<long>(a.size());
  double s = 0;
  for (long k = 0; k < t; ++k)
    for (long l = std::max(0L, k - tau); l <= std::min(t - 1, k + tau); ++l) s += a[k] * b[l];
  return s;
}

// Q_tau = (c(y|x) + c(x|y)) / sqrt(m_x m_y), each conditional count scoring
// 1 for 0 < |dt| <= tau and 1/2 for coincidences.
inline double q_tau(const std::vector<long>& tx, const std::vector<long>& ty, int tau) {
  auto c = [&](const std::vector<long>& a, const std::vector<long>& b) {
    double s = 0;
    for (long x : a)
      for (long y : b) {
        long d = std::labs(x - y);
        if (d == 0) s += 0.5;
        else if (d <= tau) s += 1.0;
      }
    return s;
  };
  return (c(tx, ty) + c(ty, tx)) / std::sqrt(static_cast<double>(tx.size()) * static_cast<double>(ty.size()));
}

// p-spectrum kernel normalised by the self-kernels.
inline double string_kernel(const std::string& s, const std::string& t, int p) {
  auto spectrum = [p](const std::string& x) {
    std::map<std::string, double> m;
    for (size_t i = 0; i + static_cast<size_t>(p) <= x.size(); ++i) m[x.substr(i, p)] += 1;
    return m;
  };
  auto dot = [](const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
    double s = 0;
    for (const auto& [k, v] : a) {
      auto it = b.find(k);
      if (it != b.end()) s += v * it->second;
    }
    return s;
  };
  auto a = spectrum(s), b = spectrum(t);
  return dot(a, b) / std::sqrt(dot(a, a) * dot(b, b));
}

// Marchenko-Pastur density integrated by the midpoint rule.
inline double mp_mass(const std::function<double(double)>& density, double lo, double hi, int steps = 200000) {
  double h = (hi - lo) / steps, s = 0;
  for (int i = 0; i < steps; ++i) s += density(lo + (i + 0.5) * h);
  return s * h;
}

// Minimum spanning tree weight by enumerating every labelled tree (Pruefer codes).
inline double exhaustive_mst_weight(const MatrixXd& d) {
  const int n = static_cast<int>(d.rows());
  if (n == 1) return 0.0;
  if (n == 2) return d(0, 1);
  const int len = n - 2;
  std::vector<int> code(len, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<int> degree(n, 1);
    for (int c : code) ++degree[c];
    double w = 0;
    std::vector<int> deg = degree;
    for (int c : code) {
      int leaf = 0;
      while (deg[leaf] != 1) ++leaf;
      w += d(leaf, c);
      --deg[leaf];
      --deg[c];
    }
    int u = -1, v = -1;
    for (int i = 0; i < n; ++i)
      if (deg[i] == 1) (u < 0 ? u : v) = i;
    w += d(u, v);
    best = std::min(best, w);
    int pos = len - 1;
    while (pos >= 0 && ++code[pos] == n) code[pos--] = 0;
    if (pos < 0) break;
  }
  return best;
}

inline bool boost_is_planar(int n, const std::vector<std::pair<int, int>>& edges) {
  using G = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  G g(n);
  for (auto [u, v] : edges) boost::add_edge(u, v, g);
  return boost::boyer_myrvold_planarity_test(g);
}

struct PairCounts {
  long long same_same = 0, same_diff = 0, diff_same = 0, diff_diff = 0;
};

inline PairCounts count_pairs(const std::vector<int>& a, const std::vector<int>& b) {
  PairCounts c;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j) {
      bool sa = a[i] == a[j], sb = b[i] == b[j];
      if (sa && sb) ++c.same_same;
      else if (sa) ++c.same_diff;
      else if (sb) ++c.diff_same;
      else ++c.diff_diff;
    }
  return c;
}

inline double rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  auto c = count_pairs(a, b);
  double total = static_cast<double>(c.same_same + c.same_diff + c.diff_same + c.diff_diff);
  return total == 0 ? 1.0 : (c.same_same + c.diff_diff) / total;
}

// Pair-counting form of the adjusted index; degenerate denominators follow the
// library's documented convention (1 for equal partitions, else 0).
inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  auto c = count_pairs(a, b);
  double n11 = c.same_same, n10 = c.same_diff, n01 = c.diff_same, n00 = c.diff_diff;
  double num = 2.0 * (n00 * n11 - n01 * n10);
  double den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
  if (den == 0) {
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = i + 1; j < a.size(); ++j)
        if ((a[i] == a[j]) != (b[i] == b[j])) return 0.0;
    return 1.0;
  }
  return num / den;
}

// All set partitions of n items as restricted growth strings.
inline std::vector<std::vector<int>> all_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(n, 0);
  std::function<void(int, int)> rec = [&](int i, int max_label) {
    if (i == n) {
      out.push_back(a);
      return;
    }
    for (int l = 0; l <= max_label + 1; ++l) {
      a[i] = l;
      rec(i + 1, std::max(max_label, l));
    }
  };
  if (n == 0) return {{}};
  a[0] = 0;
  rec(1, 0);
  return out;
}

// Q = (1/2m) sum_ij (A_ij - k_i k_j / 2m) delta(c_i, c_j).
inline double modularity(const MatrixXd& adj, const std::vector<int>& labels) {
  const long n = adj.rows();
  VectorXd k = adj.rowwise().sum();
  double two_m = k.sum(), q = 0;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (labels[i] == labels[j]) q += adj(i, j) - k(i) * k(j) / two_m;
  return q / two_m;
}

// Random symmetric positive-definite correlation matrix.
inline MatrixXd random_correlation(int n, std::mt19937_64& rng, int t = 0) {
  if (t <= 0) t = 2 * n + 5;
  std::normal_distribution<double> g;
  MatrixXd x(n, t);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < t; ++k) x(i, k) = g(rng);
  std::uniform_real_distribution<double> u(0.0, 0.8);
  for (int i = 1; i < n; ++i) x.row(i) = std::sqrt(1 - u(rng)) * x.row(i) + std::sqrt(u(rng)) * x.row(i - 1);
  return pearson(x);
}

}  // namespace oracle
