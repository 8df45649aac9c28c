#include "gridcorr/metrics.hpp"

#include <cmath>
#include <unordered_map>

#include "gridcorr/error.hpp"

namespace gridcorr {

std::vector<long long> Partition::cluster_sizes() const {
  std::vector<long long> sizes(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

namespace {

std::vector<int> compact(std::span<const int> raw, int& k) {
  std::unordered_map<int, int> map;
  std::vector<int> out;
  out.reserve(raw.size());
  for (int l : raw) {
    require(l >= 0, "cluster labels must be nonnegative");
    auto [it, inserted] = map.try_emplace(l, static_cast<int>(map.size()));
    out.push_back(it->second);
  }
  k = static_cast<int>(map.size());
  return out;
}

using Wide = __int128;

Wide choose2(long long n) { return static_cast<Wide>(n) * (n - 1) / 2; }

struct PairSums {
  Wide index = 0;  // sum over cells of C(m_ij, 2)
  Wide t1 = 0;
  Wide t2 = 0;
  Wide pairs = 0;
};

PairSums pair_sums(std::span<const int> y, std::span<const int> yp) {
  auto table = contingency(y, yp);
  require(table.total >= 2, "pair-counting indices need N >= 2");
  PairSums s;
  for (const auto& row : table.counts)
    for (long long m : row) s.index += choose2(m);
  for (long long r : table.row_sums) s.t1 += choose2(r);
  for (long long c : table.col_sums) s.t2 += choose2(c);
  s.pairs = choose2(table.total);
  return s;
}

}  // namespace

Partition make_partition(std::span<const int> raw_labels, std::string method, std::uint64_t seed) {
  Partition p;
  p.labels = compact(raw_labels, p.k);
  p.method = std::move(method);
  p.seed = seed;
  return p;
}

ContingencyTable contingency(std::span<const int> y, std::span<const int> yp) {
  if (y.size() != yp.size()) fail(Errc::invalid_argument, "partitions have different lengths");
  int k = 0, l = 0;
  auto a = compact(y, k);
  auto b = compact(yp, l);
  ContingencyTable t;
  t.counts.assign(static_cast<std::size_t>(k), std::vector<long long>(static_cast<std::size_t>(l), 0));
  t.row_sums.assign(static_cast<std::size_t>(k), 0);
  t.col_sums.assign(static_cast<std::size_t>(l), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++t.counts[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])];
    ++t.row_sums[static_cast<std::size_t>(a[i])];
    ++t.col_sums[static_cast<std::size_t>(b[i])];
  }
  t.total = static_cast<long long>(a.size());
  return t;
}

ContingencyTable contingency(const Partition& y, const Partition& yp) { return contingency(y.labels, yp.labels); }

double rand_index(std::span<const int> y, std::span<const int> yp) {
  auto s = pair_sums(y, yp);
  // a = same in both, b = different in both.
  Wide a = s.index;
  Wide b = s.pairs - s.t1 - s.t2 + s.index;
  return static_cast<double>(a + b) / static_cast<double>(s.pairs);
}

double rand_index(const Partition& y, const Partition& yp) { return rand_index(y.labels, yp.labels); }

double adjusted_rand_index(std::span<const int> y, std::span<const int> yp) {
  auto s = pair_sums(y, yp);
  // Both sides scaled by N(N-1) = 2 * pairs to stay in integers.
  Wide num = 2 * s.index * s.pairs - 2 * s.t1 * s.t2;
  Wide den = (s.t1 + s.t2) * s.pairs - 2 * s.t1 * s.t2;
  if (den == 0) {
    int k = 0, l = 0;
    return compact(y, k) == compact(yp, l) ? 1.0 : 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

double adjusted_rand_index(const Partition& y, const Partition& yp) {
  return adjusted_rand_index(y.labels, yp.labels);
}

double disparity(std::span<const long long> sizes) {
  if (sizes.size() < 2) fail(Errc::undefined, "disparity needs at least two clusters");
  double mean = 0.0;
  for (long long s : sizes) mean += static_cast<double>(s);
  mean /= static_cast<double>(sizes.size());
  require(mean > 0.0, "cluster sizes must be positive");
  double ss = 0.0;
  for (long long s : sizes) ss += (static_cast<double>(s) - mean) * (static_cast<double>(s) - mean);
  return std::sqrt(ss / static_cast<double>(sizes.size() - 1)) / mean;
}

double disparity(const Partition& p) {
  auto sizes = p.cluster_sizes();
  return disparity(sizes);
}

std::vector<bool> misclassified(const Partition& p, const Partition& reference) {
  auto table = contingency(p, reference);
  int k = 0, l = 0;
  auto a = compact(p.labels, k);
  auto b = compact(reference.labels, l);
  std::vector<int> dominant(static_cast<std::size_t>(k), 0);
  for (std::size_t r = 0; r < table.counts.size(); ++r) {
    const auto& row = table.counts[r];
    for (std::size_t c = 1; c < row.size(); ++c)
      if (row[c] > row[static_cast<std::size_t>(dominant[r])]) dominant[r] = static_cast<int>(c);
  }
  std::vector<bool> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = b[i] != dominant[static_cast<std::size_t>(a[i])];
  return out;
}

}  // namespace gridcorr
