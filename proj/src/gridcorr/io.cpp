#include "gridcorr/io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "gridcorr/error.hpp"
#include "gridcorr/text_io.hpp"

namespace gridcorr::io {

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_number(double v) { return std::isnan(v) ? "NaN" : text::format_double(v); }

}  // namespace

void write_matrix_csv(std::ostream& out, const CorrelationMatrix& c) {
  const Index n = c.size();
  require(static_cast<Index>(c.nodes.size()) == n, "matrix has no node names");
  for (Index i = 0; i < n; ++i) out << (i ? "," : "") << text::csv_field(c.nodes[static_cast<std::size_t>(i)]);
  out << '\n';
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out << (j ? "," : "") << text::format_double(c.values(i, j));
    out << '\n';
  }
}

CorrelationMatrix read_matrix_csv(std::istream& in, Measure measure) {
  std::string line;
  if (!text::next_line(in, line, true)) fail(Errc::parse, "empty matrix file");
  CorrelationMatrix c;
  c.measure = measure;
  c.nodes = text::split_csv(line);
  const auto n = static_cast<Index>(c.nodes.size());
  c.values.resize(n, n);
  Index row = 0;
  while (text::next_line(in, line)) {
    if (row >= n) fail(Errc::parse, "matrix has more rows than header names");
    auto fields = text::split_csv(line);
    if (static_cast<Index>(fields.size()) != n)
      fail(Errc::parse, "matrix row " + std::to_string(row + 1) + " has " + std::to_string(fields.size()) +
                            " fields, expected " + std::to_string(n));
    for (Index j = 0; j < n; ++j) c.values(row, j) = text::parse_double(fields[static_cast<std::size_t>(j)]);
    ++row;
  }
  if (row != n) fail(Errc::parse, "matrix has " + std::to_string(row) + " rows, expected " + std::to_string(n));
  return c;
}

json matrix_to_json(const CorrelationMatrix& c) {
  json params = json::object();
  for (const auto& [key, value] : c.params) {
    if (const double* d = std::get_if<double>(&value))
      params[key] = finite_or_null(*d);
    else
      params[key] = std::get<std::string>(value);
  }
  return json{{"measure", std::string(to_string(c.measure))},
              {"params", params},
              {"nodes", c.nodes},
              {"values", matrix_rows(c.values)}};
}

CorrelationMatrix matrix_from_json(const json& j) {
  try {
    CorrelationMatrix c;
    c.measure = parse_measure(j.at("measure").get<std::string>());
    c.nodes = j.at("nodes").get<std::vector<std::string>>();
    for (const auto& [key, value] : j.at("params").items()) {
      if (value.is_number())
        c.params[key] = value.get<double>();
      else if (value.is_string())
        c.params[key] = value.get<std::string>();
      else if (value.is_null())
        c.params[key] = std::nan("");
      else
        fail(Errc::parse, "matrix parameter '" + key + "' is neither a number nor a string");
    }
    const auto& rows = j.at("values");
    const auto n = static_cast<Index>(c.nodes.size());
    if (static_cast<Index>(rows.size()) != n) fail(Errc::parse, "matrix values do not match the node count");
    c.values.resize(n, n);
    for (Index i = 0; i < n; ++i) {
      const auto& row = rows.at(static_cast<std::size_t>(i));
      if (static_cast<Index>(row.size()) != n) fail(Errc::parse, "matrix row " + std::to_string(i) + " has wrong length");
      for (Index k = 0; k < n; ++k) c.values(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
    return c;
  } catch (const json::exception& e) {
    fail(Errc::parse, std::string("malformed matrix envelope: ") + e.what());
  }
}

CorrelationMatrix read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open " + path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return matrix_from_json(read_json_file(path));
  return read_matrix_csv(in);
}

json rmt_split_to_json(const RmtSplit& s, const std::vector<std::string>& nodes) {
  std::vector<double> ev(s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size());
  return json{{"nodes", nodes},
              {"q", s.bounds.q},
              {"lambda_minus", s.bounds.lambda_minus},
              {"lambda_plus", s.bounds.lambda_plus},
              {"eigenvalues", ev},
              {"has_market", s.has_market},
              {"market_eigenvalue", s.market_eigenvalue},
              {"n_group_modes", s.n_group_modes},
              {"random", matrix_rows(s.random_part)},
              {"group", matrix_rows(s.group_part)},
              {"market", matrix_rows(s.market_part)}};
}

void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins) {
  out << "bin_center,count\n";
  for (const auto& b : bins) out << text::format_double(b.center) << ',' << b.count << '\n';
}

json sparse_report_to_json(const SparseSolveReport& r) {
  return json{{"iterations", r.iterations},
              {"converged", r.converged},
              {"objective", finite_or_null(r.objective)},
              {"nnz_offdiag", r.nnz_offdiag}};
}

void write_graph_csv(std::ostream& out, const FilteredGraph& g) {
  out << "i,j,weight\n";
  for (const auto& e : g.edges) out << e.i << ',' << e.j << ',' << text::format_double(e.weight) << '\n';
}

json graph_header_json(const FilteredGraph& g) {
  return json{{"kind", std::string(to_string(g.kind))},
              {"source_measure", std::string(to_string(g.source_measure))},
              {"n_vertices", g.n_vertices},
              {"n_edges", g.edges.size()},
              {"total_weight", g.total_weight()},
              {"nodes", g.nodes}};
}

void write_partition_csv(std::ostream& out, const Partition& p, const std::vector<bool>* misclassified) {
  require(p.nodes.size() == p.labels.size(), "partition has no node names");
  require(misclassified == nullptr || misclassified->size() == p.labels.size(), "flag column has wrong length");
  out << "node_name,label" << (misclassified ? ",misclassified" : "") << '\n';
  for (std::size_t i = 0; i < p.labels.size(); ++i) {
    out << text::csv_field(p.nodes[i]) << ',' << p.labels[i];
    if (misclassified) out << ',' << ((*misclassified)[i] ? 1 : 0);
    out << '\n';
  }
}

json partition_to_json(const Partition& p) {
  return json{{"method", p.method}, {"seed", p.seed}, {"k", p.k}, {"nodes", p.nodes}, {"labels", p.labels}};
}

Partition partition_from_json(const json& j) {
  try {
    auto labels = j.at("labels").get<std::vector<int>>();
    Partition p = make_partition(labels, j.value("method", std::string()), j.value("seed", std::uint64_t{0}));
    if (j.contains("nodes")) p.nodes = j.at("nodes").get<std::vector<std::string>>();
    if (!p.nodes.empty() && p.nodes.size() != p.labels.size())
      fail(Errc::parse, "partition nodes and labels differ in length");
    return p;
  } catch (const json::exception& e) {
    fail(Errc::parse, std::string("malformed partition: ") + e.what());
  }
}

Partition read_partition_csv(std::istream& in) {
  std::string line;
  if (!text::next_line(in, line, true)) fail(Errc::parse, "empty partition file");
  auto header = text::split_csv(line);
  if (header.size() < 2 || header[0] != "node_name" || header[1] != "label")
    fail(Errc::parse, "partition CSV must start with node_name,label");
  std::vector<std::string> nodes;
  std::vector<int> labels;
  while (text::next_line(in, line)) {
    auto f = text::split_csv(line);
    if (f.size() < 2) fail(Errc::parse, "partition row has fewer than two fields");
    nodes.push_back(f[0]);
    labels.push_back(static_cast<int>(text::parse_int(f[1])));
  }
  Partition p = make_partition(labels);
  p.nodes = std::move(nodes);
  return p;
}

void write_tuning_csv(std::ostream& out, const std::vector<TuningPoint>& points) {
  out << "n,measure,ari,disparity\n";
  for (const auto& p : points)
    out << p.n << ',' << to_string(p.measure) << ',' << csv_number(p.ari) << ',' << csv_number(p.disparity) << '\n';
}

void write_track_csv(std::ostream& out, const WindowTrack& t) {
  out << "window_index,mean_corr,largest_eig,disparity,ari_benchmark,ari_location\n";
  for (std::size_t i = 0; i < t.window_index.size(); ++i)
    out << t.window_index[i] << ',' << csv_number(t.mean_corr[i]) << ',' << csv_number(t.largest_eig[i]) << ','
        << csv_number(t.disparity[i]) << ',' << csv_number(t.ari_benchmark[i]) << ','
        << csv_number(t.ari_location[i]) << '\n';
}

void write_moving_std_csv(std::ostream& out, const std::vector<int>& window_index, const std::vector<double>& values,
                          int w) {
  out << "window_index,moving_std\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    out << window_index[i + static_cast<std::size_t>(w) - 1] << ',' << csv_number(values[i]) << '\n';
}

json dynamics_summary_json(const DynamicsResult& r, const DynamicsConfig& cfg) {
  json tracks = json::array();
  for (const auto& t : r.tracks) {
    json entry{{"measure", std::string(to_string(t.measure))}, {"method", std::string(to_string(t.method))}};
    auto add = [&](const char* name, const std::vector<double>& v) {
      auto s = summarize(v, t.window_index);
      entry[name] = json{{"mean", finite_or_null(s.mean)},
                         {"max", finite_or_null(s.max)},
                         {"argmax_window", s.argmax >= 0 ? json(s.argmax) : json(nullptr)}};
    };
    add("mean_corr", t.mean_corr);
    add("largest_eig", t.largest_eig);
    add("disparity", t.disparity);
    add("ari_benchmark", t.ari_benchmark);
    add("ari_location", t.ari_location);
    if (static_cast<int>(t.ari_location.size()) >= cfg.moving_std_window) {
      auto ms = moving_std(t.ari_location, cfg.moving_std_window);
      std::vector<int> idx(t.window_index.begin() + cfg.moving_std_window - 1, t.window_index.end());
      auto s = summarize(ms, idx);
      entry["ari_location_moving_std"] = json{{"mean", finite_or_null(s.mean)},
                                              {"max", finite_or_null(s.max)},
                                              {"argmax_window", s.argmax >= 0 ? json(s.argmax) : json(nullptr)}};
    } else {
      entry["ari_location_moving_std"] = nullptr;
    }
    tracks.push_back(std::move(entry));
  }
  return json{{"n_windows", r.n_windows},
              {"benchmark_window", r.benchmark},
              {"window_hours", cfg.window_hours},
              {"moving_std_window", cfg.moving_std_window},
              {"seed", cfg.seed},
              {"tracks", tracks}};
}

json synth_spec_to_json(const SynthSpec& s) {
  return json{{"n_blocks", s.n_blocks},
              {"nodes_per_block", s.nodes_per_block},
              {"T", s.T},
              {"intra_corr", s.intra_corr},
              {"market_beta", s.market_beta},
              {"spike_rate", s.spike_rate},
              {"spike_scale", s.spike_scale},
              {"regime_switch_window", s.regime_switch_window ? json(*s.regime_switch_window) : json(nullptr)},
              {"window_hours", s.window_hours},
              {"seed", s.seed},
              {"generator", kSynthGenerator}};
}

SynthSpec synth_spec_from_json(const json& j) {
  try {
    SynthSpec s;
    s.n_blocks = j.at("n_blocks").get<int>();
    s.nodes_per_block = j.at("nodes_per_block").get<int>();
    s.T = j.at("T").get<Index>();
    s.intra_corr = j.at("intra_corr").get<double>();
    s.market_beta = j.at("market_beta").get<double>();
    s.spike_rate = j.at("spike_rate").get<double>();
    s.spike_scale = j.at("spike_scale").get<double>();
    const auto& sw = j.at("regime_switch_window");
    if (!sw.is_null()) s.regime_switch_window = sw.get<int>();
    s.window_hours = j.value("window_hours", defaults::kWindowHours);
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
  } catch (const json::exception& e) {
    fail(Errc::parse, std::string("malformed synth spec: ") + e.what());
  }
}

unsigned char pixel_value(double v) {
  if (std::isnan(v)) fail(Errc::invalid_argument, "cannot render NaN entries");
  double c = std::clamp(v, -1.0, 1.0);
  return static_cast<unsigned char>(std::floor((c + 1.0) / 2.0 * 255.0));
}

void write_pgm(std::ostream& out, const Eigen::MatrixXd& m) {
  require(m.rows() >= 1 && m.cols() >= 1, "cannot render an empty matrix");
  out << "P5\n" << m.cols() << ' ' << m.rows() << "\n255\n";
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out.put(static_cast<char>(pixel_value(m(i, j))));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(Errc::parse, path + ": " + e.what());
  }
}

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

}  // namespace gridcorr::io
