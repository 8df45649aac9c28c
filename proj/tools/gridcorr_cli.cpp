// gridcorr command-line front end. Talks to the library only through the C API.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridcorr/gridcorr.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exit status 1.
struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(gc_status st) {
  if (st != GC_OK) throw RuntimeError(std::string(gc_status_name(st)) + ": " + gc_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Panel = std::unique_ptr<gc_panel, Deleter<gc_panel, gc_panel_free>>;
using Matrix = std::unique_ptr<gc_matrix, Deleter<gc_matrix, gc_matrix_free>>;
using Split = std::unique_ptr<gc_rmt_split, Deleter<gc_rmt_split, gc_rmt_split_free>>;
using Graph = std::unique_ptr<gc_graph, Deleter<gc_graph, gc_graph_free>>;
using Part = std::unique_ptr<gc_partition, Deleter<gc_partition, gc_partition_free>>;
using Tuning = std::unique_ptr<gc_tuning, Deleter<gc_tuning, gc_tuning_free>>;
using Dynamics = std::unique_ptr<gc_dynamics, Deleter<gc_dynamics, gc_dynamics_free>>;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---- configuration ---------------------------------------------------------

struct OptionDef {
  std::string key;   // section.name
  std::string flag;  // long flag without dashes
  std::string def;
  std::string help;
  bool boolean = false;
};

std::vector<OptionDef> option_table() {
  gc_measure_options mo;
  gc_measure_options_init(&mo);
  gc_synth_spec ss;
  gc_synth_spec_init(&ss);
  gc_ingest_options io;
  gc_ingest_options_init(&io);
  return {
      {"seed", "seed", "0", "random seed for every seeded step"},
      {"out", "out", "gridcorr-out", "output directory"},

      {"input.panel", "panel", "", "analysis panel CSV (already the series to analyse)"},
      {"input.da", "da", "", "day-ahead panel CSV"},
      {"input.rt", "rt", "", "real-time panel CSV; with --da the analysis series is DA - RT"},
      {"input.synth", "synth-spec", "", "synthetic spec JSON to generate the analysis panel from"},
      {"input.matrix", "matrix", "", "correlation matrix (CSV or JSON envelope)"},
      {"input.truth", "truth", "", "reference partition (CSV or JSON) for ARI reporting"},
      {"input.layout", "layout", "wide", "wide | long"},
      {"input.component", "component", "mcc", "lmp | mec | mcc | mlc | delta"},
      {"input.timestamp_column", "timestamp-column", "timestamp", "timestamp column name"},
      {"input.node_column", "node-column", "node", "node column (long layout)"},
      {"input.value_column", "value-column", "value", "value column (long layout)"},
      {"input.component_column", "component-column", "component", "component column (long layout)"},
      {"input.forward_fill", "forward-fill", io.forward_fill ? "true" : "false", "forward-fill short gaps", true},
      {"input.max_fill_hours", "max-fill-hours", std::to_string(io.max_fill_hours), "longest gap to forward-fill"},
      {"input.drop_zero_variance", "drop-zero-variance", "false", "drop constant nodes", true},
      {"input.drop_incomplete", "drop-incomplete", "false", "drop nodes with unfillable gaps", true},

      {"measure.measures", "measures", "pearson",
       "comma list: pearson, smoothed_pearson, event_sync, event_sync_original, rmt_filtered, sparse, string"},
      {"measure.theta", "theta", fmt(mo.theta), "exponential smoothing decay (hours)"},
      {"measure.tau", "tau", std::to_string(mo.tau), "event-synchronisation lag window (hours)"},
      {"measure.normalization", "normalization", "diagonal", "event-sync normalisation: diagonal | row_sum"},
      {"measure.isolate_eventless", "isolate-eventless", "false", "isolate nodes without events", true},
      {"measure.rho", "rho", fmt(mo.rho), "sparse estimator L1 penalty"},
      {"measure.sparse_tol", "sparse-tol", fmt(mo.sparse_tol), "sparse estimator tolerance"},
      {"measure.sparse_max_iter", "sparse-max-iter", std::to_string(mo.sparse_max_iter), "sparse estimator iterations"},
      {"measure.eps_pd", "eps-pd", fmt(mo.eps_pd), "sparse estimator eigenvalue floor"},
      {"measure.zero_eps", "zero-eps", fmt(mo.zero_eps), "sparse estimator zero threshold"},
      {"measure.gram", "gram", std::to_string(mo.gram), "string kernel gram length"},
      {"measure.histogram_bins", "bins", "50", "eigenvalue histogram bins"},

      {"graph.kinds", "kinds", "mst,pmfg", "comma list: threshold, mst, pmfg"},
      {"graph.quantile", "quantile", fmt(gc_default_threshold_quantile()), "threshold graph quantile"},
      {"graph.pmfg_cap", "pmfg-cap", std::to_string(gc_default_pmfg_cap()), "largest N accepted for PMFG"},

      {"cluster.methods", "methods", "spectral,mst+louvain", "comma list: spectral, mst+louvain"},
      {"cluster.k", "k", std::to_string(gc_default_clusters()), "spectral cluster count"},

      {"tune.n_min", "n-min", "1", "smallest cluster count"},
      {"tune.n_max", "n-max", "0", "largest cluster count (0: min(N, 300))"},

      {"dynamics.window_hours", "window-hours", std::to_string(gc_default_window_hours()), "window width"},
      {"dynamics.benchmark", "benchmark", "-1", "benchmark window index (-1: last)"},
      {"dynamics.moving_std_window", "moving-std-window", std::to_string(gc_default_moving_std_window()),
       "moving standard deviation window"},
      {"dynamics.threads", "threads", "0", "worker threads (0: GRIDCORR_THREADS or 1)"},

      {"synth.mode", "mode", "blocks", "blocks | random"},
      {"synth.n_blocks", "n-blocks", std::to_string(ss.n_blocks), "planted blocks"},
      {"synth.nodes_per_block", "nodes-per-block", std::to_string(ss.nodes_per_block), "nodes per block"},
      {"synth.T", "hours", std::to_string(ss.T), "panel length in hours"},
      {"synth.intra_corr", "intra-corr", fmt(ss.intra_corr), "within-block factor share"},
      {"synth.market_beta", "market-beta", fmt(ss.market_beta), "market factor loading"},
      {"synth.spike_rate", "spike-rate", fmt(ss.spike_rate), "block spike events per hour"},
      {"synth.spike_scale", "spike-scale", fmt(ss.spike_scale), "spike amplitude"},
      {"synth.regime_switch_window", "regime-switch-window", "-1", "window index of the membership reshuffle"},
      {"synth.window_hours", "synth-window-hours", std::to_string(ss.window_hours), "window width for the switch"},
      {"synth.n", "n", "200", "node count in random mode"},

      {"render.output", "output", "heatmap.pgm", "image file name inside the output directory"},
  };
}

const std::map<std::string, std::vector<std::string>>& command_sections() {
  static const std::map<std::string, std::vector<std::string>> m{
      {"ingest", {"input"}},
      {"synth", {"synth"}},
      {"corr", {"input", "measure"}},
      {"filter", {"input", "measure", "graph"}},
      {"cluster", {"input", "measure", "cluster"}},
      {"tune", {"input", "measure", "tune"}},
      {"dynamics", {"input", "measure", "cluster", "dynamics"}},
      {"render", {"input", "render"}},
  };
  return m;
}

bool key_in_command(const std::string& key, const std::string& command) {
  auto dot = key.find('.');
  if (dot == std::string::npos) return true;
  const auto& sections = command_sections().at(command);
  return std::find(sections.begin(), sections.end(), key.substr(0, dot)) != sections.end();
}

std::map<std::string, std::string> read_config_file(const std::string& path, const std::set<std::string>& known) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::map<std::string, std::string> out;
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw UsageError(path + ":" + std::to_string(line_no) + ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
    if (!known.count(key)) throw UsageError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    out[key] = value;
  }
  return out;
}

class Config {
 public:
  Config(std::string command, std::map<std::string, std::string> values)
      : command_(std::move(command)), values_(std::move(values)) {}

  const std::string& command() const { return command_; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string str(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::logic_error("config key not registered: " + key);
    return it->second;
  }

  long long integer(const std::string& key) const {
    std::string v = str(key);
    try {
      std::size_t pos = 0;
      long long x = std::stoll(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw UsageError("'" + key + "' must be an integer, got '" + v + "'");
    }
  }

  double real(const std::string& key) const {
    std::string v = str(key);
    try {
      std::size_t pos = 0;
      double x = std::stod(v, &pos);
      if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw UsageError("'" + key + "' must be a finite number, got '" + v + "'");
    }
  }

  bool boolean(const std::string& key) const {
    std::string v = str(key);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off" || v.empty()) return false;
    throw UsageError("'" + key + "' must be a boolean, got '" + str(key) + "'");
  }

  std::uint64_t seed() const {
    long long s = integer("seed");
    if (s < 0) throw UsageError("seed must be >= 0");
    return static_cast<std::uint64_t>(s);
  }

  json to_json() const {
    json j = json::object();
    for (const auto& [k, v] : values_) j[k] = v;
    return j;
  }

 private:
  std::string command_;
  std::map<std::string, std::string> values_;
};

// ---- outputs ----------------------------------------------------------------

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeError("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, void (*)(EVP_MD_CTX*)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw RuntimeError("sha256 unavailable");
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeError("cannot write " + tmp.string());
    out << text;
    if (!out) throw RuntimeError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw RuntimeError("cannot rename into place: " + path.string());
}

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw RuntimeError("cannot create output directory " + dir_.string());
  }

  // Registers a file name and returns its full path.
  std::string add(const std::string& name) {
    names_.insert(name);
    return (dir_ / name).string();
  }

  void write_json(const std::string& name, const json& j) { write_text_atomic(add(name), j.dump(2) + "\n"); }

  void write_manifest(const Config& cfg) {
    json outputs = json::array();
    for (const auto& name : names_) {
      fs::path p = dir_ / name;
      outputs.push_back({{"path", name}, {"bytes", fs::file_size(p)}, {"sha256", sha256_file(p)}});
    }
    json manifest{{"tool", "gridcorr"},
                  {"version", gc_version()},
                  {"command", cfg.command()},
                  {"config", cfg.to_json()},
                  {"outputs", outputs}};
    write_text_atomic(dir_ / "manifest.json", manifest.dump(2) + "\n");
  }

 private:
  fs::path dir_;
  std::set<std::string> names_;
};

std::string file_tag(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return s;
}

// ---- shared steps --------------------------------------------------------------

gc_ingest_options ingest_options(const Config& cfg) {
  gc_ingest_options o;
  gc_ingest_options_init(&o);
  std::string layout = cfg.str("input.layout");
  if (layout == "wide")
    o.layout = GC_LAYOUT_WIDE;
  else if (layout == "long")
    o.layout = GC_LAYOUT_LONG;
  else
    throw UsageError("input.layout must be wide or long, got '" + layout + "'");
  if (gc_component_from_name(cfg.str("input.component").c_str(), &o.component) != GC_OK)
    throw UsageError(gc_last_error());
  o.forward_fill = cfg.boolean("input.forward_fill") ? 1 : 0;
  o.max_fill_hours = static_cast<int>(cfg.integer("input.max_fill_hours"));
  o.drop_zero_variance = cfg.boolean("input.drop_zero_variance") ? 1 : 0;
  o.drop_incomplete = cfg.boolean("input.drop_incomplete") ? 1 : 0;
  return o;
}

struct IngestColumns {
  std::string ts, node, value, component;
};

Panel load_panel_file(const std::string& path, const Config& cfg, json* report) {
  gc_ingest_options o = ingest_options(cfg);
  IngestColumns cols{cfg.str("input.timestamp_column"), cfg.str("input.node_column"), cfg.str("input.value_column"),
                     cfg.str("input.component_column")};
  o.timestamp_column = cols.ts.c_str();
  o.node_column = cols.node.c_str();
  o.value_column = cols.value.c_str();
  o.component_column = cols.component.c_str();
  gc_panel* raw = nullptr;
  char* rep = nullptr;
  check(gc_panel_load(path.c_str(), &o, &raw, report ? &rep : nullptr));
  Panel p(raw);
  if (rep) {
    *report = json::parse(rep);
    gc_string_free(rep);
  }
  return p;
}

enum class Source { none, panel, da_rt, da_only, synth };

Source input_source(const Config& cfg) {
  bool panel = !cfg.str("input.panel").empty(), da = !cfg.str("input.da").empty(),
       rt = !cfg.str("input.rt").empty(), synth = !cfg.str("input.synth").empty();
  if (rt && !da) throw UsageError("--rt needs --da");
  int count = (panel ? 1 : 0) + (da ? 1 : 0) + (synth ? 1 : 0);
  if (count > 1) throw UsageError("give exactly one input: --panel, --da [--rt], or --synth-spec");
  if (panel) return Source::panel;
  if (da) return rt ? Source::da_rt : Source::da_only;
  if (synth) return Source::synth;
  return Source::none;
}

Panel analysis_panel(const Config& cfg) {
  switch (input_source(cfg)) {
    case Source::panel: return load_panel_file(cfg.str("input.panel"), cfg, nullptr);
    case Source::da_only: return load_panel_file(cfg.str("input.da"), cfg, nullptr);
    case Source::da_rt: {
      Panel da = load_panel_file(cfg.str("input.da"), cfg, nullptr);
      Panel rt = load_panel_file(cfg.str("input.rt"), cfg, nullptr);
      gc_panel* delta = nullptr;
      check(gc_panel_delta(da.get(), rt.get(), &delta));
      return Panel(delta);
    }
    case Source::synth: {
      gc_synth_spec spec;
      check(gc_synth_spec_read_json(cfg.str("input.synth").c_str(), &spec));
      gc_panel* p = nullptr;
      check(gc_synth_generate(&spec, &p, nullptr, nullptr));
      return Panel(p);
    }
    case Source::none: break;
  }
  throw UsageError("no input: give --panel, --da [--rt], or --synth-spec");
}

std::vector<gc_measure> measures(const Config& cfg) {
  std::vector<gc_measure> out;
  for (const auto& name : split_list(cfg.str("measure.measures"))) {
    gc_measure m;
    if (gc_measure_from_name(name.c_str(), &m) != GC_OK) throw UsageError(gc_last_error());
    out.push_back(m);
  }
  if (out.empty()) throw UsageError("no measures given");
  return out;
}

std::vector<gc_cluster_method> methods(const Config& cfg) {
  std::vector<gc_cluster_method> out;
  for (const auto& name : split_list(cfg.str("cluster.methods"))) {
    gc_cluster_method m;
    if (gc_cluster_method_from_name(name.c_str(), &m) != GC_OK) throw UsageError(gc_last_error());
    out.push_back(m);
  }
  if (out.empty()) throw UsageError("no clustering methods given");
  return out;
}

gc_measure_options measure_options(const Config& cfg) {
  gc_measure_options o;
  gc_measure_options_init(&o);
  o.theta = cfg.real("measure.theta");
  o.tau = static_cast<int>(cfg.integer("measure.tau"));
  std::string norm = cfg.str("measure.normalization");
  if (norm == "diagonal")
    o.normalization = GC_ES_DIAGONAL;
  else if (norm == "row_sum")
    o.normalization = GC_ES_ROW_SUM;
  else
    throw UsageError("measure.normalization must be diagonal or row_sum, got '" + norm + "'");
  o.isolate_eventless = cfg.boolean("measure.isolate_eventless") ? 1 : 0;
  o.rho = cfg.real("measure.rho");
  o.sparse_tol = cfg.real("measure.sparse_tol");
  o.sparse_max_iter = static_cast<int>(cfg.integer("measure.sparse_max_iter"));
  o.eps_pd = cfg.real("measure.eps_pd");
  o.zero_eps = cfg.real("measure.zero_eps");
  o.gram = static_cast<int>(cfg.integer("measure.gram"));
  return o;
}

Matrix compute(const gc_panel* panel, gc_measure m, const gc_measure_options& o) {
  gc_matrix* raw = nullptr;
  check(gc_matrix_compute(panel, m, &o, &raw));
  return Matrix(raw);
}

std::vector<std::string> matrix_names(const gc_matrix* m) {
  std::vector<std::string> out;
  for (size_t i = 0; i < gc_matrix_size(m); ++i) out.emplace_back(gc_matrix_node_name(m, i));
  return out;
}

// Matrices to work on: the --matrix file, or one per requested measure.
std::vector<std::pair<std::string, Matrix>> input_matrices(const Config& cfg) {
  std::vector<std::pair<std::string, Matrix>> out;
  if (!cfg.str("input.matrix").empty()) {
    if (input_source(cfg) != Source::none) throw UsageError("--matrix cannot be combined with a panel input");
    gc_matrix* raw = nullptr;
    check(gc_matrix_read(cfg.str("input.matrix").c_str(), &raw));
    Matrix m(raw);
    std::string tag = gc_measure_name(gc_matrix_measure(m.get()));
    out.emplace_back(tag, std::move(m));
    return out;
  }
  auto ms = measures(cfg);
  auto opts = measure_options(cfg);
  Panel panel = analysis_panel(cfg);
  for (gc_measure m : ms) out.emplace_back(gc_measure_name(m), compute(panel.get(), m, opts));
  return out;
}

Part read_truth(const Config& cfg) {
  if (cfg.str("input.truth").empty()) return nullptr;
  gc_partition* raw = nullptr;
  check(gc_partition_read(cfg.str("input.truth").c_str(), &raw));
  return Part(raw);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---- commands ------------------------------------------------------------------

void cmd_ingest(const Config& cfg, Outputs& out) {
  json report = json::object();
  switch (input_source(cfg)) {
    case Source::panel: {
      json r;
      Panel p = load_panel_file(cfg.str("input.panel"), cfg, &r);
      check(gc_panel_write(p.get(), out.add("panel.csv").c_str()));
      report["panel"] = r;
      break;
    }
    case Source::da_only: {
      json r;
      Panel p = load_panel_file(cfg.str("input.da"), cfg, &r);
      check(gc_panel_write(p.get(), out.add("da.csv").c_str()));
      report["da"] = r;
      break;
    }
    case Source::da_rt: {
      json rd, rr;
      Panel da = load_panel_file(cfg.str("input.da"), cfg, &rd);
      Panel rt = load_panel_file(cfg.str("input.rt"), cfg, &rr);
      gc_panel* delta = nullptr;
      check(gc_panel_delta(da.get(), rt.get(), &delta));
      Panel d(delta);
      check(gc_panel_write(da.get(), out.add("da.csv").c_str()));
      check(gc_panel_write(rt.get(), out.add("rt.csv").c_str()));
      check(gc_panel_write(d.get(), out.add("delta.csv").c_str()));
      report["da"] = rd;
      report["rt"] = rr;
      break;
    }
    case Source::synth: throw UsageError("ingest reads CSV panels; use `synth` for synthetic data");
    case Source::none: throw UsageError("no input: give --panel or --da [--rt]");
  }
  out.write_json("ingest_report.json", report);
}

void cmd_synth(const Config& cfg, Outputs& out) {
  const std::string mode = cfg.str("synth.mode");
  if (mode == "random") {
    long long n = cfg.integer("synth.n"), t = cfg.integer("synth.T");
    if (n < 2 || t < 2) throw UsageError("random panels need synth.n >= 2 and synth.T >= 2");
    gc_panel* raw = nullptr;
    check(gc_random_panel(static_cast<size_t>(n), static_cast<size_t>(t), cfg.seed(), &raw));
    Panel p(raw);
    check(gc_panel_write(p.get(), out.add("panel.csv").c_str()));
    out.write_json("synth_spec.json", json{{"mode", "random"}, {"n", n}, {"T", t}, {"seed", cfg.seed()},
                                           {"generator", "mt19937_64+std::normal_distribution"}});
    return;
  }
  if (mode != "blocks") throw UsageError("synth.mode must be blocks or random, got '" + mode + "'");

  gc_synth_spec spec;
  gc_synth_spec_init(&spec);
  spec.n_blocks = static_cast<int>(cfg.integer("synth.n_blocks"));
  spec.nodes_per_block = static_cast<int>(cfg.integer("synth.nodes_per_block"));
  spec.T = cfg.integer("synth.T");
  spec.intra_corr = cfg.real("synth.intra_corr");
  spec.market_beta = cfg.real("synth.market_beta");
  spec.spike_rate = cfg.real("synth.spike_rate");
  spec.spike_scale = cfg.real("synth.spike_scale");
  spec.regime_switch_window = static_cast<int>(cfg.integer("synth.regime_switch_window"));
  spec.window_hours = static_cast<int>(cfg.integer("synth.window_hours"));
  spec.seed = cfg.seed();

  gc_panel* raw = nullptr;
  gc_partition* truth = nullptr;
  gc_partition* after = nullptr;
  check(gc_synth_generate(&spec, &raw, &truth, &after));
  Panel x(raw);
  Part t(truth), ta(after);

  // Price-like DA/RT pair with DA - RT carrying the planted structure.
  const size_t n = gc_panel_n_nodes(x.get()), len = gc_panel_n_times(x.get());
  std::vector<double> values(n * len), base(n * len);
  check(gc_panel_values(x.get(), values.data(), values.size()));
  for (size_t i = 0; i < n; ++i)
    for (size_t h = 0; h < len; ++h)
      base[i * len + h] = 25.0 + 5.0 * std::sin(2.0 * 3.14159265358979323846 * static_cast<double>(h % 24) / 24.0);
  for (size_t k = 0; k < values.size(); ++k) values[k] += base[k];
  gc_panel *da_raw = nullptr, *rt_raw = nullptr, *delta_raw = nullptr;
  check(gc_panel_with_values(x.get(), values.data(), values.size(), GC_COMPONENT_LMP, &da_raw));
  Panel da(da_raw);
  check(gc_panel_with_values(x.get(), base.data(), base.size(), GC_COMPONENT_LMP, &rt_raw));
  Panel rt(rt_raw);
  check(gc_panel_delta(da.get(), rt.get(), &delta_raw));
  Panel delta(delta_raw);

  check(gc_panel_write(da.get(), out.add("da.csv").c_str()));
  check(gc_panel_write(rt.get(), out.add("rt.csv").c_str()));
  check(gc_panel_write(delta.get(), out.add("panel.csv").c_str()));
  check(gc_partition_write_csv(t.get(), nullptr, out.add("truth.csv").c_str()));
  if (ta) check(gc_partition_write_csv(ta.get(), nullptr, out.add("truth_after_switch.csv").c_str()));
  check(gc_synth_spec_write_json(&spec, out.add("synth_spec.json").c_str()));
}

void cmd_corr(const Config& cfg, Outputs& out) {
  auto ms = measures(cfg);
  auto opts = measure_options(cfg);
  Panel panel = analysis_panel(cfg);
  const int bins = static_cast<int>(cfg.integer("measure.histogram_bins"));
  if (bins < 1) throw UsageError("measure.histogram_bins must be >= 1");
  for (gc_measure m : ms) {
    const std::string tag = gc_measure_name(m);
    Matrix c;
    if (m == GC_MEASURE_SPARSE) {
      Matrix emp = compute(panel.get(), GC_MEASURE_PEARSON, opts);
      gc_matrix* raw = nullptr;
      gc_sparse_report rep;
      check(gc_sparse_estimate(emp.get(), &opts, &raw, &rep));
      c.reset(raw);
      out.write_json("sparse_report.json", json{{"iterations", rep.iterations},
                                                {"converged", rep.converged != 0},
                                                {"objective", number_or_null(rep.objective)},
                                                {"nnz_offdiag", rep.nnz_offdiag}});
    } else {
      c = compute(panel.get(), m, opts);
    }
    if (m == GC_MEASURE_RMT_FILTERED) {
      Matrix emp = compute(panel.get(), GC_MEASURE_PEARSON, opts);
      gc_rmt_split* raw = nullptr;
      check(gc_rmt_split_compute(emp.get(), gc_panel_n_times(panel.get()), &raw));
      Split s(raw);
      check(gc_rmt_split_write_json(s.get(), out.add("rmt_split.json").c_str()));
      check(gc_rmt_split_write_histogram(s.get(), bins, out.add("rmt_histogram.csv").c_str()));
    }
    check(gc_matrix_write_csv(c.get(), out.add("corr_" + tag + ".csv").c_str()));
    check(gc_matrix_write_json(c.get(), out.add("corr_" + tag + ".json").c_str()));
  }
}

void cmd_filter(const Config& cfg, Outputs& out) {
  std::vector<gc_graph_kind> kinds;
  for (const auto& name : split_list(cfg.str("graph.kinds"))) {
    gc_graph_kind k;
    if (gc_graph_kind_from_name(name.c_str(), &k) != GC_OK) throw UsageError(gc_last_error());
    kinds.push_back(k);
  }
  if (kinds.empty()) throw UsageError("no graph kinds given");
  const double quantile = cfg.real("graph.quantile");
  const int cap = static_cast<int>(cfg.integer("graph.pmfg_cap"));
  static const char* kind_names[] = {"threshold", "mst", "pmfg"};
  for (auto& [tag, m] : input_matrices(cfg)) {
    for (gc_graph_kind k : kinds) {
      gc_graph* raw = nullptr;
      check(gc_graph_build(m.get(), k, quantile, cap, &raw));
      Graph g(raw);
      const std::string base = "graph_" + tag + "_" + kind_names[k];
      check(gc_graph_write_csv(g.get(), out.add(base + ".csv").c_str()));
      check(gc_graph_write_header_json(g.get(), out.add(base + ".json").c_str()));
    }
  }
}

void cmd_cluster(const Config& cfg, Outputs& out) {
  auto meths = methods(cfg);
  const long long k = cfg.integer("cluster.k");
  const int gram = static_cast<int>(cfg.integer("measure.gram"));
  Part truth = read_truth(cfg);
  json report = json::array();
  std::map<gc_cluster_method, Part> proxies;
  for (auto& [tag, m] : input_matrices(cfg)) {
    auto names = matrix_names(m.get());
    std::vector<const char*> cnames;
    for (const auto& s : names) cnames.push_back(s.c_str());
    for (gc_cluster_method method : meths) {
      const std::string mtag = file_tag(gc_cluster_method_name(method));
      if (!proxies.count(method)) {
        gc_partition* raw = nullptr;
        check(gc_location_proxy(cnames.data(), cnames.size(), method, static_cast<int>(k), gram, cfg.seed(), &raw));
        proxies[method].reset(raw);
        check(gc_partition_write_csv(raw, nullptr, out.add("location_proxy_" + mtag + ".csv").c_str()));
      }
      const gc_partition* proxy = proxies[method].get();

      gc_partition* raw = nullptr;
      check(gc_cluster(m.get(), method, static_cast<int>(k), cfg.seed(), &raw));
      Part p(raw);
      const std::string base = "partition_" + tag + "_" + mtag;
      check(gc_partition_write_csv(p.get(), proxy, out.add(base + ".csv").c_str()));
      check(gc_partition_write_json(p.get(), out.add(base + ".json").c_str()));

      json entry{{"measure", tag}, {"method", gc_cluster_method_name(method)}, {"k", gc_partition_k(p.get())}};
      double ari = 0.0;
      check(gc_adjusted_rand_index(p.get(), proxy, &ari));
      entry["ari_location"] = ari;
      if (truth) {
        check(gc_adjusted_rand_index(p.get(), truth.get(), &ari));
        entry["ari_truth"] = ari;
      }
      double disp = 0.0;
      entry["disparity"] = gc_disparity(p.get(), &disp) == GC_OK ? json(disp) : json(nullptr);
      if (method == GC_CLUSTER_MST_LOUVAIN) {
        gc_graph* graw = nullptr;
        check(gc_graph_build(m.get(), GC_GRAPH_MST, 0.0, 0, &graw));
        Graph tree(graw);
        check(gc_graph_write_csv(tree.get(), out.add("graph_" + tag + "_mst.csv").c_str()));
        gc_graph* wraw = nullptr;
        check(gc_graph_correlation_weights(tree.get(), m.get(), &wraw));
        Graph weighted(wraw);
        double q = 0.0;
        entry["modularity"] = gc_modularity(weighted.get(), p.get(), GC_MODULARITY_STANDARD, &q) == GC_OK
                                  ? json(q)
                                  : json(nullptr);
      }
      report.push_back(std::move(entry));
    }
  }
  out.write_json("cluster_report.json", report);
}

void cmd_tune(const Config& cfg, Outputs& out) {
  auto ms = measures(cfg);
  auto opts = measure_options(cfg);
  Panel panel = analysis_panel(cfg);
  long long n_min = cfg.integer("tune.n_min"), n_max = cfg.integer("tune.n_max");
  if (n_max == 0) n_max = std::min<long long>(static_cast<long long>(gc_panel_n_nodes(panel.get())), 300);
  gc_tuning* raw = nullptr;
  check(gc_tune(panel.get(), ms.data(), ms.size(), static_cast<int>(n_min), static_cast<int>(n_max), cfg.seed(),
                &opts, &raw));
  Tuning t(raw);
  check(gc_tuning_write_csv(t.get(), out.add("tuning.csv").c_str()));
}

void cmd_dynamics(const Config& cfg, Outputs& out) {
  auto ms = measures(cfg);
  auto meths = methods(cfg);
  Panel panel = analysis_panel(cfg);
  gc_dynamics_options o;
  gc_dynamics_options_init(&o);
  o.measures = ms.data();
  o.n_measures = ms.size();
  o.methods = meths.data();
  o.n_methods = meths.size();
  o.k = static_cast<int>(cfg.integer("cluster.k"));
  o.window_hours = static_cast<int>(cfg.integer("dynamics.window_hours"));
  o.benchmark = static_cast<int>(cfg.integer("dynamics.benchmark"));
  o.moving_std_window = static_cast<int>(cfg.integer("dynamics.moving_std_window"));
  o.measure = measure_options(cfg);
  o.seed = cfg.seed();
  o.threads = static_cast<int>(cfg.integer("dynamics.threads"));
  gc_dynamics* raw = nullptr;
  check(gc_dynamics_run(panel.get(), &o, &raw));
  Dynamics d(raw);
  for (size_t t = 0; t < gc_dynamics_n_tracks(d.get()); ++t) {
    gc_measure m;
    gc_cluster_method method;
    check(gc_dynamics_track_info(d.get(), t, &m, &method));
    const std::string base = std::string(gc_measure_name(m)) + "_" + file_tag(gc_cluster_method_name(method));
    check(gc_dynamics_write_track_csv(d.get(), t, out.add("tracks_" + base + ".csv").c_str()));
    if (gc_dynamics_n_windows(d.get()) >= static_cast<size_t>(o.moving_std_window))
      check(gc_dynamics_write_moving_std_csv(d.get(), t, out.add("moving_std_" + base + ".csv").c_str()));
  }
  check(gc_dynamics_write_summary_json(d.get(), out.add("dynamics_summary.json").c_str()));
}

void cmd_render(const Config& cfg, Outputs& out) {
  if (cfg.str("input.matrix").empty()) throw UsageError("render needs --matrix");
  gc_matrix* raw = nullptr;
  check(gc_matrix_read(cfg.str("input.matrix").c_str(), &raw));
  Matrix m(raw);
  std::string name = cfg.str("render.output");
  if (name.empty() || fs::path(name).has_parent_path()) throw UsageError("render.output must be a plain file name");
  check(gc_matrix_render_pgm(m.get(), out.add(name).c_str()));
}

using Command = void (*)(const Config&, Outputs&);

int run(int argc, char** argv) {
  const auto table = option_table();
  std::set<std::string> known;
  for (const auto& o : table) known.insert(o.key);

  CLI::App app{"gridcorr: correlation structure of nodal price panels"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(gc_version()));
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value config file ([section] headers prefix keys)");

  std::map<std::string, std::string> flag_values;
  std::map<std::string, bool> bool_flags;
  std::vector<std::string> sets;
  bool print_config = false;
  app.add_option("--set", sets, "override any config key: --set section.key=value");
  app.add_flag("--print-config", print_config, "print the resolved configuration as JSON and exit");

  const std::map<std::string, std::pair<Command, std::string>> commands{
      {"ingest", {cmd_ingest, "validate and normalise price panels"}},
      {"synth", {cmd_synth, "generate a synthetic panel with planted clusters"}},
      {"corr", {cmd_corr, "compute correlation matrices"}},
      {"filter", {cmd_filter, "build threshold, MST and PMFG graphs"}},
      {"cluster", {cmd_cluster, "partition nodes"}},
      {"tune", {cmd_tune, "ARI and disparity against the cluster count"}},
      {"dynamics", {cmd_dynamics, "weekly correlation and partition tracks"}},
      {"render", {cmd_render, "grayscale heatmap of a matrix"}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands) subs[name] = app.add_subcommand(name, entry.second);

  for (const auto& o : table) {
    if (o.key == "seed" || o.key == "out") {
      app.add_option("--" + o.flag, flag_values[o.key], o.help);
      continue;
    }
    for (auto& [name, sub] : subs) {
      if (!key_in_command(o.key, name)) continue;
      if (o.boolean) {
        sub->add_flag("--" + o.flag, bool_flags[o.key], o.help);
      } else {
        sub->add_option("--" + o.flag, flag_values[o.key], o.help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  std::map<std::string, std::string> values;
  for (const auto& o : table)
    if (key_in_command(o.key, command)) values[o.key] = o.def;
  if (!config_path.empty()) {
    for (const auto& [k, v] : read_config_file(config_path, known))
      if (values.count(k)) values[k] = v;
  }
  for (const auto& o : table) {
    if (!values.count(o.key)) continue;
    if (o.boolean) {
      if (bool_flags[o.key]) values[o.key] = "true";
    } else if (!flag_values[o.key].empty()) {
      values[o.key] = flag_values[o.key];
    }
  }
  for (const auto& s : sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + s + "'");
    std::string key = trim(s.substr(0, eq));
    if (!known.count(key)) throw UsageError("unknown config key '" + key + "'");
    if (!values.count(key)) throw UsageError("'" + key + "' does not apply to `" + command + "`");
    values[key] = trim(s.substr(eq + 1));
  }

  Config cfg(command, values);
  if (print_config) {
    std::cout << cfg.to_json().dump(2) << '\n';
    return 0;
  }
  cfg.seed();
  Outputs out(cfg.str("out"));
  commands.at(command).first(cfg, out);
  out.write_manifest(cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "gridcorr: usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gridcorr: error: " << e.what() << '\n';
    return 1;
  }
}
