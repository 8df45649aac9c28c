#include "gridcorr/gridcorr.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "gridcorr/analysis.hpp"
#include "gridcorr/clustering.hpp"
#include "gridcorr/dynamics.hpp"
#include "gridcorr/error.hpp"
#include "gridcorr/graph.hpp"
#include "gridcorr/io.hpp"
#include "gridcorr/rmt.hpp"
#include "gridcorr/synth.hpp"
#include "gridcorr/text_io.hpp"

namespace gc = gridcorr;

struct gc_panel {
  gc::PricePanel panel;
  std::vector<std::string> names;

  explicit gc_panel(gc::PricePanel p) : panel(std::move(p)), names(panel.node_names()) {}
};

struct gc_matrix {
  gc::CorrelationMatrix m;
};

struct gc_rmt_split {
  gc::RmtSplit split;
  std::vector<std::string> nodes;
};

struct gc_graph {
  gc::FilteredGraph g;
};

struct gc_partition {
  gc::Partition p;
};

struct gc_tuning {
  std::vector<gc::TuningPoint> points;
};

struct gc_dynamics {
  gc::DynamicsResult result;
  gc::DynamicsConfig cfg;
};

namespace {

thread_local std::string last_error;

gc_status to_status(gc::Errc code) {
  switch (code) {
    case gc::Errc::invalid_argument: return GC_ERR_INVALID_ARGUMENT;
    case gc::Errc::io: return GC_ERR_IO;
    case gc::Errc::parse: return GC_ERR_PARSE;
    case gc::Errc::data: return GC_ERR_DATA;
    case gc::Errc::undefined: return GC_ERR_UNDEFINED;
    case gc::Errc::capacity: return GC_ERR_CAPACITY;
  }
  return GC_ERR_INTERNAL;
}

template <class F>
gc_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return GC_OK;
  } catch (const gc::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GC_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return GC_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) gc::fail(gc::Errc::invalid_argument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gc::Measure to_measure(gc_measure m) {
  switch (m) {
    case GC_MEASURE_PEARSON: return gc::Measure::pearson;
    case GC_MEASURE_SMOOTHED_PEARSON: return gc::Measure::smoothed_pearson;
    case GC_MEASURE_EVENT_SYNC: return gc::Measure::event_sync;
    case GC_MEASURE_EVENT_SYNC_ORIGINAL: return gc::Measure::event_sync_original;
    case GC_MEASURE_RMT_FILTERED: return gc::Measure::rmt_filtered;
    case GC_MEASURE_SPARSE: return gc::Measure::sparse;
    case GC_MEASURE_STRING: return gc::Measure::string;
  }
  gc::fail(gc::Errc::invalid_argument, "unknown measure code " + std::to_string(static_cast<int>(m)));
}

gc_measure from_measure(gc::Measure m) {
  switch (m) {
    case gc::Measure::pearson: return GC_MEASURE_PEARSON;
    case gc::Measure::smoothed_pearson: return GC_MEASURE_SMOOTHED_PEARSON;
    case gc::Measure::event_sync: return GC_MEASURE_EVENT_SYNC;
    case gc::Measure::event_sync_original: return GC_MEASURE_EVENT_SYNC_ORIGINAL;
    case gc::Measure::rmt_filtered: return GC_MEASURE_RMT_FILTERED;
    case gc::Measure::sparse: return GC_MEASURE_SPARSE;
    case gc::Measure::string: return GC_MEASURE_STRING;
  }
  return GC_MEASURE_PEARSON;
}

gc::ClusterMethod to_method(gc_cluster_method m) {
  switch (m) {
    case GC_CLUSTER_SPECTRAL: return gc::ClusterMethod::spectral;
    case GC_CLUSTER_MST_LOUVAIN: return gc::ClusterMethod::mst_louvain;
  }
  gc::fail(gc::Errc::invalid_argument, "unknown clustering method code " + std::to_string(static_cast<int>(m)));
}

gc_cluster_method from_method(gc::ClusterMethod m) {
  return m == gc::ClusterMethod::spectral ? GC_CLUSTER_SPECTRAL : GC_CLUSTER_MST_LOUVAIN;
}

gc::MeasureConfig to_measure_config(const gc_measure_options* o) {
  gc_measure_options defaults;
  gc_measure_options_init(&defaults);
  if (o == nullptr) o = &defaults;
  gc::MeasureConfig cfg;
  cfg.theta = o->theta;
  cfg.event_sync.tau = o->tau;
  switch (o->normalization) {
    case GC_ES_DIAGONAL: cfg.event_sync.normalization = gc::EventSyncNormalization::diagonal; break;
    case GC_ES_ROW_SUM: cfg.event_sync.normalization = gc::EventSyncNormalization::row_sum; break;
    default: gc::fail(gc::Errc::invalid_argument, "unknown event-sync normalization");
  }
  cfg.event_sync.eventless = o->isolate_eventless ? gc::EventlessPolicy::isolate : gc::EventlessPolicy::error;
  cfg.sparse.rho = o->rho;
  cfg.sparse.tol = o->sparse_tol;
  cfg.sparse.max_iter = o->sparse_max_iter;
  cfg.sparse.eps_pd = o->eps_pd;
  cfg.sparse.zero_eps = o->zero_eps;
  cfg.gram = o->gram;
  return cfg;
}

std::vector<std::string> to_names(const char* const* names, size_t n) {
  need(names, "names");
  std::vector<std::string> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    need(names[i], "node name");
    out.emplace_back(names[i]);
  }
  return out;
}

void write_to(const char* path, const std::function<void(std::ostream&)>& body) {
  need(path, "path");
  gc::text::write_file_atomic(path, body);
}

const gc::WindowTrack& track_at(const gc_dynamics* d, size_t track) {
  need(d, "dynamics");
  if (track >= d->result.tracks.size()) gc::fail(gc::Errc::invalid_argument, "track index out of range");
  return d->result.tracks[track];
}

}  // namespace

extern "C" {

const char* gc_version(void) { return "0.1.0"; }

const char* gc_last_error(void) { return last_error.c_str(); }

const char* gc_status_name(gc_status status) {
  switch (status) {
    case GC_OK: return "ok";
    case GC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GC_ERR_IO: return "i/o error";
    case GC_ERR_PARSE: return "parse error";
    case GC_ERR_DATA: return "data error";
    case GC_ERR_UNDEFINED: return "undefined";
    case GC_ERR_CAPACITY: return "capacity exceeded";
    case GC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void gc_string_free(char* s) { std::free(s); }

double gc_default_smoothing_theta(void) { return gc::defaults::kSmoothingTheta; }
int gc_default_event_sync_tau(void) { return gc::defaults::kEventSyncTau; }
int gc_default_clusters(void) { return gc::defaults::kSpectralClusters; }
int gc_default_moving_std_window(void) { return gc::defaults::kMovingStdWindow; }
int gc_default_window_hours(void) { return gc::defaults::kWindowHours; }
int gc_default_string_gram(void) { return gc::defaults::kStringGram; }
double gc_default_sparse_rho(void) { return gc::defaults::kSparseRho; }
int gc_default_pmfg_cap(void) { return gc::defaults::kPmfgCap; }
double gc_default_threshold_quantile(void) { return gc::defaults::kThresholdQuantile; }

gc_status gc_ns_mapping(int n, int n_codes, int* out) {
  return guard([&] {
    need(out, "out");
    *out = gc::ns_mapping(n, n_codes);
  });
}

gc_status gc_threads_from_env(int* out) {
  return guard([&] {
    need(out, "out");
    *out = gc::threads_from_env();
  });
}

/* panels */

void gc_ingest_options_init(gc_ingest_options* opts) {
  if (opts == nullptr) return;
  gc::IngestionConfig d;
  opts->layout = GC_LAYOUT_WIDE;
  opts->component = GC_COMPONENT_MCC;
  opts->timestamp_column = nullptr;
  opts->node_column = nullptr;
  opts->value_column = nullptr;
  opts->component_column = nullptr;
  opts->forward_fill = d.forward_fill ? 1 : 0;
  opts->max_fill_hours = d.max_fill_hours;
  opts->drop_zero_variance = d.drop_zero_variance ? 1 : 0;
  opts->drop_incomplete = d.drop_incomplete ? 1 : 0;
}

gc_status gc_component_from_name(const char* name, gc_component* out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    *out = static_cast<gc_component>(gc::parse_component(name));
  });
}

gc_status gc_panel_load(const char* path, const gc_ingest_options* opts, gc_panel** out, char** report_json) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    gc_ingest_options d;
    gc_ingest_options_init(&d);
    if (opts == nullptr) opts = &d;
    gc::IngestionConfig cfg;
    if (opts->layout != GC_LAYOUT_WIDE && opts->layout != GC_LAYOUT_LONG)
      gc::fail(gc::Errc::invalid_argument, "unknown layout");
    cfg.layout = opts->layout == GC_LAYOUT_LONG ? gc::Layout::long_format : gc::Layout::wide;
    if (opts->component < GC_COMPONENT_LMP || opts->component > GC_COMPONENT_DELTA)
      gc::fail(gc::Errc::invalid_argument, "unknown component");
    cfg.component = static_cast<gc::Component>(opts->component);
    if (opts->timestamp_column) cfg.timestamp_column = opts->timestamp_column;
    if (opts->node_column) cfg.node_column = opts->node_column;
    if (opts->value_column) cfg.value_column = opts->value_column;
    if (opts->component_column) cfg.component_column = opts->component_column;
    cfg.forward_fill = opts->forward_fill != 0;
    cfg.max_fill_hours = opts->max_fill_hours;
    cfg.drop_zero_variance = opts->drop_zero_variance != 0;
    cfg.drop_incomplete = opts->drop_incomplete != 0;
    auto result = gc::load_panel(path, cfg);
    std::string report;
    if (report_json) {
      gc::io::json j{{"dropped_zero_variance", result.report.dropped_zero_variance},
                     {"dropped_missing", result.report.dropped_missing},
                     {"imputed_count", result.report.imputed_count}};
      report = j.dump();
    }
    auto* panel = new gc_panel(std::move(result.panel));
    if (report_json) *report_json = dup_string(report);
    *out = panel;
  });
}

gc_status gc_panel_write(const gc_panel* panel, const char* path) {
  return guard([&] {
    need(panel, "panel");
    need(path, "path");
    gc::write_panel(std::string(path), panel->panel);
  });
}

gc_status gc_panel_delta(const gc_panel* da, const gc_panel* rt, gc_panel** out) {
  return guard([&] {
    need(da, "da");
    need(rt, "rt");
    need(out, "out");
    *out = new gc_panel(gc::compute_delta(da->panel, rt->panel));
  });
}

gc_status gc_panel_slice(const gc_panel* panel, size_t start, size_t width, gc_panel** out) {
  return guard([&] {
    need(panel, "panel");
    need(out, "out");
    *out = new gc_panel(
        gc::slice_window(panel->panel, static_cast<gc::Index>(start), static_cast<gc::Index>(width)));
  });
}

size_t gc_panel_n_nodes(const gc_panel* panel) {
  return panel ? static_cast<size_t>(panel->panel.n_nodes()) : 0;
}

size_t gc_panel_n_times(const gc_panel* panel) {
  return panel ? static_cast<size_t>(panel->panel.n_times()) : 0;
}

const char* gc_panel_node_name(const gc_panel* panel, size_t i) {
  if (panel == nullptr || i >= panel->names.size()) return nullptr;
  return panel->names[i].c_str();
}

gc_status gc_panel_values(const gc_panel* panel, double* buffer, size_t length) {
  return guard([&] {
    need(panel, "panel");
    need(buffer, "buffer");
    const auto& v = panel->panel.values();
    if (length < static_cast<size_t>(v.size())) gc::fail(gc::Errc::invalid_argument, "buffer too small");
    for (gc::Index i = 0; i < v.rows(); ++i)
      for (gc::Index t = 0; t < v.cols(); ++t) buffer[i * v.cols() + t] = v(i, t);
  });
}

gc_status gc_panel_with_values(const gc_panel* like, const double* values, size_t length, gc_component component,
                               gc_panel** out) {
  return guard([&] {
    need(like, "panel");
    need(values, "values");
    need(out, "out");
    const auto n = like->panel.n_nodes(), t = like->panel.n_times();
    if (length != static_cast<size_t>(n * t)) gc::fail(gc::Errc::invalid_argument, "value buffer has the wrong length");
    if (component < GC_COMPONENT_LMP || component > GC_COMPONENT_DELTA)
      gc::fail(gc::Errc::invalid_argument, "unknown component");
    Eigen::MatrixXd v(n, t);
    for (gc::Index i = 0; i < n; ++i)
      for (gc::Index j = 0; j < t; ++j) v(i, j) = values[i * t + j];
    *out = new gc_panel(gc::PricePanel(std::move(v), like->panel.nodes(), like->panel.timestamps(),
                                       static_cast<gc::Component>(component)));
  });
}

int gc_panel_equal(const gc_panel* a, const gc_panel* b) {
  if (a == nullptr || b == nullptr) return 0;
  return a->panel == b->panel ? 1 : 0;
}

void gc_panel_free(gc_panel* panel) { delete panel; }

/* synthetic data */

namespace {

gc::SynthSpec to_spec(const gc_synth_spec* s) {
  gc::SynthSpec spec;
  spec.n_blocks = s->n_blocks;
  spec.nodes_per_block = s->nodes_per_block;
  spec.T = static_cast<gc::Index>(s->T);
  spec.intra_corr = s->intra_corr;
  spec.market_beta = s->market_beta;
  spec.spike_rate = s->spike_rate;
  spec.spike_scale = s->spike_scale;
  if (s->regime_switch_window >= 0) spec.regime_switch_window = s->regime_switch_window;
  spec.window_hours = s->window_hours;
  spec.seed = s->seed;
  return spec;
}

void from_spec(const gc::SynthSpec& spec, gc_synth_spec* s) {
  s->n_blocks = spec.n_blocks;
  s->nodes_per_block = spec.nodes_per_block;
  s->T = static_cast<int64_t>(spec.T);
  s->intra_corr = spec.intra_corr;
  s->market_beta = spec.market_beta;
  s->spike_rate = spec.spike_rate;
  s->spike_scale = spec.spike_scale;
  s->regime_switch_window = spec.regime_switch_window.value_or(-1);
  s->window_hours = spec.window_hours;
  s->seed = spec.seed;
}

}  // namespace

void gc_synth_spec_init(gc_synth_spec* spec) {
  if (spec) from_spec(gc::SynthSpec{}, spec);
}

gc_status gc_synth_generate(const gc_synth_spec* spec, gc_panel** panel, gc_partition** truth,
                            gc_partition** truth_after) {
  return guard([&] {
    need(spec, "spec");
    need(panel, "panel");
    auto result = gc::generate_block_panel(to_spec(spec));
    auto* p = new gc_panel(std::move(result.panel));
    gc_partition* t = nullptr;
    gc_partition* ta = nullptr;
    try {
      if (truth) t = new gc_partition{std::move(result.truth)};
      if (truth_after && result.truth_after) ta = new gc_partition{std::move(*result.truth_after)};
    } catch (...) {
      delete p;
      delete t;
      throw;
    }
    *panel = p;
    if (truth) *truth = t;
    if (truth_after) *truth_after = ta;
  });
}

gc_status gc_synth_spec_write_json(const gc_synth_spec* spec, const char* path) {
  return guard([&] {
    need(spec, "spec");
    auto j = gc::io::synth_spec_to_json(to_spec(spec));
    write_to(path, [&](std::ostream& out) { gc::io::write_json(out, j); });
  });
}

gc_status gc_synth_spec_read_json(const char* path, gc_synth_spec* spec) {
  return guard([&] {
    need(path, "path");
    need(spec, "spec");
    from_spec(gc::io::synth_spec_from_json(gc::io::read_json_file(path)), spec);
  });
}

gc_status gc_random_panel(size_t n, size_t t, uint64_t seed, gc_panel** out) {
  return guard([&] {
    need(out, "out");
    *out = new gc_panel(gc::generate_random_panel(static_cast<gc::Index>(n), static_cast<gc::Index>(t), seed));
  });
}

/* correlation matrices */

void gc_measure_options_init(gc_measure_options* opts) {
  if (opts == nullptr) return;
  gc::SparseConfig sparse;
  opts->theta = gc::defaults::kSmoothingTheta;
  opts->tau = gc::defaults::kEventSyncTau;
  opts->normalization = GC_ES_DIAGONAL;
  opts->isolate_eventless = 0;
  opts->rho = sparse.rho;
  opts->sparse_tol = sparse.tol;
  opts->sparse_max_iter = sparse.max_iter;
  opts->eps_pd = sparse.eps_pd;
  opts->zero_eps = sparse.zero_eps;
  opts->gram = gc::defaults::kStringGram;
}

gc_status gc_measure_from_name(const char* name, gc_measure* out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    *out = from_measure(gc::parse_measure(name));
  });
}

const char* gc_measure_name(gc_measure m) {
  try {
    return gc::to_string(to_measure(m)).data();
  } catch (...) {
    return "unknown";
  }
}

gc_status gc_matrix_compute(const gc_panel* panel, gc_measure measure, const gc_measure_options* opts,
                            gc_matrix** out) {
  return guard([&] {
    need(panel, "panel");
    need(out, "out");
    *out = new gc_matrix{gc::compute_measure(panel->panel, to_measure(measure), to_measure_config(opts))};
  });
}

gc_status gc_sparse_estimate(const gc_matrix* empirical, const gc_measure_options* opts, gc_matrix** out,
                             gc_sparse_report* report) {
  return guard([&] {
    need(empirical, "matrix");
    need(out, "out");
    auto result = gc::sparse_correlation(empirical->m, to_measure_config(opts).sparse);
    if (report) {
      report->iterations = result.report.iterations;
      report->converged = result.report.converged ? 1 : 0;
      report->objective = result.report.objective;
      report->nnz_offdiag = result.report.nnz_offdiag;
    }
    *out = new gc_matrix{std::move(result.matrix)};
  });
}

gc_status gc_matrix_from_values(size_t n, const double* values, const char* const* names, gc_measure measure,
                                gc_matrix** out) {
  return guard([&] {
    need(values, "values");
    need(out, "out");
    if (n == 0) gc::fail(gc::Errc::invalid_argument, "matrix must not be empty");
    gc::CorrelationMatrix c;
    c.measure = to_measure(measure);
    c.nodes = to_names(names, n);
    const auto dim = static_cast<gc::Index>(n);
    c.values.resize(dim, dim);
    for (gc::Index i = 0; i < dim; ++i)
      for (gc::Index j = 0; j < dim; ++j) c.values(i, j) = values[i * dim + j];
    *out = new gc_matrix{std::move(c)};
  });
}

gc_status gc_matrix_read(const char* path, gc_matrix** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new gc_matrix{gc::io::read_matrix(path)};
  });
}

gc_status gc_matrix_write_csv(const gc_matrix* m, const char* path) {
  return guard([&] {
    need(m, "matrix");
    write_to(path, [&](std::ostream& out) { gc::io::write_matrix_csv(out, m->m); });
  });
}

gc_status gc_matrix_write_json(const gc_matrix* m, const char* path) {
  return guard([&] {
    need(m, "matrix");
    auto j = gc::io::matrix_to_json(m->m);
    write_to(path, [&](std::ostream& out) { gc::io::write_json(out, j); });
  });
}

gc_status gc_matrix_render_pgm(const gc_matrix* m, const char* path) {
  return guard([&] {
    need(m, "matrix");
    write_to(path, [&](std::ostream& out) { gc::io::write_pgm(out, m->m.values); });
  });
}

size_t gc_matrix_size(const gc_matrix* m) { return m ? static_cast<size_t>(m->m.size()) : 0; }

gc_measure gc_matrix_measure(const gc_matrix* m) { return m ? from_measure(m->m.measure) : GC_MEASURE_PEARSON; }

const char* gc_matrix_node_name(const gc_matrix* m, size_t i) {
  if (m == nullptr || i >= m->m.nodes.size()) return nullptr;
  return m->m.nodes[i].c_str();
}

gc_status gc_matrix_values(const gc_matrix* m, double* buffer, size_t length) {
  return guard([&] {
    need(m, "matrix");
    need(buffer, "buffer");
    const auto& v = m->m.values;
    if (length < static_cast<size_t>(v.size())) gc::fail(gc::Errc::invalid_argument, "buffer too small");
    for (gc::Index i = 0; i < v.rows(); ++i)
      for (gc::Index j = 0; j < v.cols(); ++j) buffer[i * v.cols() + j] = v(i, j);
  });
}

gc_status gc_matrix_param(const gc_matrix* m, const char* key, double* out) {
  return guard([&] {
    need(m, "matrix");
    need(key, "key");
    need(out, "out");
    *out = m->m.param(key);
  });
}

gc_status gc_window_stats(const gc_matrix* m, double* mean, double* largest_eigenvalue) {
  return guard([&] {
    need(m, "matrix");
    auto s = gc::window_stats(m->m.values);
    if (mean) *mean = s.mean;
    if (largest_eigenvalue) *largest_eigenvalue = s.largest_eig;
  });
}

void gc_matrix_free(gc_matrix* m) { delete m; }

/* random-matrix filtering */

gc_status gc_mp_bounds(size_t n, size_t t, double* lambda_minus, double* lambda_plus, double* q) {
  return guard([&] {
    auto b = gc::mp_bounds(static_cast<gc::Index>(n), static_cast<gc::Index>(t));
    if (lambda_minus) *lambda_minus = b.lambda_minus;
    if (lambda_plus) *lambda_plus = b.lambda_plus;
    if (q) *q = b.q;
  });
}

gc_status gc_mp_density(double lambda, double q, double* out) {
  return guard([&] {
    need(out, "out");
    *out = gc::mp_density(lambda, q);
  });
}

gc_status gc_rmt_split_compute(const gc_matrix* c, size_t t, gc_rmt_split** out) {
  return guard([&] {
    need(c, "matrix");
    need(out, "out");
    *out = new gc_rmt_split{gc::rmt_split(c->m, static_cast<gc::Index>(t)), c->m.nodes};
  });
}

gc_status gc_rmt_split_info(const gc_rmt_split* s, gc_rmt_info* info) {
  return guard([&] {
    need(s, "split");
    need(info, "info");
    info->q = s->split.bounds.q;
    info->lambda_minus = s->split.bounds.lambda_minus;
    info->lambda_plus = s->split.bounds.lambda_plus;
    info->has_market = s->split.has_market ? 1 : 0;
    info->market_eigenvalue = s->split.market_eigenvalue;
    info->n_group_modes = s->split.n_group_modes;
  });
}

gc_status gc_rmt_split_part(const gc_rmt_split* s, gc_rmt_part part, gc_matrix** out) {
  return guard([&] {
    need(s, "split");
    need(out, "out");
    gc::CorrelationMatrix c;
    c.nodes = s->nodes;
    c.measure = gc::Measure::rmt_filtered;
    switch (part) {
      case GC_RMT_RANDOM: c.values = s->split.random_part; c.params["part"] = std::string("random"); break;
      case GC_RMT_GROUP: c.values = s->split.group_part; c.params["part"] = std::string("group"); break;
      case GC_RMT_MARKET: c.values = s->split.market_part; c.params["part"] = std::string("market"); break;
      default: gc::fail(gc::Errc::invalid_argument, "unknown RMT component");
    }
    c.params["lambda_plus"] = s->split.bounds.lambda_plus;
    *out = new gc_matrix{std::move(c)};
  });
}

gc_status gc_rmt_split_write_json(const gc_rmt_split* s, const char* path) {
  return guard([&] {
    need(s, "split");
    auto j = gc::io::rmt_split_to_json(s->split, s->nodes);
    write_to(path, [&](std::ostream& out) { gc::io::write_json(out, j); });
  });
}

gc_status gc_rmt_split_write_histogram(const gc_rmt_split* s, int bins, const char* path) {
  return guard([&] {
    need(s, "split");
    auto h = gc::eigenvalue_histogram(s->split.eigenvalues, bins);
    write_to(path, [&](std::ostream& out) { gc::io::write_histogram_csv(out, h); });
  });
}

void gc_rmt_split_free(gc_rmt_split* s) { delete s; }

/* filtered graphs */

gc_status gc_graph_kind_from_name(const char* name, gc_graph_kind* out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    *out = static_cast<gc_graph_kind>(gc::parse_graph_kind(gc::text::lower(gc::text::trim(name))));
  });
}

gc_status gc_graph_build(const gc_matrix* c, gc_graph_kind kind, double quantile, int cap, gc_graph** out) {
  return guard([&] {
    need(c, "matrix");
    need(out, "out");
    gc::FilteredGraph g;
    switch (kind) {
      case GC_GRAPH_THRESHOLD: g = gc::threshold_graph(c->m, quantile); break;
      case GC_GRAPH_MST: g = gc::mst(c->m); break;
      case GC_GRAPH_PMFG: g = gc::pmfg(c->m, cap > 0 ? cap : gc::defaults::kPmfgCap); break;
      default: gc::fail(gc::Errc::invalid_argument, "unknown graph kind");
    }
    *out = new gc_graph{std::move(g)};
  });
}

gc_status gc_graph_correlation_weights(const gc_graph* g, const gc_matrix* c, gc_graph** out) {
  return guard([&] {
    need(g, "graph");
    need(c, "matrix");
    need(out, "out");
    *out = new gc_graph{gc::with_correlation_weights(g->g, c->m)};
  });
}

size_t gc_graph_n_vertices(const gc_graph* g) { return g ? static_cast<size_t>(g->g.n_vertices) : 0; }

size_t gc_graph_n_edges(const gc_graph* g) { return g ? g->g.edges.size() : 0; }

gc_status gc_graph_edge(const gc_graph* g, size_t index, int* i, int* j, double* weight) {
  return guard([&] {
    need(g, "graph");
    if (index >= g->g.edges.size()) gc::fail(gc::Errc::invalid_argument, "edge index out of range");
    const auto& e = g->g.edges[index];
    if (i) *i = e.i;
    if (j) *j = e.j;
    if (weight) *weight = e.weight;
  });
}

gc_status gc_graph_write_csv(const gc_graph* g, const char* path) {
  return guard([&] {
    need(g, "graph");
    write_to(path, [&](std::ostream& out) { gc::io::write_graph_csv(out, g->g); });
  });
}

gc_status gc_graph_write_header_json(const gc_graph* g, const char* path) {
  return guard([&] {
    need(g, "graph");
    auto j = gc::io::graph_header_json(g->g);
    write_to(path, [&](std::ostream& out) { gc::io::write_json(out, j); });
  });
}

void gc_graph_free(gc_graph* g) { delete g; }

/* partitions */

gc_status gc_cluster_method_from_name(const char* name, gc_cluster_method* out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    *out = from_method(gc::parse_cluster_method(name));
  });
}

const char* gc_cluster_method_name(gc_cluster_method m) {
  return m == GC_CLUSTER_SPECTRAL ? "spectral" : m == GC_CLUSTER_MST_LOUVAIN ? "mst+louvain" : "unknown";
}

gc_status gc_cluster(const gc_matrix* c, gc_cluster_method method, int k, uint64_t seed, gc_partition** out) {
  return guard([&] {
    need(c, "matrix");
    need(out, "out");
    *out = new gc_partition{gc::cluster_matrix(c->m, to_method(method), k, seed)};
  });
}

gc_status gc_louvain(const gc_graph* g, uint64_t seed, gc_partition** out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    *out = new gc_partition{gc::louvain(g->g, seed)};
  });
}

gc_status gc_location_proxy(const char* const* names, size_t n, gc_cluster_method method, int k, int gram,
                            uint64_t seed, gc_partition** out) {
  return guard([&] {
    need(out, "out");
    std::vector<gc::NodeName> nodes;
    for (const auto& s : to_names(names, n)) nodes.push_back(gc::parse_node_name(s));
    *out = new gc_partition{gc::location_proxy_for(nodes, to_method(method), k, gram, seed)};
  });
}

gc_status gc_partition_from_labels(const int* labels, size_t n, const char* const* names, gc_partition** out) {
  return guard([&] {
    need(labels, "labels");
    need(out, "out");
    gc::Partition p = gc::make_partition(std::span<const int>(labels, n));
    if (names) p.nodes = to_names(names, n);
    *out = new gc_partition{std::move(p)};
  });
}

gc_status gc_partition_read(const char* path, gc_partition** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    std::string p(path);
    if (p.size() >= 5 && p.compare(p.size() - 5, 5, ".json") == 0) {
      *out = new gc_partition{gc::io::partition_from_json(gc::io::read_json_file(p))};
      return;
    }
    std::ifstream in(p, std::ios::binary);
    if (!in) gc::fail(gc::Errc::io, "cannot open " + p);
    *out = new gc_partition{gc::io::read_partition_csv(in)};
  });
}

gc_status gc_partition_write_csv(const gc_partition* p, const gc_partition* reference, const char* path) {
  return guard([&] {
    need(p, "partition");
    std::vector<bool> flags;
    if (reference) flags = gc::misclassified(p->p, reference->p);
    write_to(path, [&](std::ostream& out) { gc::io::write_partition_csv(out, p->p, reference ? &flags : nullptr); });
  });
}

gc_status gc_partition_write_json(const gc_partition* p, const char* path) {
  return guard([&] {
    need(p, "partition");
    auto j = gc::io::partition_to_json(p->p);
    write_to(path, [&](std::ostream& out) { gc::io::write_json(out, j); });
  });
}

size_t gc_partition_size(const gc_partition* p) { return p ? p->p.size() : 0; }

int gc_partition_k(const gc_partition* p) { return p ? p->p.k : 0; }

gc_status gc_partition_labels(const gc_partition* p, int* buffer, size_t length) {
  return guard([&] {
    need(p, "partition");
    need(buffer, "buffer");
    if (length < p->p.size()) gc::fail(gc::Errc::invalid_argument, "buffer too small");
    std::copy(p->p.labels.begin(), p->p.labels.end(), buffer);
  });
}

gc_status gc_modularity(const gc_graph* g, const gc_partition* p, gc_modularity_convention conv, double* out) {
  return guard([&] {
    need(g, "graph");
    need(p, "partition");
    need(out, "out");
    if (conv != GC_MODULARITY_STANDARD && conv != GC_MODULARITY_PAPER_1_OVER_M)
      gc::fail(gc::Errc::invalid_argument, "unknown modularity convention");
    *out = gc::modularity(g->g, p->p,
                          conv == GC_MODULARITY_STANDARD ? gc::ModularityConvention::standard
                                                         : gc::ModularityConvention::paper_1_over_m);
  });
}

gc_status gc_adjusted_rand_index(const gc_partition* a, const gc_partition* b, double* out) {
  return guard([&] {
    need(a, "partition");
    need(b, "partition");
    need(out, "out");
    *out = gc::adjusted_rand_index(a->p, b->p);
  });
}

gc_status gc_rand_index(const gc_partition* a, const gc_partition* b, double* out) {
  return guard([&] {
    need(a, "partition");
    need(b, "partition");
    need(out, "out");
    *out = gc::rand_index(a->p, b->p);
  });
}

gc_status gc_disparity(const gc_partition* p, double* out) {
  return guard([&] {
    need(p, "partition");
    need(out, "out");
    *out = gc::disparity(p->p);
  });
}

void gc_partition_free(gc_partition* p) { delete p; }

/* tuning */

gc_status gc_tune(const gc_panel* panel, const gc_measure* measures, size_t n_measures, int n_min, int n_max,
                  uint64_t seed, const gc_measure_options* opts, gc_tuning** out) {
  return guard([&] {
    need(panel, "panel");
    need(measures, "measures");
    need(out, "out");
    std::vector<gc::Measure> ms;
    for (size_t i = 0; i < n_measures; ++i) ms.push_back(to_measure(measures[i]));
    *out = new gc_tuning{gc::tune_clusters(panel->panel, ms, n_min, n_max, seed, to_measure_config(opts))};
  });
}

size_t gc_tuning_size(const gc_tuning* t) { return t ? t->points.size() : 0; }

gc_status gc_tuning_point(const gc_tuning* t, size_t index, int* n, gc_measure* measure, double* ari,
                          double* disparity) {
  return guard([&] {
    need(t, "tuning");
    if (index >= t->points.size()) gc::fail(gc::Errc::invalid_argument, "tuning index out of range");
    const auto& p = t->points[index];
    if (n) *n = p.n;
    if (measure) *measure = from_measure(p.measure);
    if (ari) *ari = p.ari;
    if (disparity) *disparity = p.disparity;
  });
}

gc_status gc_tuning_write_csv(const gc_tuning* t, const char* path) {
  return guard([&] {
    need(t, "tuning");
    write_to(path, [&](std::ostream& out) { gc::io::write_tuning_csv(out, t->points); });
  });
}

void gc_tuning_free(gc_tuning* t) { delete t; }

/* dynamics */

void gc_dynamics_options_init(gc_dynamics_options* opts) {
  if (opts == nullptr) return;
  opts->measures = nullptr;
  opts->n_measures = 0;
  opts->methods = nullptr;
  opts->n_methods = 0;
  opts->k = gc::defaults::kSpectralClusters;
  opts->window_hours = gc::defaults::kWindowHours;
  opts->benchmark = -1;
  opts->moving_std_window = gc::defaults::kMovingStdWindow;
  gc_measure_options_init(&opts->measure);
  opts->seed = 0;
  opts->threads = 0;
}

gc_status gc_dynamics_run(const gc_panel* panel, const gc_dynamics_options* opts, gc_dynamics** out) {
  return guard([&] {
    need(panel, "panel");
    need(out, "out");
    gc_dynamics_options d;
    gc_dynamics_options_init(&d);
    if (opts == nullptr) opts = &d;
    gc::DynamicsConfig cfg;
    if (opts->measures && opts->n_measures > 0) {
      cfg.measures.clear();
      for (size_t i = 0; i < opts->n_measures; ++i) cfg.measures.push_back(to_measure(opts->measures[i]));
    }
    if (opts->methods && opts->n_methods > 0) {
      cfg.methods.clear();
      for (size_t i = 0; i < opts->n_methods; ++i) cfg.methods.push_back(to_method(opts->methods[i]));
    }
    cfg.k = opts->k;
    cfg.window_hours = opts->window_hours;
    if (opts->benchmark >= 0) cfg.benchmark = opts->benchmark;
    if (opts->moving_std_window < 2) gc::fail(gc::Errc::invalid_argument, "moving-std window must be >= 2");
    cfg.moving_std_window = opts->moving_std_window;
    cfg.measure = to_measure_config(&opts->measure);
    cfg.seed = opts->seed;
    cfg.threads = opts->threads > 0 ? opts->threads : gc::threads_from_env();
    auto result = gc::run_dynamics(panel->panel, cfg);
    *out = new gc_dynamics{std::move(result), cfg};
  });
}

size_t gc_dynamics_n_tracks(const gc_dynamics* d) { return d ? d->result.tracks.size() : 0; }

size_t gc_dynamics_n_windows(const gc_dynamics* d) { return d ? static_cast<size_t>(d->result.n_windows) : 0; }

int gc_dynamics_benchmark(const gc_dynamics* d) { return d ? d->result.benchmark : -1; }

gc_status gc_dynamics_track_info(const gc_dynamics* d, size_t track, gc_measure* measure, gc_cluster_method* method) {
  return guard([&] {
    const auto& t = track_at(d, track);
    if (measure) *measure = from_measure(t.measure);
    if (method) *method = from_method(t.method);
  });
}

gc_status gc_dynamics_track_values(const gc_dynamics* d, size_t track, gc_track_field field, double* buffer,
                                   size_t length) {
  return guard([&] {
    const auto& t = track_at(d, track);
    need(buffer, "buffer");
    const std::vector<double>* v = nullptr;
    switch (field) {
      case GC_TRACK_MEAN_CORR: v = &t.mean_corr; break;
      case GC_TRACK_LARGEST_EIG: v = &t.largest_eig; break;
      case GC_TRACK_DISPARITY: v = &t.disparity; break;
      case GC_TRACK_ARI_BENCHMARK: v = &t.ari_benchmark; break;
      case GC_TRACK_ARI_LOCATION: v = &t.ari_location; break;
      default: gc::fail(gc::Errc::invalid_argument, "unknown track field");
    }
    if (length < v->size()) gc::fail(gc::Errc::invalid_argument, "buffer too small");
    std::copy(v->begin(), v->end(), buffer);
  });
}

gc_status gc_dynamics_write_track_csv(const gc_dynamics* d, size_t track, const char* path) {
  return guard([&] {
    const auto& t = track_at(d, track);
    write_to(path, [&](std::ostream& out) { gc::io::write_track_csv(out, t); });
  });
}

gc_status gc_dynamics_write_moving_std_csv(const gc_dynamics* d, size_t track, const char* path) {
  return guard([&] {
    const auto& t = track_at(d, track);
    const int w = d->cfg.moving_std_window;
    if (static_cast<size_t>(w) > t.ari_location.size())
      gc::fail(gc::Errc::undefined, "track has " + std::to_string(t.ari_location.size()) +
                                        " windows, fewer than the moving-std window of " + std::to_string(w));
    auto ms = gc::moving_std(t.ari_location, w);
    write_to(path, [&](std::ostream& out) { gc::io::write_moving_std_csv(out, t.window_index, ms, w); });
  });
}

gc_status gc_dynamics_write_summary_json(const gc_dynamics* d, const char* path) {
  return guard([&] {
    need(d, "dynamics");
    auto j = gc::io::dynamics_summary_json(d->result, d->cfg);
    write_to(path, [&](std::ostream& out) { gc::io::write_json(out, j); });
  });
}

void gc_dynamics_free(gc_dynamics* d) { delete d; }

gc_status gc_moving_std(const double* values, size_t length, int w, double* out) {
  return guard([&] {
    need(values, "values");
    need(out, "out");
    auto ms = gc::moving_std(std::vector<double>(values, values + length), w);
    std::copy(ms.begin(), ms.end(), out);
  });
}

}  // extern "C"
