#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gridcorr/gridcorr.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  fs::path p = fs::temp_directory_path() / "gridcorr_test_capi";
  fs::create_directories(p);
  return p;
}

std::vector<double> values(const gc_matrix* m) {
  size_t n = gc_matrix_size(m);
  std::vector<double> v(n * n);
  REQUIRE(gc_matrix_values(m, v.data(), v.size()) == GC_OK);
  return v;
}

std::vector<int> labels(const gc_partition* p) {
  std::vector<int> v(gc_partition_size(p));
  REQUIRE(gc_partition_labels(p, v.data(), v.size()) == GC_OK);
  return v;
}

}  // namespace

TEST_CASE("status names and error messages") {
  CHECK(std::string(gc_status_name(GC_OK)) == "ok");
  CHECK(std::strlen(gc_version()) > 0);
  int out = 0;
  CHECK(gc_ns_mapping(0, 144, &out) == GC_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(gc_last_error()) > 0);
  CHECK(gc_ns_mapping(100, 144, &out) == GC_OK);
  CHECK(out == 144);
  CHECK(gc_ns_mapping(200, 144, &out) == GC_OK);
  CHECK(out == 200);
  CHECK(gc_ns_mapping(1, 1, nullptr) == GC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("defaults exposed through the C interface") {
  CHECK(gc_default_smoothing_theta() == 3.0);
  CHECK(gc_default_event_sync_tau() == 3);
  CHECK(gc_default_clusters() == 200);
  CHECK(gc_default_moving_std_window() == 50);
  CHECK(gc_default_window_hours() == 168);
  CHECK(gc_default_threshold_quantile() == 0.5);
  gc_measure_options mo;
  gc_measure_options_init(&mo);
  CHECK(mo.theta == 3.0);
  CHECK(mo.tau == 3);
  CHECK(mo.normalization == GC_ES_DIAGONAL);
  gc_dynamics_options dyn;
  gc_dynamics_options_init(&dyn);
  CHECK(dyn.benchmark == -1);
  CHECK(dyn.moving_std_window == 50);
  gc_synth_spec spec;
  gc_synth_spec_init(&spec);
  CHECK(spec.n_blocks == 4);
  CHECK(spec.nodes_per_block == 25);
  CHECK(spec.regime_switch_window == -1);
}

TEST_CASE("names convert to enums and back") {
  gc_measure m;
  REQUIRE(gc_measure_from_name("smoothed_pearson", &m) == GC_OK);
  CHECK(m == GC_MEASURE_SMOOTHED_PEARSON);
  CHECK(std::string(gc_measure_name(GC_MEASURE_EVENT_SYNC)) == "event_sync");
  CHECK(gc_measure_from_name("kendall", &m) == GC_ERR_INVALID_ARGUMENT);
  gc_cluster_method cm;
  REQUIRE(gc_cluster_method_from_name("mst+louvain", &cm) == GC_OK);
  CHECK(cm == GC_CLUSTER_MST_LOUVAIN);
  gc_graph_kind gk;
  CHECK(gc_graph_kind_from_name("pmfg", &gk) == GC_OK);
  CHECK(gk == GC_GRAPH_PMFG);
  gc_component comp;
  CHECK(gc_component_from_name("mcc", &comp) == GC_OK);
  CHECK(comp == GC_COMPONENT_MCC);
}

TEST_CASE("synthetic panel through correlation, graphs and clustering") {
  gc_synth_spec spec;
  gc_synth_spec_init(&spec);
  spec.seed = 3;
  gc_panel* panel = nullptr;
  gc_partition* truth = nullptr;
  gc_partition* after = reinterpret_cast<gc_partition*>(1);
  REQUIRE(gc_synth_generate(&spec, &panel, &truth, &after) == GC_OK);
  CHECK(after == nullptr);
  CHECK(gc_panel_n_nodes(panel) == 100);
  CHECK(gc_panel_n_times(panel) == 2000);
  CHECK(std::string(gc_panel_node_name(panel, 0)) == "BLK0_NODE0");

  gc_measure_options mo;
  gc_measure_options_init(&mo);
  gc_matrix* c = nullptr;
  REQUIRE(gc_matrix_compute(panel, GC_MEASURE_PEARSON, &mo, &c) == GC_OK);
  CHECK(gc_matrix_size(c) == 100);
  CHECK(gc_matrix_measure(c) == GC_MEASURE_PEARSON);
  auto v = values(c);
  CHECK(v[0] == 1.0);
  CHECK(v[1] == v[100]);

  gc_matrix* s = nullptr;
  REQUIRE(gc_matrix_compute(panel, GC_MEASURE_SMOOTHED_PEARSON, &mo, &s) == GC_OK);
  double theta = 0;
  CHECK(gc_matrix_param(s, "theta", &theta) == GC_OK);
  CHECK(theta == 3.0);

  gc_partition* spectral = nullptr;
  REQUIRE(gc_cluster(c, GC_CLUSTER_SPECTRAL, 4, 0, &spectral) == GC_OK);
  double ari = 0;
  REQUIRE(gc_adjusted_rand_index(spectral, truth, &ari) == GC_OK);
  CHECK(ari >= 0.9);
  CHECK(gc_partition_k(spectral) == 4);
  gc_partition* too_many = nullptr;
  CHECK(gc_cluster(c, GC_CLUSTER_SPECTRAL, 101, 0, &too_many) == GC_ERR_INVALID_ARGUMENT);
  CHECK(too_many == nullptr);

  gc_graph* mst = nullptr;
  REQUIRE(gc_graph_build(c, GC_GRAPH_MST, 0.5, 0, &mst) == GC_OK);
  CHECK(gc_graph_n_edges(mst) == 99);
  gc_graph* pmfg = nullptr;
  REQUIRE(gc_graph_build(c, GC_GRAPH_PMFG, 0.5, 0, &pmfg) == GC_OK);
  CHECK(gc_graph_n_edges(pmfg) == 3 * 98);
  gc_graph* weighted = nullptr;
  REQUIRE(gc_graph_correlation_weights(mst, c, &weighted) == GC_OK);
  int i = -1, j = -1;
  double w = 0;
  REQUIRE(gc_graph_edge(weighted, 0, &i, &j, &w) == GC_OK);
  CHECK(w == std::max(v[static_cast<size_t>(i) * 100 + j], 0.0));
  CHECK(gc_graph_edge(weighted, 99, &i, &j, &w) == GC_ERR_INVALID_ARGUMENT);

  gc_partition* louv = nullptr;
  REQUIRE(gc_louvain(weighted, 1, &louv) == GC_OK);
  double q = 0, q2 = 0;
  REQUIRE(gc_modularity(weighted, louv, GC_MODULARITY_STANDARD, &q) == GC_OK);
  REQUIRE(gc_modularity(weighted, louv, GC_MODULARITY_PAPER_1_OVER_M, &q2) == GC_OK);
  CHECK(q > 0);
  CHECK(q2 == doctest::Approx(2 * q).epsilon(1e-14));

  double mean = 0, top = 0;
  REQUIRE(gc_window_stats(c, &mean, &top) == GC_OK);
  CHECK(top >= 1.0);

  gc_partition_free(louv);
  gc_graph_free(weighted);
  gc_graph_free(pmfg);
  gc_graph_free(mst);
  gc_partition_free(spectral);
  gc_matrix_free(s);
  gc_matrix_free(c);
  gc_partition_free(truth);
  gc_panel_free(panel);
}

TEST_CASE("matrices and partitions round-trip through files") {
  const double vals[9] = {1, 0.5, -0.25, 0.5, 1, 0, -0.25, 0, 1};
  const char* names[3] = {"A_1", "B_2", "C_3"};
  gc_matrix* m = nullptr;
  REQUIRE(gc_matrix_from_values(3, vals, names, GC_MEASURE_PEARSON, &m) == GC_OK);
  auto dir = scratch();
  auto csv = (dir / "m.csv").string(), json = (dir / "m.json").string();
  REQUIRE(gc_matrix_write_csv(m, csv.c_str()) == GC_OK);
  REQUIRE(gc_matrix_write_json(m, json.c_str()) == GC_OK);
  for (const auto& path : {csv, json}) {
    gc_matrix* back = nullptr;
    REQUIRE(gc_matrix_read(path.c_str(), &back) == GC_OK);
    CHECK(values(back) == std::vector<double>(vals, vals + 9));
    CHECK(std::string(gc_matrix_node_name(back, 2)) == "C_3");
    gc_matrix_free(back);
  }

  const int labs[3] = {5, 5, 9};
  gc_partition* p = nullptr;
  REQUIRE(gc_partition_from_labels(labs, 3, names, &p) == GC_OK);
  CHECK(labels(p) == std::vector<int>{0, 0, 1});
  double disp = 0;
  REQUIRE(gc_disparity(p, &disp) == GC_OK);
  CHECK(disp == doctest::Approx(std::sqrt(0.5) / 1.5).epsilon(1e-12));
  auto pcsv = (dir / "p.csv").string();
  REQUIRE(gc_partition_write_csv(p, p, pcsv.c_str()) == GC_OK);
  gc_partition* pb = nullptr;
  REQUIRE(gc_partition_read(pcsv.c_str(), &pb) == GC_OK);
  double ri = 0;
  REQUIRE(gc_rand_index(p, pb, &ri) == GC_OK);
  CHECK(ri == 1.0);

  auto pgm = (dir / "m.pgm").string();
  REQUIRE(gc_matrix_render_pgm(m, pgm.c_str()) == GC_OK);
  CHECK(fs::file_size(pgm) == std::string("P5\n3 3\n255\n").size() + 9);

  gc_matrix* missing = nullptr;
  CHECK(gc_matrix_read((dir / "absent.csv").string().c_str(), &missing) == GC_ERR_IO);
  std::ofstream(dir / "bad.csv") << "A,B\n1,x\n0,1\n";
  CHECK(gc_matrix_read((dir / "bad.csv").string().c_str(), &missing) == GC_ERR_PARSE);

  gc_partition_free(pb);
  gc_partition_free(p);
  gc_matrix_free(m);
  fs::remove_all(dir);
}

TEST_CASE("panel load, delta and slice") {
  auto dir = scratch();
  std::ofstream(dir / "da.csv") << "timestamp,A_1,B_2\n2020-01-01T00:00:00Z,10,4\n2020-01-01T01:00:00Z,12,5\n"
                                   "2020-01-01T02:00:00Z,9,7\n";
  std::ofstream(dir / "rt.csv") << "timestamp,A_1,B_2\n2020-01-01T00:00:00Z,8,4\n2020-01-01T01:00:00Z,12,1\n"
                                   "2020-01-01T02:00:00Z,10,7\n";
  gc_ingest_options opts;
  gc_ingest_options_init(&opts);
  opts.component = GC_COMPONENT_LMP;
  gc_panel *da = nullptr, *rt = nullptr, *delta = nullptr, *sl = nullptr;
  char* report = nullptr;
  REQUIRE(gc_panel_load((dir / "da.csv").string().c_str(), &opts, &da, &report) == GC_OK);
  REQUIRE(report != nullptr);
  CHECK(std::string(report).find("imputed_count") != std::string::npos);
  gc_string_free(report);
  REQUIRE(gc_panel_load((dir / "rt.csv").string().c_str(), &opts, &rt, nullptr) == GC_OK);
  REQUIRE(gc_panel_delta(da, rt, &delta) == GC_OK);
  std::vector<double> d(6);
  REQUIRE(gc_panel_values(delta, d.data(), d.size()) == GC_OK);
  CHECK(d == std::vector<double>{2, 0, -1, 0, 4, 0});
  CHECK(gc_panel_values(delta, d.data(), 5) == GC_ERR_INVALID_ARGUMENT);
  REQUIRE(gc_panel_slice(delta, 1, 2, &sl) == GC_OK);
  CHECK(gc_panel_n_times(sl) == 2);
  CHECK(gc_panel_slice(delta, 2, 2, &sl) == GC_ERR_INVALID_ARGUMENT);

  gc_panel* missing = nullptr;
  CHECK(gc_panel_load((dir / "none.csv").string().c_str(), &opts, &missing, nullptr) == GC_ERR_IO);
  gc_panel_free(sl);
  gc_panel_free(delta);
  gc_panel_free(rt);
  gc_panel_free(da);
  fs::remove_all(dir);
}

TEST_CASE("dynamics and moving std") {
  gc_synth_spec spec;
  gc_synth_spec_init(&spec);
  spec.T = 3 * 168;
  gc_panel* panel = nullptr;
  gc_partition* truth = nullptr;
  REQUIRE(gc_synth_generate(&spec, &panel, &truth, nullptr) == GC_OK);
  gc_dynamics_options dopts;
  gc_dynamics_options_init(&dopts);
  dopts.k = 4;
  gc_dynamics* d = nullptr;
  REQUIRE(gc_dynamics_run(panel, &dopts, &d) == GC_OK);
  CHECK(gc_dynamics_n_windows(d) == 3);
  CHECK(gc_dynamics_n_tracks(d) == 1);
  CHECK(gc_dynamics_benchmark(d) == 2);
  std::vector<double> ari(3);
  REQUIRE(gc_dynamics_track_values(d, 0, GC_TRACK_ARI_BENCHMARK, ari.data(), ari.size()) == GC_OK);
  CHECK(ari[2] == 1.0);
  auto path = (scratch() / "ms.csv").string();
  CHECK(gc_dynamics_write_moving_std_csv(d, 0, path.c_str()) == GC_ERR_UNDEFINED);

  dopts.window_hours = 1000;
  gc_dynamics* bad = nullptr;
  CHECK(gc_dynamics_run(panel, &dopts, &bad) == GC_ERR_INVALID_ARGUMENT);

  const double track[4] = {0, 1, 0, 1};
  double out[3];
  REQUIRE(gc_moving_std(track, 4, 2, out) == GC_OK);
  for (double v : out) CHECK(v == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(gc_moving_std(track, 4, 5, out) == GC_ERR_INVALID_ARGUMENT);

  gc_dynamics_free(d);
  gc_partition_free(truth);
  gc_panel_free(panel);
  fs::remove_all(scratch());
}

TEST_CASE("null handles are rejected, null frees are harmless") {
  gc_matrix* m = nullptr;
  CHECK(gc_matrix_compute(nullptr, GC_MEASURE_PEARSON, nullptr, &m) == GC_ERR_INVALID_ARGUMENT);
  CHECK(std::string(gc_last_error()).size() > 0);
  CHECK(gc_matrix_from_values(2, nullptr, nullptr, GC_MEASURE_PEARSON, &m) == GC_ERR_INVALID_ARGUMENT);
  gc_panel* p = nullptr;
  CHECK(gc_random_panel(1, 5, 0, &p) == GC_ERR_INVALID_ARGUMENT);
  gc_panel_free(nullptr);
  gc_matrix_free(nullptr);
  gc_graph_free(nullptr);
  gc_partition_free(nullptr);
  gc_dynamics_free(nullptr);
  gc_tuning_free(nullptr);
  gc_rmt_split_free(nullptr);
  gc_string_free(nullptr);
}
