#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridcorr/analysis.hpp"
#include "gridcorr/dynamics.hpp"
#include "gridcorr/graph.hpp"
#include "gridcorr/metrics.hpp"
#include "gridcorr/rmt.hpp"
#include "gridcorr/sparse.hpp"
#include "gridcorr/synth.hpp"

namespace gridcorr::io {

using nlohmann::json;

// Correlation matrices: CSV is a header of node names followed by N rows of
// values; JSON is {measure, params, nodes, values}.
void write_matrix_csv(std::ostream& out, const CorrelationMatrix& c);
CorrelationMatrix read_matrix_csv(std::istream& in, Measure measure = Measure::pearson);
json matrix_to_json(const CorrelationMatrix& c);
CorrelationMatrix matrix_from_json(const json& j);
/// Dispatches on the extension (.json or anything else as CSV).
CorrelationMatrix read_matrix(const std::string& path);

json rmt_split_to_json(const RmtSplit& s, const std::vector<std::string>& nodes);
void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins);

json sparse_report_to_json(const SparseSolveReport& r);

void write_graph_csv(std::ostream& out, const FilteredGraph& g);
json graph_header_json(const FilteredGraph& g);

void write_partition_csv(std::ostream& out, const Partition& p, const std::vector<bool>* misclassified = nullptr);
json partition_to_json(const Partition& p);
Partition partition_from_json(const json& j);
Partition read_partition_csv(std::istream& in);

void write_tuning_csv(std::ostream& out, const std::vector<TuningPoint>& points);
void write_track_csv(std::ostream& out, const WindowTrack& t);
void write_moving_std_csv(std::ostream& out, const std::vector<int>& window_index, const std::vector<double>& values,
                          int w);
json dynamics_summary_json(const DynamicsResult& r, const DynamicsConfig& cfg);

json synth_spec_to_json(const SynthSpec& s);
SynthSpec synth_spec_from_json(const json& j);

/// Binary PGM, one pixel per entry: floor((clamp(v, -1, 1) + 1) / 2 * 255).
void write_pgm(std::ostream& out, const Eigen::MatrixXd& m);
unsigned char pixel_value(double v);

json read_json_file(const std::string& path);
/// Two-space indented JSON with a trailing newline.
void write_json(std::ostream& out, const json& j);

}  // namespace gridcorr::io
