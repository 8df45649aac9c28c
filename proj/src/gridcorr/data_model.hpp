#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace gridcorr {

using Index = Eigen::Index;
using Timestamp = std::chrono::sys_seconds;

/// Node identifier of the form "PLACE_CODE", split on the last underscore.
struct NodeName {
  std::string raw;
  std::string place;
  std::string code;
  bool has_code = false;  // false when raw contains no underscore

  friend bool operator==(const NodeName&, const NodeName&) = default;
};

NodeName parse_node_name(std::string_view raw);
std::string format_node_name(const NodeName& name);

enum class Component { lmp, mec, mcc, mlc, delta };

std::string_view to_string(Component c);
Component parse_component(std::string_view s);

/// Immutable N x T panel of hourly values, one row per node.
class PricePanel {
 public:
  PricePanel(Eigen::MatrixXd values, std::vector<NodeName> nodes, std::vector<Timestamp> timestamps,
             Component component);

  Index n_nodes() const { return values_.rows(); }
  Index n_times() const { return values_.cols(); }
  const Eigen::MatrixXd& values() const { return values_; }
  const std::vector<NodeName>& nodes() const { return nodes_; }
  const std::vector<Timestamp>& timestamps() const { return timestamps_; }
  Component component() const { return component_; }

  std::vector<std::string> node_names() const;

  friend bool operator==(const PricePanel&, const PricePanel&);

 private:
  Eigen::MatrixXd values_;
  std::vector<NodeName> nodes_;
  std::vector<Timestamp> timestamps_;
  Component component_;
};

struct ValidationReport {
  std::vector<Index> dropped_zero_variance;  // indices into the file's node order
  std::vector<Index> dropped_missing;
  std::int64_t imputed_count = 0;
};

enum class Layout { wide, long_format };

struct IngestionConfig {
  Layout layout = Layout::wide;
  std::string timestamp_column = "timestamp";
  std::string node_column = "node";            // long layout only
  std::string value_column = "value";          // long layout only
  std::string component_column = "component";  // long layout, used when present
  Component component = Component::mcc;        // tag, and row filter when a component column exists
  bool forward_fill = false;
  int max_fill_hours = 3;
  bool drop_zero_variance = false;
  bool drop_incomplete = false;  // drop nodes whose gaps cannot be imputed instead of failing
};

struct LoadResult {
  PricePanel panel;
  ValidationReport report;
};

LoadResult load_panel(const std::string& path, const IngestionConfig& cfg);
LoadResult read_panel(std::istream& in, const IngestionConfig& cfg);

/// Wide layout, shortest round-trip decimal formatting.
void write_panel(std::ostream& out, const PricePanel& panel);
void write_panel(const std::string& path, const PricePanel& panel);

PricePanel compute_delta(const PricePanel& da, const PricePanel& rt);
PricePanel slice_window(const PricePanel& panel, Index start, Index width);

Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

}  // namespace gridcorr
