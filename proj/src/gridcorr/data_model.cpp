#include "gridcorr/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "gridcorr/error.hpp"
#include "gridcorr/text_io.hpp"

namespace gridcorr {

namespace {

constexpr std::chrono::seconds kHour{3600};

std::string node_label(const std::string& raw) { return "'" + raw + "'"; }

}  // namespace

NodeName parse_node_name(std::string_view raw) {
  if (raw.empty()) fail(Errc::invalid_argument, "invalid node name: empty string");
  NodeName n;
  n.raw = std::string(raw);
  auto pos = raw.rfind('_');
  if (pos == std::string_view::npos) {
    n.place = n.raw;
    return n;
  }
  n.place = std::string(raw.substr(0, pos));
  n.code = std::string(raw.substr(pos + 1));
  n.has_code = true;
  if (n.place.empty()) fail(Errc::invalid_argument, "invalid node name " + node_label(n.raw) + ": empty place");
  return n;
}

std::string format_node_name(const NodeName& name) {
  return name.has_code ? name.place + "_" + name.code : name.place;
}

std::string_view to_string(Component c) {
  switch (c) {
    case Component::lmp: return "lmp";
    case Component::mec: return "mec";
    case Component::mcc: return "mcc";
    case Component::mlc: return "mlc";
    case Component::delta: return "delta";
  }
  return "?";
}

Component parse_component(std::string_view s) {
  std::string l = text::lower(text::trim(s));
  if (l == "lmp") return Component::lmp;
  if (l == "mec") return Component::mec;
  if (l == "mcc") return Component::mcc;
  if (l == "mlc") return Component::mlc;
  if (l == "delta") return Component::delta;
  fail(Errc::invalid_argument, "unknown price component: " + std::string(s));
}

PricePanel::PricePanel(Eigen::MatrixXd values, std::vector<NodeName> nodes, std::vector<Timestamp> timestamps,
                       Component component)
    : values_(std::move(values)), nodes_(std::move(nodes)), timestamps_(std::move(timestamps)), component_(component) {
  require(values_.rows() >= 2, "panel needs at least 2 nodes");
  require(values_.cols() >= 2, "panel needs at least 2 hours");
  require(static_cast<Index>(nodes_.size()) == values_.rows(), "node list length does not match panel rows");
  require(static_cast<Index>(timestamps_.size()) == values_.cols(), "timestamp count does not match panel columns");
  for (std::size_t t = 1; t < timestamps_.size(); ++t) {
    if (timestamps_[t] - timestamps_[t - 1] != kHour)
      fail(Errc::data, "timestamps must advance by exactly one hour at " + format_timestamp(timestamps_[t]));
  }
  if (!values_.allFinite()) fail(Errc::data, "panel contains non-finite values");
}

std::vector<std::string> PricePanel::node_names() const {
  std::vector<std::string> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.raw);
  return out;
}

bool operator==(const PricePanel& a, const PricePanel& b) {
  return a.component_ == b.component_ && a.nodes_ == b.nodes_ && a.timestamps_ == b.timestamps_ &&
         a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() && a.values_ == b.values_;
}

Timestamp parse_timestamp(std::string_view text) {
  auto s = text::trim(text);
  auto bad = [&]() -> Timestamp { fail(Errc::parse, "invalid ISO-8601 timestamp: '" + std::string(text) + "'"); };
  auto num = [&](std::size_t pos, std::size_t len) -> int {
    if (pos + len > s.size()) bad();
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (s[i] < '0' || s[i] > '9') bad();
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  // YYYY-MM-DD[T ]HH[:MM[:SS]][Z]
  if (s.size() < 13 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ')) bad();
  int y = num(0, 4), mo = num(5, 2), d = num(8, 2), h = num(11, 2), mi = 0, sec = 0;
  std::size_t pos = 13;
  if (pos < s.size() && s[pos] == ':') {
    mi = num(pos + 1, 2);
    pos += 3;
    if (pos < s.size() && s[pos] == ':') {
      sec = num(pos + 1, 2);
      pos += 3;
    }
  }
  if (pos < s.size() && s[pos] == 'Z') ++pos;
  if (pos != s.size()) bad();
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 59) bad();
  return std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} + std::chrono::seconds{sec};
}

std::string format_timestamp(Timestamp ts) {
  auto day = std::chrono::floor<std::chrono::days>(ts);
  std::chrono::year_month_day ymd{day};
  std::chrono::hh_mm_ss hms{ts - day};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

namespace {

struct RawTable {
  std::vector<std::string> nodes;        // file order
  std::vector<Timestamp> times;          // sorted, hourly, gaps filled with NaN columns
  std::vector<std::vector<double>> rows; // per node, NaN = missing
};

std::ptrdiff_t find_column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (text::trim(header[i]) == name) return static_cast<std::ptrdiff_t>(i);
  return -1;
}

// Builds the contiguous hourly axis from the distinct sorted timestamps.
std::vector<Timestamp> hourly_axis(const std::vector<Timestamp>& sorted_unique) {
  std::vector<Timestamp> axis;
  if (sorted_unique.empty()) return axis;
  axis.push_back(sorted_unique.front());
  for (std::size_t i = 1; i < sorted_unique.size(); ++i) {
    auto step = sorted_unique[i] - sorted_unique[i - 1];
    if (step % kHour != std::chrono::seconds{0})
      fail(Errc::data, "non-hourly cadence at " + format_timestamp(sorted_unique[i]));
    for (auto t = sorted_unique[i - 1] + kHour; t <= sorted_unique[i]; t += kHour) axis.push_back(t);
  }
  return axis;
}

RawTable read_wide(std::istream& in, const IngestionConfig& cfg) {
  std::string line;
  if (!text::next_line(in, line, true)) fail(Errc::parse, "empty CSV: header row required");
  auto header = text::split_csv(line);
  auto ts_col = find_column(header, cfg.timestamp_column);
  if (ts_col < 0) fail(Errc::parse, "timestamp column '" + cfg.timestamp_column + "' not found");
  RawTable table;
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (static_cast<std::ptrdiff_t>(i) == ts_col) continue;
    table.nodes.emplace_back(text::trim(header[i]));
    cols.push_back(i);
  }
  std::vector<std::pair<Timestamp, std::vector<double>>> records;
  std::size_t line_no = 1;
  while (text::next_line(in, line)) {
    ++line_no;
    auto f = text::split_csv(line);
    if (f.size() != header.size())
      fail(Errc::parse, "line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(f.size()));
    std::vector<double> vals;
    vals.reserve(cols.size());
    for (auto c : cols) vals.push_back(text::parse_optional_double(f[c]).value_or(std::nan("")));
    records.emplace_back(parse_timestamp(f[static_cast<std::size_t>(ts_col)]), std::move(vals));
  }
  std::stable_sort(records.begin(), records.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<Timestamp> uniq;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i > 0 && records[i].first == records[i - 1].first)
      fail(Errc::data, "duplicate timestamp " + format_timestamp(records[i].first));
    uniq.push_back(records[i].first);
  }
  table.times = hourly_axis(uniq);
  table.rows.assign(table.nodes.size(), std::vector<double>(table.times.size(), std::nan("")));
  for (auto& [ts, vals] : records) {
    auto t = static_cast<std::size_t>((ts - table.times.front()) / kHour);
    for (std::size_t n = 0; n < vals.size(); ++n) table.rows[n][t] = vals[n];
  }
  return table;
}

RawTable read_long(std::istream& in, const IngestionConfig& cfg) {
  std::string line;
  if (!text::next_line(in, line, true)) fail(Errc::parse, "empty CSV: header row required");
  auto header = text::split_csv(line);
  auto ts_col = find_column(header, cfg.timestamp_column);
  auto node_col = find_column(header, cfg.node_column);
  auto val_col = find_column(header, cfg.value_column);
  auto comp_col = find_column(header, cfg.component_column);
  if (ts_col < 0 || node_col < 0 || val_col < 0)
    fail(Errc::parse, "long layout requires columns '" + cfg.timestamp_column + "', '" + cfg.node_column + "', '" +
                          cfg.value_column + "'");
  struct Cell {
    Timestamp ts;
    std::size_t node;
    double value;
  };
  RawTable table;
  std::unordered_map<std::string, std::size_t> node_index;
  std::vector<Cell> cells;
  std::size_t line_no = 1;
  while (text::next_line(in, line)) {
    ++line_no;
    auto f = text::split_csv(line);
    if (f.size() != header.size())
      fail(Errc::parse, "line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(f.size()));
    if (comp_col >= 0 && parse_component(f[static_cast<std::size_t>(comp_col)]) != cfg.component) continue;
    std::string name(text::trim(f[static_cast<std::size_t>(node_col)]));
    auto [it, inserted] = node_index.try_emplace(name, table.nodes.size());
    if (inserted) table.nodes.push_back(name);
    cells.push_back({parse_timestamp(f[static_cast<std::size_t>(ts_col)]), it->second,
                     text::parse_optional_double(f[static_cast<std::size_t>(val_col)]).value_or(std::nan(""))});
  }
  std::vector<Timestamp> uniq;
  for (auto& c : cells) uniq.push_back(c.ts);
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  table.times = hourly_axis(uniq);
  table.rows.assign(table.nodes.size(), std::vector<double>(table.times.size(), std::nan("")));
  std::vector<std::vector<char>> seen(table.nodes.size(), std::vector<char>(table.times.size(), 0));
  for (auto& c : cells) {
    auto t = static_cast<std::size_t>((c.ts - table.times.front()) / kHour);
    if (seen[c.node][t])
      fail(Errc::data, "duplicate (timestamp,node) pair: " + format_timestamp(c.ts) + ", " + table.nodes[c.node]);
    seen[c.node][t] = 1;
    table.rows[c.node][t] = c.value;
  }
  return table;
}

// Forward-fills runs of at most max_run missing values. Returns the number of
// imputed cells, or nullopt when a gap cannot be filled.
std::optional<std::int64_t> forward_fill(std::vector<double>& row, int max_run) {
  std::int64_t filled = 0;
  std::size_t t = 0;
  while (t < row.size()) {
    if (!std::isnan(row[t])) {
      ++t;
      continue;
    }
    std::size_t end = t;
    while (end < row.size() && std::isnan(row[end])) ++end;
    if (t == 0 || static_cast<int>(end - t) > max_run) return std::nullopt;
    for (std::size_t k = t; k < end; ++k) row[k] = row[t - 1];
    filled += static_cast<std::int64_t>(end - t);
    t = end;
  }
  return filled;
}

}  // namespace

LoadResult read_panel(std::istream& in, const IngestionConfig& cfg) {
  RawTable table = cfg.layout == Layout::wide ? read_wide(in, cfg) : read_long(in, cfg);
  ValidationReport report;
  std::vector<std::size_t> keep;
  for (std::size_t n = 0; n < table.nodes.size(); ++n) {
    auto& row = table.rows[n];
    bool complete = std::none_of(row.begin(), row.end(), [](double v) { return std::isnan(v); });
    if (!complete) {
      std::optional<std::int64_t> filled;
      if (cfg.forward_fill) filled = forward_fill(row, cfg.max_fill_hours);
      if (!filled) {
        if (cfg.drop_incomplete) {
          report.dropped_missing.push_back(static_cast<Index>(n));
          continue;
        }
        auto first_gap = std::find_if(row.begin(), row.end(), [](double v) { return std::isnan(v); }) - row.begin();
        fail(Errc::data, "missing value for node " + node_label(table.nodes[n]) + " at " +
                             format_timestamp(table.times[static_cast<std::size_t>(first_gap)]) +
                             (cfg.forward_fill ? " (gap not imputable)" : ""));
      }
      report.imputed_count += *filled;
    }
    if (cfg.drop_zero_variance && !row.empty()) {
      auto [lo, hi] = std::minmax_element(row.begin(), row.end());
      if (*lo == *hi) {
        report.dropped_zero_variance.push_back(static_cast<Index>(n));
        continue;
      }
    }
    keep.push_back(n);
  }
  if (keep.size() < 2) fail(Errc::data, "fewer than 2 usable nodes after validation");
  if (table.times.size() < 2) fail(Errc::data, "fewer than 2 hourly rows");
  Eigen::MatrixXd values(static_cast<Index>(keep.size()), static_cast<Index>(table.times.size()));
  std::vector<NodeName> nodes;
  for (std::size_t r = 0; r < keep.size(); ++r) {
    nodes.push_back(parse_node_name(table.nodes[keep[r]]));
    for (std::size_t t = 0; t < table.times.size(); ++t)
      values(static_cast<Index>(r), static_cast<Index>(t)) = table.rows[keep[r]][t];
  }
  return {PricePanel(std::move(values), std::move(nodes), std::move(table.times), cfg.component), std::move(report)};
}

LoadResult load_panel(const std::string& path, const IngestionConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot read file: " + path);
  try {
    return read_panel(in, cfg);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void write_panel(std::ostream& out, const PricePanel& panel) {
  out << "timestamp";
  for (const auto& n : panel.nodes()) out << ',' << text::csv_field(n.raw);
  out << '\n';
  for (Index t = 0; t < panel.n_times(); ++t) {
    out << format_timestamp(panel.timestamps()[static_cast<std::size_t>(t)]);
    for (Index n = 0; n < panel.n_nodes(); ++n) out << ',' << text::format_double(panel.values()(n, t));
    out << '\n';
  }
}

void write_panel(const std::string& path, const PricePanel& panel) {
  text::write_file_atomic(path, [&](std::ostream& out) { write_panel(out, panel); });
}

PricePanel compute_delta(const PricePanel& da, const PricePanel& rt) {
  if (da.nodes() != rt.nodes()) fail(Errc::invalid_argument, "day-ahead and real-time panels have different node lists");
  if (da.timestamps() != rt.timestamps())
    fail(Errc::invalid_argument, "day-ahead and real-time panels have different time axes");
  return PricePanel(da.values() - rt.values(), da.nodes(), da.timestamps(), Component::delta);
}

PricePanel slice_window(const PricePanel& panel, Index start, Index width) {
  if (start < 0 || width < 2 || start + width > panel.n_times())
    fail(Errc::invalid_argument, "window [" + std::to_string(start) + ", " + std::to_string(start + width) +
                                     ") out of range for T=" + std::to_string(panel.n_times()));
  std::vector<Timestamp> ts(panel.timestamps().begin() + start, panel.timestamps().begin() + start + width);
  return PricePanel(panel.values().middleCols(start, width), panel.nodes(), std::move(ts), panel.component());
}

}  // namespace gridcorr
