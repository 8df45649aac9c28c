#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridcorr::text {

/// Splits one CSV record. Handles double-quoted fields with "" escapes.
std::vector<std::string> split_csv(std::string_view line);

/// Reads the next non-empty line, stripping '\r' and a leading UTF-8 BOM on the first line.
bool next_line(std::istream& in, std::string& line, bool first = false);

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(std::string_view s);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Parses a decimal value; "NaN", "nan" and empty fields map to nullopt.
std::optional<double> parse_optional_double(std::string_view s);
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

std::string_view trim(std::string_view s);
std::string lower(std::string_view s);

/// Writes through a sibling temp file and renames it into place.
void write_file_atomic(const std::string& path, const std::function<void(std::ostream&)>& body);

}  // namespace gridcorr::text
