#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace shelfcast {

// Minimal CSV support for the fixed-schema files this project reads and
// writes. Fields never contain commas or quotes, so no quoting is done.
std::vector<std::string_view> split_csv_line(std::string_view line);

// Shortest representation that round-trips; NaN is written as an empty field.
std::string format_number(double v);
// Fixed decimals for report tables; NaN is written as "NaN".
std::string format_fixed(double v, int decimals = 6);

// Empty field -> NaN.
double parse_number(std::string_view field);
long long parse_integer(std::string_view field);

// Writes `contents` to `path` through a temporary file and rename, so readers
// never observe a partially written file.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace shelfcast
