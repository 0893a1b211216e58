#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stopcal {

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// Fixed 6-decimal formatting used by the comparison table.
std::string format_fixed6(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

// Splits one CSV line on commas (no quoting; our schemas never need it).
std::vector<std::string_view> split_csv_line(std::string_view line);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace stopcal
