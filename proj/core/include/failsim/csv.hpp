#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace failsim
{

/// Shortest decimal text that reads back to exactly `value`.
std::string format_double(double value);

/// Parses the whole of `text` as a double; throws DomainError otherwise.
double parse_double(std::string_view text);

/// Splits one CSV line on commas (no quoting; fields are plain tokens).
std::vector<std::string> split_csv_line(std::string_view line);

} // namespace failsim
