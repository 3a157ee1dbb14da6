#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace coopcsma {

/// Shortest decimal text that parses back to exactly the same double.
/// Infinities print as "inf"/"-inf", NaN as "nan".
std::string format_double(double value);

/// Strict double parse; throws std::invalid_argument naming `what` on junk.
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char delimiter);

} // namespace coopcsma
