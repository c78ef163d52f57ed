#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace snnlz {

// Shortest decimal representation that parses back to the identical double.
std::string FormatDouble(double value);

// Strict parsers: the whole string must be consumed. Throw kParse.
double ParseDouble(std::string_view text);
std::int64_t ParseInt(std::string_view text);
std::uint64_t ParseUint(std::string_view text);

// Percentage with two decimals and a trailing '%', e.g. 0.865 -> "86.50%".
std::string FormatPercent(double fraction);

std::string_view Trim(std::string_view text);

}  // namespace snnlz
