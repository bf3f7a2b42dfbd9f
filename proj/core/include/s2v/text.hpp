#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace s2v {

// ASCII lowercase; input files are plain ASCII word lists and transcripts.
std::string to_lower(std::string_view s);

// Split on runs of blanks/tabs/CR. Never yields empty tokens.
std::vector<std::string> split_ws(std::string_view line);

// Strict double parse of the whole token (std::from_chars). Rejects
// trailing garbage and non-finite values.
std::optional<double> parse_double(std::string_view token);

// Strict nonnegative integer parse of the whole token.
std::optional<long long> parse_integer(std::string_view token);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

// Fixed-point with the given number of decimals (reports, CSV columns).
std::string format_fixed(double x, int decimals);

}  // namespace s2v
