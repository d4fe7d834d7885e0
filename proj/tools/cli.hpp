#pragma once

#include "lcorr/rational.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lcorr::cli {

inline constexpr int kExitSuccess = 0;
/// Usage or domain error. Nothing is written for usage errors.
inline constexpr int kExitError = 1;
/// Output written, but some cells are absent or some checks failed.
inline constexpr int kExitPartial = 2;

/// One invocation; `args` excludes the program name. Data goes to `out` unless
/// --out names a file, which is then replaced atomically. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Comma-separated items, each a rational ("3/4", "2", "0.75") or a range
/// "a..b" or "a..b:step". Ranges step by `default_step` unless a step is given
/// and include b when it lies on the grid. Throws ParseError.
std::vector<Rational> parse_rational_list(std::string_view text, const Rational& default_step);

/// Comma-separated finite decimals. Throws ParseError.
std::vector<double> parse_double_list(std::string_view text);

/// Quotes a field when it holds a comma, quote, CR or LF; quotes are doubled.
std::string csv_field(std::string_view text);

/// Records of a CSV document. Quoted fields may hold commas, doubled quotes
/// and line breaks. Throws ParseError on an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace lcorr::cli
