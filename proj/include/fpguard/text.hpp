#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the canonical label renderer and the
// line-oriented file formats.
namespace fpguard::text {

// Shortest decimal representation that round-trips to the same double.
std::string format_number(double value);

// Strict parse: the whole string must be a finite decimal number.
std::optional<double> parse_number(std::string_view text);
std::optional<std::int64_t> parse_integer(std::string_view text);

// Backslash escaping for tab-delimited fields. Escapes '\\', '\t', '\n',
// '\r' and '='.
std::string escape(std::string_view raw);
// Returns nullopt on a dangling or unknown escape.
std::optional<std::string> unescape(std::string_view escaped);

// Splits on an unescaped delimiter; escapes are left in place.
std::vector<std::string_view> split_unescaped(std::string_view line, char delimiter);
// Position of the first unescaped occurrence of `c`, or npos.
std::size_t find_unescaped(std::string_view text, char c);

std::string_view trim(std::string_view text);

}  // namespace fpguard::text
