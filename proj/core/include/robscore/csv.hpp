#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace robscore::csv {

using Row = std::vector<std::string>;

/// Parses RFC-4180 text: comma separated, optional double-quoted fields with
/// "" escapes, CRLF or LF line endings. A trailing newline does not produce
/// an empty record. Throws IngestError on an unterminated quote.
std::vector<Row> parse(std::string_view text);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

std::string join(const Row& row);

/// Shortest decimal form that round-trips to the same double.
std::string format_shortest(double v);

/// Decimal form with 17 significant digits.
std::string format_exact(double v);

}  // namespace robscore::csv
