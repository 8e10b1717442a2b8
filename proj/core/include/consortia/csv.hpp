#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace consortia::csv {

// Quotes a cell when it contains a comma, quote or line break.
std::string cell(std::string_view text);

// Splits one RFC 4180 row (no embedded line breaks). Throws
// Error(MalformedLine) on unbalanced quotes.
std::vector<std::string> split_row(std::string_view line);

// Shortest decimal form that reads back as the same double.
std::string number(double value);

// Splits on `sep`; an empty input yields no items.
std::vector<std::string> split_list(std::string_view text, char sep);

}  // namespace consortia::csv
