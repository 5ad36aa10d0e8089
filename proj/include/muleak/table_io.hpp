#pragma once
// Plain-text tabular input shared by the envelope and coin-toss model tables:
// whitespace-separated columns, '#' starts a comment, blank lines ignored.

#include <cstddef>
#include <string>
#include <vector>

namespace muleak {

struct TableRow {
    int line_number;
    std::vector<std::string> tokens;
};

// Reads all data rows of a table file. Throws std::runtime_error naming the
// file, line and problem when the file cannot be read or a row does not have
// exactly expected_cols columns.
std::vector<TableRow> load_table_rows(const std::string& path, std::size_t expected_cols);

// Parses a token as a finite double; throws std::runtime_error with the given
// context (e.g. "table.tsv:3, column 2") on failure.
double parse_double_token(const std::string& token, const std::string& context);

}  // namespace muleak
