#include "muleak/table_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace muleak {

std::vector<TableRow> load_table_rows(const std::string& path, std::size_t expected_cols) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open table file: " + path);

    std::vector<TableRow> rows;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);

        std::istringstream iss(line);
        TableRow row{line_number, {}};
        std::string token;
        while (iss >> token) row.tokens.push_back(token);
        if (row.tokens.empty()) continue;
        if (row.tokens.size() != expected_cols) {
            throw std::runtime_error(path + ":" + std::to_string(line_number) +
                                     ": expected " + std::to_string(expected_cols) +
                                     " columns, got " + std::to_string(row.tokens.size()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double parse_double_token(const std::string& token, const std::string& context) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error(context + ": not a number: '" + token + "'");
    }
    if (pos != token.size() || !std::isfinite(value))
        throw std::runtime_error(context + ": not a finite number: '" + token + "'");
    return value;
}

}  // namespace muleak
