#include "isingms/sample_matrix.hpp"

#include <fstream>
#include <sstream>

namespace isingms {

namespace {

// Parses one CSV cell as a spin; row/col are 1-based for error reporting.
std::int8_t parse_cell(const std::string& cell, Encoding enc, std::int64_t row, int col) {
    std::size_t a = 0, b = cell.size();
    while (a < b && (cell[a] == ' ' || cell[a] == '\t')) ++a;
    while (b > a && (cell[b - 1] == ' ' || cell[b - 1] == '\t' || cell[b - 1] == '\r')) --b;
    const std::string t = cell.substr(a, b - a);
    if (enc == Encoding::pm1) {
        if (t == "1" || t == "+1") return 1;
        if (t == "-1") return -1;
        throw ParseError(row, col,
                         "expected -1 or 1 at row " + std::to_string(row) + " col " +
                             std::to_string(col) + ", got '" + t + "'");
    }
    if (t == "1") return 1;
    if (t == "0") return -1;
    throw ParseError(row, col, "expected 0 or 1 at row " + std::to_string(row) + " col " +
                                   std::to_string(col) + ", got '" + t + "'");
}

}  // namespace

SampleMatrix ingest_csv(std::istream& in, Encoding enc) {
    SampleMatrix m;
    std::string line;
    std::int64_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") {
            --row;
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        std::vector<std::int8_t> parsed;
        while (std::getline(ss, cell, ',')) {
            ++col;
            parsed.push_back(parse_cell(cell, enc, row, col));
        }
        if (m.n_nodes == 0) {
            if (col < 2) throw ParseError(row, col, "need at least two columns");
            m.n_nodes = col;
        } else if (col != m.n_nodes) {
            throw ParseError(row, col,
                             "ragged row " + std::to_string(row) + ": expected " +
                                 std::to_string(m.n_nodes) + " columns, got " +
                                 std::to_string(col));
        }
        m.values.insert(m.values.end(), parsed.begin(), parsed.end());
        ++m.n_samples;
    }
    if (m.n_samples == 0) throw ParseError(0, 0, "empty input");
    return m;
}

SampleMatrix ingest_csv_file(const std::string& path, Encoding enc) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, 0, "cannot open '" + path + "'");
    return ingest_csv(in, enc);
}

void write_csv(const SampleMatrix& m, std::ostream& out) {
    for (std::int64_t r = 0; r < m.n_samples; ++r) {
        for (int c = 0; c < m.n_nodes; ++c) {
            if (c) out << ',';
            out << static_cast<int>(m.spin(r, c));
        }
        out << '\n';
    }
}

void write_csv_file(const SampleMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_csv(m, out);
}

}  // namespace isingms
