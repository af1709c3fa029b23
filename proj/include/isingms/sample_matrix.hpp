#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace isingms {

// N x n matrix of +-1 observations, row-major; rows are time-ordered samples.
struct SampleMatrix {
    std::int64_t n_samples = 0;
    int n_nodes = 0;
    std::vector<std::int8_t> values;  // n_samples * n_nodes entries of +-1

    int spin(std::int64_t row, int col) const {
        return values[static_cast<std::size_t>(row) * static_cast<std::size_t>(n_nodes) +
                      static_cast<std::size_t>(col)];
    }
    void set_spin(std::int64_t row, int col, int s) {
        values[static_cast<std::size_t>(row) * static_cast<std::size_t>(n_nodes) +
               static_cast<std::size_t>(col)] = static_cast<std::int8_t>(s);
    }

    static SampleMatrix zeros(std::int64_t n_samples, int n_nodes) {
        SampleMatrix m;
        m.n_samples = n_samples;
        m.n_nodes = n_nodes;
        m.values.assign(
            static_cast<std::size_t>(n_samples) * static_cast<std::size_t>(n_nodes), 1);
        return m;
    }
};

enum class Encoding { pm1, zero_one };

// Parse error with 1-based row/column location.
struct ParseError : std::runtime_error {
    std::int64_t row;
    int col;
    ParseError(std::int64_t r, int c, const std::string& what)
        : std::runtime_error(what), row(r), col(c) {}
};

// Reads a rectangular CSV of binary integers. zero_one maps 0 -> -1, 1 -> +1
// at ingestion; pm1 requires entries in {-1, +1}.
SampleMatrix ingest_csv(std::istream& in, Encoding enc);
SampleMatrix ingest_csv_file(const std::string& path, Encoding enc);

// Writes the matrix as comma-separated +-1 integers, one sample per line.
void write_csv(const SampleMatrix& m, std::ostream& out);
void write_csv_file(const SampleMatrix& m, const std::string& path);

}  // namespace isingms
