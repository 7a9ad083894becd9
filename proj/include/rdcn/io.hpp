#pragma once

// Plain-text interchange: dense CSV matrices (n rows of n comma separated
// floats, no header, diagonal must read 0).

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdcn/matrix.hpp"

namespace rdcn {

inline DemandMatrix read_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("matrix csv: empty input");
    const int n = static_cast<int>(rows.size());
    DemandMatrix M(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::runtime_error("matrix csv: not square");
        for (int j = 0; j < n; ++j) {
            if (i == j && rows[i][j] != 0.0)
                throw std::runtime_error("matrix csv: nonzero diagonal entry");
            if (rows[i][j] < 0.0)
                throw std::runtime_error("matrix csv: negative entry");
            M.at(i, j) = rows[i][j];
        }
    }
    return M;
}

inline DemandMatrix read_matrix_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return read_matrix_csv(f);
}

inline void write_matrix_csv(std::ostream& out, const DemandMatrix& M) {
    out << std::setprecision(17);
    for (int i = 0; i < M.n(); ++i) {
        for (int j = 0; j < M.n(); ++j) {
            if (j) out << ',';
            out << M.at(i, j);
        }
        out << '\n';
    }
}

inline void write_matrix_csv(const std::string& path, const DemandMatrix& M) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    write_matrix_csv(f, M);
}

}  // namespace rdcn
