#include "mapoi/level_system.hpp"

#include <string>

#include "mapoi/errors.hpp"

namespace mapoi {

ParamIndex::ParamIndex(int dimension) : dimension_(dimension) {
    if (dimension < 2) throw ConfigError("level system dimension must be >= 2, got " + std::to_string(dimension));
    entries_.reserve(count_for(dimension));
    for (int p = 0; p < dimension; ++p)
        for (int q = p; q < dimension; ++q) entries_.push_back({MatrixTag::Hamiltonian, p, q});
    for (int p = 0; p < dimension; ++p)
        for (int q = p + 1; q < dimension; ++q) entries_.push_back({MatrixTag::Dipole, p, q});
}

std::size_t ParamIndex::count_for(int dimension) {
    const auto n = static_cast<std::size_t>(dimension);
    return n * (n + 1) / 2 + n * (n - 1) / 2;
}

std::size_t ParamIndex::hamiltonian_count() const {
    const auto n = static_cast<std::size_t>(dimension_);
    return n * (n + 1) / 2;
}

std::size_t ParamIndex::index_of(MatrixTag tag, int row, int col) const {
    if (row > col) std::swap(row, col);
    if (row < 0 || col >= dimension_) throw ConfigError("matrix position out of range");
    const auto n = static_cast<std::size_t>(dimension_);
    const auto r = static_cast<std::size_t>(row);
    const auto c = static_cast<std::size_t>(col);
    if (tag == MatrixTag::Hamiltonian) {
        // rows before r contribute n, n-1, ..., n-r+1 entries
        return r * n - r * (r - 1) / 2 + (c - r);
    }
    if (r == c) throw ConfigError("dipole matrix has no diagonal parameters");
    return hamiltonian_count() + r * (n - 1) - r * (r - 1) / 2 + (c - r - 1);
}

HamiltonianParams HamiltonianParams::zeros(int dimension) {
    return {dimension, std::vector<double>(ParamIndex::count_for(dimension), 0.0)};
}

SystemMatrices assemble(const HamiltonianParams& params) {
    const std::size_t expected = ParamIndex::count_for(params.dimension);
    if (params.values.size() != expected)
        throw ConfigError("parameter vector has length " + std::to_string(params.values.size()) + ", expected " +
                          std::to_string(expected) + " for a " + std::to_string(params.dimension) + "-level system");
    const int n = params.dimension;
    SystemMatrices m{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    std::size_t k = 0;
    for (int p = 0; p < n; ++p)
        for (int q = p; q < n; ++q, ++k) m.hamiltonian(p, q) = m.hamiltonian(q, p) = params.values[k];
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q, ++k) m.dipole(p, q) = m.dipole(q, p) = params.values[k];
    return m;
}

HamiltonianParams flatten(const SystemMatrices& matrices) {
    const auto n = static_cast<int>(matrices.hamiltonian.rows());
    if (matrices.hamiltonian.cols() != n || matrices.dipole.rows() != n || matrices.dipole.cols() != n)
        throw ConfigError("hamiltonian and dipole must be square matrices of equal size");
    HamiltonianParams out = HamiltonianParams::zeros(n);
    std::size_t k = 0;
    for (int p = 0; p < n; ++p)
        for (int q = p; q < n; ++q) out.values[k++] = matrices.hamiltonian(p, q);
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) out.values[k++] = matrices.dipole(p, q);
    return out;
}

}  // namespace mapoi
