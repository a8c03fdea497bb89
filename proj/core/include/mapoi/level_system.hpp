#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mapoi {

/// N-level system in scaled units: hbar = 1, time in ps, energies in rad/ps.
struct LevelSystem {
    static constexpr double hbar = 1.0;
    int dimension = 8;
};

enum class MatrixTag { Hamiltonian, Dipole };

/// One entry of the flattened parameter vector. Rows/columns are 0-based.
struct ParamEntry {
    MatrixTag tag;
    int row;
    int col;

    bool operator==(const ParamEntry&) const = default;
};

/// Bijection between flat parameter indices and matrix elements.
///
/// Layout for an N-level system: first the upper triangle of H including the
/// diagonal (N(N+1)/2 entries, row-major), then the strict upper triangle of
/// the dipole matrix (N(N-1)/2 entries, row-major). N = 8 gives 36 + 28 = 64.
class ParamIndex {
public:
    explicit ParamIndex(int dimension);

    static std::size_t count_for(int dimension);

    int dimension() const { return dimension_; }
    std::size_t size() const { return entries_.size(); }
    std::size_t hamiltonian_count() const;
    const ParamEntry& entry(std::size_t i) const { return entries_.at(i); }

    /// Flat index of (tag, row, col); (row, col) may be given in either order.
    /// Throws ConfigError for dipole diagonals or out-of-range positions.
    std::size_t index_of(MatrixTag tag, int row, int col) const;

private:
    int dimension_;
    std::vector<ParamEntry> entries_;
};

/// The real parameter vector h that distinguishes one trial Hamiltonian from another.
struct HamiltonianParams {
    int dimension = 8;
    std::vector<double> values;

    static HamiltonianParams zeros(int dimension);
    std::size_t size() const { return values.size(); }
};

/// Internal Hamiltonian H and dipole mu, both real symmetric.
struct SystemMatrices {
    Eigen::MatrixXd hamiltonian;
    Eigen::MatrixXd dipole;
};

/// Throws ConfigError if the vector length does not match N_h for the dimension.
SystemMatrices assemble(const HamiltonianParams& params);

/// Inverse of assemble; reads the upper triangles only.
HamiltonianParams flatten(const SystemMatrices& matrices);

}  // namespace mapoi
