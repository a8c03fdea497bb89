#pragma once

#include <filesystem>
#include <string>

#include "mapoi/keyvalue.hpp"
#include "mapoi/level_system.hpp"

namespace mapoi {

/// Parameters of the bundled vibrational-ladder system.
struct LadderSpec {
    int dimension = 8;
    double omega0 = 150.0;            // harmonic spacing, rad/ps
    double anharmonicity = 2.0;       // chi, rad/ps
    double coupling = 4.0;            // nearest off-diagonal H element, rad/ps
    double coupling_decay = 0.5;      // H_pq = coupling * decay^(|p-q|-1)
    double dipole = 6.0;              // mu_{p,p+1} = dipole * sqrt(p)
    double overtone_ratio = 0.15;     // mu_{p,p+2} = overtone_ratio * dipole * sqrt(p)
};

/// Anharmonic ladder E_p = omega0 (p-1) - chi (p-1) p (p 1-based) with small
/// off-diagonal couplings and a sqrt(p) dipole; dipoles beyond |p-q| = 2 are zero.
HamiltonianParams ladder_system(const LadderSpec& spec = {});

/// System definition file. Schema:
///
///   [system]
///   dimension = 8
///   units = rad/ps          # only accepted value
///   h = v1 v2 ... v64       # optional: full flat vector, or use the blocks below
///
///   [hamiltonian]           # "p q = value", 1-based, upper or lower triangle
///   1 1 = 0.0
///   1 2 = 4.0
///
///   [dipole]                # off-diagonal only
///   1 2 = 6.0
///
/// Elements not listed are zero. `h` and the matrix blocks are mutually exclusive.
HamiltonianParams parse_system(const KeyValueDocument& doc);
HamiltonianParams load_system(const std::filesystem::path& path);

/// Writes the block form, one line per flat entry; parse_system reads it back exactly.
std::string format_system(const HamiltonianParams& params, const std::string& comment = {});

}  // namespace mapoi
