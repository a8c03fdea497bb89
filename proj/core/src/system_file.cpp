#include "mapoi/system_file.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "mapoi/errors.hpp"

namespace mapoi {

HamiltonianParams ladder_system(const LadderSpec& spec) {
    const int n = spec.dimension;
    SystemMatrices m{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    for (int p = 1; p <= n; ++p) {
        const double v = p - 1;
        m.hamiltonian(p - 1, p - 1) = spec.omega0 * v - spec.anharmonicity * v * p;
        for (int q = p + 1; q <= n; ++q) {
            const double c = spec.coupling * std::pow(spec.coupling_decay, q - p - 1);
            m.hamiltonian(p - 1, q - 1) = m.hamiltonian(q - 1, p - 1) = c;
        }
        if (p + 1 <= n) m.dipole(p - 1, p) = m.dipole(p, p - 1) = spec.dipole * std::sqrt(double(p));
        if (p + 2 <= n)
            m.dipole(p - 1, p + 1) = m.dipole(p + 1, p - 1) = spec.overtone_ratio * spec.dipole * std::sqrt(double(p));
    }
    return flatten(m);
}

namespace {

std::pair<int, int> parse_position(const KeyValueDocument& doc, const std::string& section, const std::string& key) {
    std::istringstream in(key);
    int p = 0;
    int q = 0;
    std::string rest;
    if (!(in >> p >> q) || (in >> rest)) doc.fail(section + "." + key, "expected 'p q' matrix position");
    return {p, q};
}

}  // namespace

HamiltonianParams parse_system(const KeyValueDocument& doc) {
    const auto dim = doc.get_int("system.dimension");
    if (!dim) throw ConfigError(doc.source() + ": missing [system] dimension");
    if (*dim < 2 || *dim > 64) doc.fail("system.dimension", "must be in [2, 64]");
    const int n = static_cast<int>(*dim);
    if (auto units = doc.get_string("system.units"); units && *units != "rad/ps")
        doc.fail("system.units", "only 'rad/ps' is supported");

    HamiltonianParams params = HamiltonianParams::zeros(n);
    const ParamIndex index(n);
    const bool has_blocks = !doc.keys_in("hamiltonian").empty() || !doc.keys_in("dipole").empty();
    if (auto flat = doc.get_doubles("system.h")) {
        if (has_blocks) doc.fail("system.h", "cannot combine a flat h vector with matrix blocks");
        if (flat->size() != params.size())
            doc.fail("system.h", "has " + std::to_string(flat->size()) + " values, expected " +
                                     std::to_string(params.size()));
        params.values = *flat;
    }
    for (const auto& [section, tag] :
         {std::pair{std::string("hamiltonian"), MatrixTag::Hamiltonian}, {std::string("dipole"), MatrixTag::Dipole}}) {
        for (const auto& key : doc.keys_in(section)) {
            const auto [p, q] = parse_position(doc, section, key);
            const std::string full = section + "." + key;
            if (p < 1 || q < 1 || p > n || q > n) doc.fail(full, "position out of range");
            if (tag == MatrixTag::Dipole && p == q) doc.fail(full, "dipole diagonal must be zero");
            params.values[index.index_of(tag, p - 1, q - 1)] = *doc.get_double(full);
        }
    }
    doc.reject_unused();
    return params;
}

HamiltonianParams load_system(const std::filesystem::path& path) {
    return parse_system(KeyValueDocument::load(path));
}

std::string format_system(const HamiltonianParams& params, const std::string& comment) {
    const ParamIndex index(params.dimension);
    std::ostringstream out;
    if (!comment.empty()) {
        std::istringstream lines(comment);
        for (std::string line; std::getline(lines, line);) out << "# " << line << "\n";
    }
    out << "[system]\ndimension = " << params.dimension << "\nunits = rad/ps\n";
    out << std::setprecision(17);
    MatrixTag current = MatrixTag::Dipole;
    bool first = true;
    for (std::size_t i = 0; i < index.size(); ++i) {
        const ParamEntry& e = index.entry(i);
        if (first || e.tag != current) {
            out << "\n[" << (e.tag == MatrixTag::Hamiltonian ? "hamiltonian" : "dipole") << "]\n";
            current = e.tag;
            first = false;
        }
        out << e.row + 1 << ' ' << e.col + 1 << " = " << params.values[i] << '\n';
    }
    return out.str();
}

}  // namespace mapoi
