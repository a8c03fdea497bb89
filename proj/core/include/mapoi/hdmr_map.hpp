#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mapoi/level_system.hpp"
#include "mapoi/pulse.hpp"
#include "mapoi/spline.hpp"

namespace mapoi {

/// Any h -> observables function: the direct propagator or a synthetic test function.
using Solver = std::function<std::vector<double>(std::span<const double>)>;

/// Box in parameter space around a nominal point.
struct MapDomain {
    std::vector<double> lower;
    std::vector<double> nominal;
    std::vector<double> upper;

    std::size_t size() const { return nominal.size(); }
    double half_width(std::size_t i) const { return 0.5 * (upper[i] - lower[i]); }

    /// lower < nominal < upper componentwise; throws InputError naming the variable otherwise.
    void validate() const;

    /// nominal -/+ fraction * |nominal|; entries with zero nominal get the
    /// absolute half-width from `zero_halfwidth(i)`.
    static MapDomain around(std::span<const double> nominal, double fraction,
                            const std::function<double(std::size_t)>& zero_halfwidth);
};

/// Domain for a Hamiltonian parameter vector with separate absolute
/// half-widths for zero-valued H and dipole entries.
MapDomain hamiltonian_domain(const HamiltonianParams& nominal, double fraction, double zero_halfwidth_h,
                             double zero_halfwidth_mu);

/// Samples of one first-order term: g_i(x) = f(reference with h_i = x) - f0.
struct CutTerm {
    std::vector<double> nodes;    // S uniform abscissae on [lower_i, upper_i]
    std::vector<double> samples;  // raw solver output f at each node, node-major (S x M)
};

/// First-order cut-HDMR surrogate anchored at the domain nominal point:
///   f(h) ~ f0 + sum_i g_i(h_i)
/// Each g_i interpolates its S node samples plus the anchor g_i(reference_i) = 0
/// with a cubic spline (natural by default).
/// Immutable once built; safe for concurrent evaluation.
class CutHdmrMap {
public:
    CutHdmrMap(MapDomain domain, std::vector<double> f0, std::vector<CutTerm> terms, PulseShape pulse = {},
               VectorSpline::Kind spline = VectorSpline::Kind::NaturalCubic);

    const MapDomain& domain() const { return domain_; }
    const std::vector<double>& reference() const { return domain_.nominal; }
    const std::vector<double>& f0() const { return f0_; }
    const std::vector<CutTerm>& terms() const { return terms_; }
    const PulseShape& pulse() const { return pulse_; }
    const std::string& pulse_id() const { return pulse_id_; }
    VectorSpline::Kind spline_kind() const { return spline_kind_; }
    int order() const { return 1; }
    std::size_t samples_per_term() const { return terms_.empty() ? 0 : terms_.front().nodes.size(); }
    std::size_t variables() const { return terms_.size(); }
    std::size_t outputs() const { return f0_.size(); }
    std::size_t build_solves() const { return 1 + variables() * samples_per_term(); }

    /// Throws DomainError naming the first component outside the domain (1e-12 slack).
    void evaluate(std::span<const double> h, std::span<double> out) const;
    std::vector<double> operator()(std::span<const double> h) const;

    /// g_i evaluated for observable m.
    double term_value(std::size_t variable, double x, std::size_t output) const;

private:
    MapDomain domain_;
    std::vector<double> f0_;
    std::vector<CutTerm> terms_;
    std::vector<VectorSpline> splines_;
    PulseShape pulse_;
    std::string pulse_id_;
    VectorSpline::Kind spline_kind_;
};

struct BuildOptions {
    unsigned workers = 1;
    PulseShape pulse;  // recorded in the map for persistence
    // Natural splines track strongly curved cuts better at small S; not-a-knot
    // is O(h^4) up to the domain ends and wins on smooth separable functions.
    VectorSpline::Kind spline = VectorSpline::Kind::NaturalCubic;
};

/// 1 + N_h * S solver calls: f0 at the reference, then S uniform nodes per
/// variable with the rest held at the reference. Throws BuildError naming the
/// node on any solver failure; InputError on S < 2 or a degenerate domain.
CutHdmrMap build_map(const Solver& solver, const MapDomain& domain, int samples, const BuildOptions& options = {});

struct MapDiagnostics {
    std::vector<double> rms_err;  // per observable
    std::vector<double> max_err;
    double rms_overall = 0.0;
    double max_overall = 0.0;
    std::size_t n_test = 0;
    std::size_t build_solves = 0;
    bool flagged = false;  // rms_overall above the accuracy threshold
};

/// Compares the map against `solver` on n_test uniform points of the domain.
MapDiagnostics validate_map(const CutHdmrMap& map, const Solver& solver, std::size_t n_test, std::uint64_t seed,
                            double rms_threshold = 0.02, unsigned workers = 1);

struct SpeedReport {
    std::size_t evaluations = 0;
    std::size_t solves = 0;
    double seconds_per_eval = 0.0;
    double seconds_per_solve = 0.0;
    double ratio = 0.0;  // seconds_per_solve / seconds_per_eval
};

/// Wall-clock cost of map evaluations against direct solves at the same
/// uniform random domain points (single thread).
SpeedReport measure_speed(const CutHdmrMap& map, const Solver& solver, std::size_t evaluations, std::size_t solves,
                          std::uint64_t seed);

}  // namespace mapoi
