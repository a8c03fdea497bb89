#pragma once

#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "mapoi/ga.hpp"
#include "mapoi/hdmr_map.hpp"
#include "mapoi/inversion.hpp"
#include "mapoi/lab_data.hpp"
#include "mapoi/propagator.hpp"
#include "mapoi/pulse.hpp"

namespace mapoi {

/// Linear ramp in the outer generation index: start at generation 0, end at the last.
struct Ramp {
    double start = 1e-4;
    double end = 1e-2;

    double at(std::size_t generation, std::size_t total) const;
};

struct MapSettings {
    int samples = 4;                 // S
    double domain_fraction = 0.30;   // +-30% around nominal
    double zero_halfwidth_h = 1.0;    // absolute half-width for zero H entries, rad/ps
    double zero_halfwidth_mu = 0.05;  // absolute half-width for zero dipole entries
    double rms_threshold = 0.02;
    std::size_t validation_points = 16;  // for the optimal field's map only
    VectorSpline::Kind spline = VectorSpline::Kind::NaturalCubic;
};

/// Desk: outer pop 12 x 15 generations, N_s 100, S 4, inner 100 generations.
/// Paper: outer pop 30 x 50 generations, N_s 500, S 6, inner 300 generations.
enum class Budget { Desk, Paper };

struct OIConfig {
    PulseShape pulse;  // carriers, T, s, knob bounds; amplitudes/phases are overwritten by knobs
    int samples = 1;   // Q
    PropagationSettings propagation;
    FieldNoiseModel field_noise;
    double eps_obs = 0.02;
    int initial_level = 0;
    MapSettings map;
    InversionConfig inversion = default_inversion();
    GAParams outer = default_outer();
    Ramp alpha;
    Ramp beta;
    unsigned workers = 1;

    static GAParams default_outer();
    static InversionConfig default_inversion();
    /// OIConfig{} is desk scale; this switches the GA, family and map sizes only.
    void apply_budget(Budget budget);
    MeasurementPlan plan(int levels) const { return {samples, levels, pulse.duration}; }
    void validate() const;
};

/// Known prior (domain centre) and the hidden truth used to simulate data.
struct OIProblem {
    HamiltonianParams nominal;
    HamiltonianParams truth;
};

/// Counts are deterministic for a given config and seed; seconds are wall clock.
struct Accounting {
    std::uint64_t trial_fields = 0;
    std::uint64_t map_builds = 0;
    std::uint64_t map_solves = 0;
    std::uint64_t validation_solves = 0;
    std::uint64_t lab_propagations = 0;
    std::uint64_t map_evaluations = 0;
    double seconds_lab = 0.0;
    double seconds_map_build = 0.0;
    double seconds_inversion = 0.0;
    double seconds_total = 0.0;
};

/// Everything computed for one trial field.
struct TrialOutcome {
    PulseShape pulse;
    LabDataset dataset;
    InversionFamily family;
    std::vector<VariableBounds> bounds;
    double uncertainty = 0.0;  // Delta H*
    double field_term = 0.0;   // sum_i |(c_i - c_min) / (c_max - c_min)|
};

/// Normalized knob sum sum_i |(c_i - c_i_min) / (c_i_max - c_i_min)|.
double field_cost(std::span<const double> knobs, std::span<const Bounds> bounds);

/// Shared state of one OI run: the problem, the domain and a cache of map
/// samples keyed by knob vector. Thread safe.
class OIContext {
public:
    OIContext(OIProblem problem, OIConfig config, std::uint64_t seed);

    const OIConfig& config() const { return config_; }
    const OIProblem& problem() const { return problem_; }
    const MapDomain& domain() const { return domain_; }
    const MeasurementPlan& plan() const { return plan_; }
    std::uint64_t seed() const { return seed_; }

    /// Simulate data for the pulse, build (or fetch) its map, extract the
    /// family. Noise and GA streams derive from (seed, trial_id).
    TrialOutcome evaluate_trial(std::span<const double> knobs, std::uint64_t trial_id, double alpha,
                                unsigned inner_workers = 1);

    /// Delta H* + beta * field_cost. Map build failures give +inf with a warning.
    double control_cost(std::span<const double> knobs, std::uint64_t trial_id, double alpha, double beta,
                        unsigned inner_workers = 1);

    std::shared_ptr<const CutHdmrMap> map_for(const PulseShape& pulse, unsigned workers = 1);

    Accounting accounting() const;

private:
    struct CachedSamples {
        std::vector<double> f0;
        std::vector<CutTerm> terms;
    };

    OIProblem problem_;
    OIConfig config_;
    std::uint64_t seed_;
    MapDomain domain_;
    MeasurementPlan plan_;

    mutable std::mutex mutex_;
    std::map<std::vector<double>, std::shared_future<std::shared_ptr<const CachedSamples>>> cache_;
    Accounting accounting_;
};

struct OIResult {
    bool conventional = false;
    std::uint64_t seed = 0;
    int samples = 1;  // Q
    std::vector<double> knobs;
    PulseShape pulse;
    LabDataset dataset;
    InversionFamily family;
    std::vector<VariableBounds> bounds;  // lo/hi/width per variable
    UncertaintySummary summary;
    UncertaintyGrids grids;
    double uncertainty = 0.0;    // Delta H* at the final alpha
    double control_cost = 0.0;   // J_c at the final alpha and beta
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t best_trial = 0;
    std::vector<GenerationStats> trace;
    std::optional<MapDiagnostics> map_diagnostics;
    Accounting accounting;
};

/// Carrier frequencies from the nominal system's resonances, unit envelope defaults.
PulseShape default_pulse(const HamiltonianParams& nominal, double duration = 1.0, double width = 0.2);

/// Outer GA over the knobs minimizing the control cost; the best field's
/// inversion is rerun with the final alpha.
OIResult run_oi(const OIProblem& problem, const OIConfig& config, std::uint64_t seed);

/// One random field, no outer optimization, same inner inversion.
OIResult run_conventional(const OIProblem& problem, const OIConfig& config, std::uint64_t seed);

}  // namespace mapoi
