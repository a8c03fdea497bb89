#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mapoi/level_system.hpp"
#include "mapoi/propagator.hpp"
#include "mapoi/pulse.hpp"

namespace mapoi {

/// Q equally spaced observation times t_q = q T / Q, q = 1..Q, with every
/// level population recorded at each time: M = N Q measurements, stored
/// time-major (m = q N + p).
struct MeasurementPlan {
    int samples = 1;         // Q
    int levels = 8;          // N
    double duration = 1.0;   // T

    std::vector<double> times() const;
    std::size_t measurement_count() const { return static_cast<std::size_t>(samples) * levels; }
    void validate() const;
};

/// Populations below this are compared against err_rel * kPopulationFloor.
inline constexpr double kPopulationFloor = 1e-6;

/// Absolute half-width of the error bar for a measured value.
double absolute_error(double measured, double err_rel);

struct LabDataset {
    std::vector<double> values;   // Phi_lab
    std::vector<double> err_rel;  // relative error bars
    MeasurementPlan plan;
    PulseShape pulse;  // nominal pulse E_k
    std::string pulse_id;
    std::uint64_t seed = 0;

    std::size_t size() const { return values.size(); }
};

/// Noiseless forward map h -> Phi[h] for one pulse: propagate and flatten the
/// Q x N populations time-major.
class ForwardModel {
public:
    ForwardModel(PulseShape pulse, MeasurementPlan plan, PropagationSettings settings, int initial_level = 0);

    std::vector<double> operator()(std::span<const double> h) const;
    std::vector<double> observe(const HamiltonianParams& params, const PulseShape& pulse) const;

    const PulseShape& pulse() const { return pulse_; }
    const MeasurementPlan& plan() const { return plan_; }
    const PropagationSettings& settings() const { return settings_; }
    int initial_level() const { return initial_level_; }

private:
    PulseShape pulse_;
    MeasurementPlan plan_;
    PropagationSettings settings_;
    int initial_level_;
    std::vector<double> times_;
};

/// Replicate-averaged, noise-contaminated populations. Replicate j draws its
/// noisy pulse and its per-observation factors (1 + rho) from the substream
/// derive_seed(seed, "replicate", j), so the result does not depend on how
/// replicates are scheduled across `workers` threads.
LabDataset simulate_lab_data(const HamiltonianParams& truth, const PulseShape& pulse, const MeasurementPlan& plan,
                             const FieldNoiseModel& noise, double eps_obs, std::uint64_t seed,
                             const PropagationSettings& settings, int initial_level = 0, unsigned workers = 1);

/// Per measurement: |Phi_lab - Phi_pred| <= absolute_error(Phi_lab, err_rel).
std::vector<bool> is_consistent(const LabDataset& dataset, std::span<const double> predicted);

}  // namespace mapoi
