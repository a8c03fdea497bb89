#include "mapoi/lab_data.hpp"

#include <cmath>
#include <string>

#include "mapoi/errors.hpp"
#include "mapoi/parallel.hpp"

namespace mapoi {

std::vector<double> MeasurementPlan::times() const {
    std::vector<double> t(static_cast<std::size_t>(samples));
    for (int q = 1; q <= samples; ++q)
        t[static_cast<std::size_t>(q - 1)] = q == samples ? duration : duration * q / samples;
    return t;
}

void MeasurementPlan::validate() const {
    if (samples < 1) throw ConfigError("number of time samples Q must be >= 1");
    if (levels < 2) throw ConfigError("measurement plan needs at least 2 levels");
    if (!(duration > 0.0)) throw ConfigError("measurement duration must be positive");
}

double absolute_error(double measured, double err_rel) {
    return err_rel * std::max(std::abs(measured), kPopulationFloor);
}

ForwardModel::ForwardModel(PulseShape pulse, MeasurementPlan plan, PropagationSettings settings, int initial_level)
    : pulse_(std::move(pulse)), plan_(plan), settings_(settings), initial_level_(initial_level) {
    plan_.validate();
    const double w = pulse_.max_frequency();
    if (w > 0.0 && settings_.dt_max > PropagationSettings::dt_bound(w) * (1.0 + 1e-12))
        throw ConfigError("dt_max " + std::to_string(settings_.dt_max) + " exceeds 2*pi/(20*omega_max) = " +
                          std::to_string(PropagationSettings::dt_bound(w)));
    settings_.duration = plan_.duration;
    times_ = plan_.times();
}

std::vector<double> ForwardModel::observe(const HamiltonianParams& params, const PulseShape& pulse) const {
    if (params.dimension != plan_.levels) throw InputError("parameter dimension does not match measurement plan");
    const Propagator prop(params, settings_);
    const Eigen::MatrixXd pops = prop.populations([&pulse](double t) { return field_value(pulse, t); },
                                                  QuantumState::basis(params.dimension, initial_level_), times_);
    std::vector<double> out(plan_.measurement_count());
    for (int q = 0; q < plan_.samples; ++q)
        for (int p = 0; p < plan_.levels; ++p) out[static_cast<std::size_t>(q * plan_.levels + p)] = pops(q, p);
    return out;
}

std::vector<double> ForwardModel::operator()(std::span<const double> h) const {
    HamiltonianParams params{plan_.levels, std::vector<double>(h.begin(), h.end())};
    return observe(params, pulse_);
}

LabDataset simulate_lab_data(const HamiltonianParams& truth, const PulseShape& pulse, const MeasurementPlan& plan,
                             const FieldNoiseModel& noise, double eps_obs, std::uint64_t seed,
                             const PropagationSettings& settings, int initial_level, unsigned workers) {
    noise.validate();
    if (!(eps_obs >= 0.0)) throw InputError("eps_obs must be >= 0");
    const ForwardModel model(pulse, plan, settings, initial_level);
    const std::size_t m = plan.measurement_count();
    const auto d = static_cast<std::size_t>(noise.replicates);

    std::vector<std::vector<double>> replicate(d);
    parallel_for(d, workers, [&](std::size_t j) {
        Rng rng(derive_seed(seed, "replicate", j));
        const PulseShape noisy = realize_noisy(pulse, noise, rng);
        std::vector<double> obs = model.observe(truth, noisy);
        for (double& v : obs) v *= 1.0 + rng.uniform(-eps_obs, eps_obs);
        replicate[j] = std::move(obs);
    });

    LabDataset out;
    out.values.assign(m, 0.0);
    for (const auto& r : replicate)  // fixed summation order
        for (std::size_t k = 0; k < m; ++k) out.values[k] += r[k];
    for (double& v : out.values) v /= static_cast<double>(d);
    out.err_rel.assign(m, eps_obs);
    out.plan = plan;
    out.pulse = pulse;
    out.pulse_id = pulse_id(pulse);
    out.seed = seed;
    return out;
}

std::vector<bool> is_consistent(const LabDataset& dataset, std::span<const double> predicted) {
    if (predicted.size() != dataset.size())
        throw InputError("prediction has " + std::to_string(predicted.size()) + " values, dataset has " +
                         std::to_string(dataset.size()));
    std::vector<bool> out(predicted.size());
    for (std::size_t k = 0; k < predicted.size(); ++k)
        out[k] = std::abs(dataset.values[k] - predicted[k]) <= absolute_error(dataset.values[k], dataset.err_rel[k]);
    return out;
}

}  // namespace mapoi
