#include "mapoi/oi_loop.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "mapoi/errors.hpp"
#include "mapoi/rng.hpp"

namespace mapoi {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

double Ramp::at(std::size_t generation, std::size_t total) const {
    if (total == 0) return end;
    const double f = std::min(1.0, static_cast<double>(generation) / static_cast<double>(total));
    return start + (end - start) * f;
}

GAParams OIConfig::default_outer() {
    GAParams ga;
    ga.pop_size = 12;
    ga.crossover_rate = 0.75;
    ga.mutation_rate = 0.05;
    ga.max_generations = 15;
    ga.batch_size = 4;
    return ga;
}

InversionConfig OIConfig::default_inversion() {
    InversionConfig inv;
    inv.family_size = 100;
    inv.ga.max_generations = 100;
    return inv;
}

void OIConfig::apply_budget(Budget budget) {
    const bool paper = budget == Budget::Paper;
    outer.pop_size = paper ? 30 : 12;
    outer.max_generations = paper ? 50 : 15;
    inversion.family_size = paper ? 500 : 100;
    inversion.ga.max_generations = paper ? 300 : 100;
    map.samples = paper ? 6 : 4;
}

void OIConfig::validate() const {
    pulse.validate();
    if (pulse.components.empty()) throw ConfigError("pulse has no carrier components");
    if (samples < 1) throw ConfigError("number of time samples Q must be >= 1");
    field_noise.validate();
    if (!(eps_obs >= 0.0)) throw ConfigError("eps_obs must be >= 0");
    if (map.samples < 2) throw ConfigError("map needs S >= 2 samples per term");
    if (!(map.domain_fraction > 0.0)) throw ConfigError("map domain fraction must be positive");
    if (!(map.zero_halfwidth_h > 0.0) || !(map.zero_halfwidth_mu > 0.0))
        throw ConfigError("zero-entry half-widths must be positive");
    inversion.validate();
    outer.validate();
    for (const Ramp* r : {&alpha, &beta})
        if (!(r->start > 0.0) || !(r->end >= r->start)) throw ConfigError("ramps must be positive and non-decreasing");
}

double field_cost(std::span<const double> knobs, std::span<const Bounds> bounds) {
    if (knobs.size() != bounds.size()) throw InputError("knob vector does not match its bounds");
    double sum = 0.0;
    for (std::size_t i = 0; i < knobs.size(); ++i) {
        const double w = bounds[i].width();
        if (w > 0.0) sum += std::abs((knobs[i] - bounds[i].lo) / w);
    }
    return sum;
}

PulseShape default_pulse(const HamiltonianParams& nominal, double duration, double width) {
    const ResonanceSpectrum res = resonance_frequencies(nominal);
    if (res.degenerate) log_warning("nominal system has degenerate adjacent levels; carriers may coincide");
    return PulseShape::with_carriers(res.frequencies, duration, width);
}

OIContext::OIContext(OIProblem problem, OIConfig config, std::uint64_t seed)
    : problem_(std::move(problem)), config_(std::move(config)), seed_(seed) {
    config_.validate();
    if (problem_.truth.dimension != problem_.nominal.dimension || problem_.truth.size() != problem_.nominal.size())
        throw ConfigError("truth and nominal systems differ in size");
    assemble(problem_.nominal);
    domain_ = hamiltonian_domain(problem_.nominal, config_.map.domain_fraction, config_.map.zero_halfwidth_h,
                                 config_.map.zero_halfwidth_mu);
    domain_.validate();
    plan_ = config_.plan(problem_.nominal.dimension);
    plan_.validate();
}

std::shared_ptr<const CutHdmrMap> OIContext::map_for(const PulseShape& pulse, unsigned workers) {
    const std::vector<double> key = pulse.knobs();
    std::shared_future<std::shared_ptr<const CachedSamples>> future;
    std::promise<std::shared_ptr<const CachedSamples>> promise;
    bool builder = false;
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            future = promise.get_future().share();
            cache_.emplace(key, future);
            builder = true;
        } else {
            future = it->second;
        }
    }
    if (builder) {
        const auto t0 = Clock::now();
        try {
            const ForwardModel model(pulse, plan_, config_.propagation, config_.initial_level);
            BuildOptions options;
            options.workers = workers;
            options.spline = config_.map.spline;
            const CutHdmrMap built = build_map(model, domain_, config_.map.samples, options);
            promise.set_value(std::make_shared<const CachedSamples>(CachedSamples{built.f0(), built.terms()}));
            std::lock_guard lock(mutex_);
            ++accounting_.map_builds;
            accounting_.map_solves += built.build_solves();
            accounting_.seconds_map_build += seconds_since(t0);
        } catch (...) {
            promise.set_exception(std::current_exception());
        }
    }
    const std::shared_ptr<const CachedSamples> samples = future.get();
    return std::make_shared<const CutHdmrMap>(domain_, samples->f0, samples->terms, pulse, config_.map.spline);
}

TrialOutcome OIContext::evaluate_trial(std::span<const double> knobs, std::uint64_t trial_id, double alpha,
                                       unsigned inner_workers) {
    TrialOutcome out;
    out.pulse = config_.pulse.with_knobs(knobs);

    auto t0 = Clock::now();
    out.dataset = simulate_lab_data(problem_.truth, out.pulse, plan_, config_.field_noise, config_.eps_obs,
                                    derive_seed(seed_, "lab", trial_id), config_.propagation, config_.initial_level,
                                    inner_workers);
    const double lab_seconds = seconds_since(t0);

    const std::shared_ptr<const CutHdmrMap> map = map_for(out.pulse, inner_workers);

    t0 = Clock::now();
    InversionConfig inv = config_.inversion;
    inv.alpha = alpha;
    inv.ga.seed = derive_seed(seed_, "inversion", trial_id);
    inv.ga.workers = 1;
    out.family = extract_family(out.dataset, map_predictor(*map), domain_, inv);
    out.bounds = family_bounds(out.family, &domain_);
    out.uncertainty = family_uncertainty(out.family, out.bounds, alpha);
    const std::vector<Bounds> kb = config_.pulse.knob_bounds();
    out.field_term = field_cost(knobs, kb);

    std::lock_guard lock(mutex_);
    ++accounting_.trial_fields;
    accounting_.lab_propagations += static_cast<std::uint64_t>(config_.field_noise.replicates);
    accounting_.map_evaluations += out.family.evaluations;
    accounting_.seconds_lab += lab_seconds;
    accounting_.seconds_inversion += seconds_since(t0);
    return out;
}

double OIContext::control_cost(std::span<const double> knobs, std::uint64_t trial_id, double alpha, double beta,
                               unsigned inner_workers) {
    try {
        const TrialOutcome t = evaluate_trial(knobs, trial_id, alpha, inner_workers);
        return t.uncertainty + beta * t.field_term;
    } catch (const BuildError& e) {
        log_warning("trial " + std::to_string(trial_id) + ": map build failed: " + e.what());
        return std::numeric_limits<double>::infinity();
    }
}

Accounting OIContext::accounting() const {
    std::lock_guard lock(mutex_);
    return accounting_;
}

namespace {

OIResult finish(OIContext& ctx, std::span<const double> knobs, std::uint64_t trial_id, bool conventional) {
    const OIConfig& cfg = ctx.config();
    const int n = ctx.problem().nominal.dimension;
    const unsigned workers = cfg.workers == 0 ? 1 : cfg.workers;

    TrialOutcome best = ctx.evaluate_trial(knobs, trial_id, cfg.alpha.end, workers);

    OIResult r;
    r.conventional = conventional;
    r.seed = ctx.seed();
    r.samples = cfg.samples;
    r.knobs.assign(knobs.begin(), knobs.end());
    r.pulse = best.pulse;
    r.dataset = std::move(best.dataset);
    r.family = std::move(best.family);
    r.bounds = std::move(best.bounds);
    r.summary = summarize(r.bounds, n);
    r.grids = uncertainty_grids(r.bounds, n);
    r.alpha = cfg.alpha.end;
    r.beta = cfg.beta.end;
    r.uncertainty = best.uncertainty;
    r.control_cost = best.uncertainty + r.beta * best.field_term;
    r.best_trial = trial_id;

    if (cfg.map.validation_points > 0) {
        const auto map = ctx.map_for(r.pulse, workers);
        const ForwardModel model(r.pulse, ctx.plan(), cfg.propagation, cfg.initial_level);
        r.map_diagnostics = validate_map(*map, model, cfg.map.validation_points,
                                         derive_seed(ctx.seed(), "validation", trial_id), cfg.map.rms_threshold,
                                         workers);
    }
    r.accounting = ctx.accounting();
    if (r.map_diagnostics) r.accounting.validation_solves = r.map_diagnostics->n_test;
    return r;
}

}  // namespace

OIResult run_oi(const OIProblem& problem, const OIConfig& config, std::uint64_t seed) {
    const auto t0 = Clock::now();
    OIContext ctx(problem, config, seed);
    const std::vector<Bounds> bounds = config.pulse.knob_bounds();

    GAParams outer = config.outer;
    outer.seed = derive_seed(seed, "outer");
    outer.workers = config.workers == 0 ? 1 : config.workers;
    const std::size_t total = outer.max_generations;

    const FitnessFn fitness = [&](std::span<const double> knobs, const EvalContext& ec) {
        return ctx.control_cost(knobs, ec.eval_id, config.alpha.at(ec.generation, total),
                                config.beta.at(ec.generation, total), 1);
    };
    const GAResult ga = run_ga(fitness, bounds, outer);

    OIResult r = finish(ctx, ga.best.genome, ga.best.eval_id, false);
    r.trace = ga.trace;
    r.accounting.seconds_total = seconds_since(t0);
    return r;
}

OIResult run_conventional(const OIProblem& problem, const OIConfig& config, std::uint64_t seed) {
    const auto t0 = Clock::now();
    OIContext ctx(problem, config, seed);
    const std::vector<Bounds> bounds = config.pulse.knob_bounds();
    Rng rng(derive_seed(seed, "conventional"));
    std::vector<double> knobs(bounds.size());
    for (std::size_t i = 0; i < knobs.size(); ++i) knobs[i] = rng.uniform(bounds[i].lo, bounds[i].hi);

    OIResult r = finish(ctx, knobs, 0, true);
    r.accounting.seconds_total = seconds_since(t0);
    return r;
}

}  // namespace mapoi
