#include "run_config.hpp"

#include <fstream>
#include <sstream>

#include "mapoi/errors.hpp"
#include "mapoi/keyvalue.hpp"
#include "mapoi/parallel.hpp"
#include "mapoi/system_file.hpp"

namespace mapoi::cli {

namespace {

class Reader {
public:
    explicit Reader(const KeyValueDocument& doc) : doc_(doc) {}

    void real(const std::string& key, double& out, double lo, double hi, const char* what) const {
        if (auto v = doc_.get_double(key)) {
            if (!(*v >= lo && *v <= hi)) doc_.fail(key, std::string("must be ") + what);
            out = *v;
        }
    }

    void positive(const std::string& key, double& out) const {
        if (auto v = doc_.get_double(key)) {
            if (!(*v > 0.0)) doc_.fail(key, "must be positive");
            out = *v;
        }
    }

    template <typename Int>
    void integer(const std::string& key, Int& out, std::int64_t lo) const {
        if (auto v = doc_.get_int(key)) {
            if (*v < lo) doc_.fail(key, "must be >= " + std::to_string(lo));
            out = static_cast<Int>(*v);
        }
    }

    void probability(const std::string& key, double& out) const { real(key, out, 0.0, 1.0, "in [0, 1]"); }

    void ga(const std::string& section, GAParams& ga) const {
        integer(section + ".pop_size", ga.pop_size, 2);
        probability(section + ".crossover_rate", ga.crossover_rate);
        probability(section + ".mutation_rate", ga.mutation_rate);
        integer(section + ".tournament_size", ga.tournament_size, 1);
        integer(section + ".max_generations", ga.max_generations, 0);
    }

private:
    const KeyValueDocument& doc_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    const std::filesystem::path p(value);
    return p.is_absolute() ? p : base / p;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), path, overrides);
}

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& source, const Overrides& overrides) {
    const KeyValueDocument doc = KeyValueDocument::parse(text, source.string());
    const Reader read(doc);
    const std::filesystem::path base = source.has_parent_path() ? source.parent_path() : std::filesystem::path(".");

    RunConfig rc;
    rc.source = source;
    rc.text = text;

    if (auto v = doc.get_u64("run.seed")) rc.seed = *v;
    if (auto v = doc.get_string("run.output")) rc.output = *v;
    read.integer("run.workers", rc.workers, 0);
    if (auto v = doc.get_string("run.budget")) {
        if (*v == "desk") rc.budget = Budget::Desk;
        else if (*v == "paper") rc.budget = Budget::Paper;
        else doc.fail("run.budget", "expected 'desk' or 'paper', got '" + *v + "'");
    }
    if (overrides.seed) rc.seed = *overrides.seed;
    if (overrides.workers) rc.workers = *overrides.workers;
    if (overrides.output) rc.output = *overrides.output;
    if (overrides.paper_scale) rc.budget = Budget::Paper;
    if (rc.workers == 0) rc.workers = default_workers();

    // system
    const auto sys = doc.get_string("system.file");
    if (!sys) throw ConfigError(source.string() + ": missing required key 'system.file'");
    rc.system_file = resolve(base, *sys);
    try {
        rc.nominal = load_system(rc.system_file);
    } catch (const Error& e) {
        doc.fail("system.file", e.what());
    }
    if (auto t = doc.get_string("system.truth")) {
        rc.truth_file = resolve(base, *t);
        try {
            rc.truth = load_system(rc.truth_file);
        } catch (const Error& e) {
            doc.fail("system.truth", e.what());
        }
        if (rc.truth.dimension != rc.nominal.dimension) doc.fail("system.truth", "dimension differs from the nominal");
    } else {
        rc.truth_file = rc.system_file;
        rc.truth = rc.nominal;
    }

    OIConfig& oi = rc.oi;
    oi.apply_budget(rc.budget);

    // pulse
    double duration = 1.0;
    double width = 0.2;
    read.positive("pulse.duration", duration);
    read.positive("pulse.width", width);
    if (auto carriers = doc.get_doubles("pulse.carriers")) {
        if (carriers->empty()) doc.fail("pulse.carriers", "needs at least one frequency");
        for (double w : *carriers)
            if (!(w > 0.0)) doc.fail("pulse.carriers", "frequencies must be positive");
        oi.pulse = PulseShape::with_carriers(*carriers, duration, width);
    } else {
        oi.pulse = default_pulse(rc.nominal, duration, width);
    }
    read.real("pulse.amplitude_min", oi.pulse.amplitude_bounds.lo, 0.0, 1e300, ">= 0");
    read.positive("pulse.amplitude_max", oi.pulse.amplitude_bounds.hi);
    read.real("pulse.phase_min", oi.pulse.phase_bounds.lo, -1e300, 1e300, "finite");
    read.real("pulse.phase_max", oi.pulse.phase_bounds.hi, -1e300, 1e300, "finite");
    if (!(oi.pulse.amplitude_bounds.lo < oi.pulse.amplitude_bounds.hi))
        doc.fail("pulse.amplitude_max", "must exceed pulse.amplitude_min");
    if (!(oi.pulse.phase_bounds.lo < oi.pulse.phase_bounds.hi)) doc.fail("pulse.phase_max", "must exceed pulse.phase_min");
    {
        const auto amps = doc.get_doubles("pulse.amplitudes");
        const auto phases = doc.get_doubles("pulse.phases");
        if (amps || phases) {
            const std::size_t l = oi.pulse.components.size();
            std::vector<double> knobs(2 * l, 0.0);
            if (amps) {
                if (amps->size() != l) doc.fail("pulse.amplitudes", "expected " + std::to_string(l) + " values");
                for (std::size_t i = 0; i < l; ++i) {
                    if (!oi.pulse.amplitude_bounds.contains((*amps)[i]))
                        doc.fail("pulse.amplitudes", "value outside [amplitude_min, amplitude_max]");
                    knobs[i] = (*amps)[i];
                }
            }
            for (std::size_t i = 0; i < l; ++i) knobs[l + i] = oi.pulse.phase_bounds.lo;
            if (phases) {
                if (phases->size() != l) doc.fail("pulse.phases", "expected " + std::to_string(l) + " values");
                for (std::size_t i = 0; i < l; ++i) {
                    if (!oi.pulse.phase_bounds.contains((*phases)[i]))
                        doc.fail("pulse.phases", "value outside [phase_min, phase_max]");
                    knobs[l + i] = (*phases)[i];
                }
            }
            rc.stated_knobs = std::move(knobs);
        }
    }

    // noise and measurement
    read.real("noise.eps_obs", oi.eps_obs, 0.0, 1.0, "in [0, 1]");
    read.real("noise.eps_fld", oi.field_noise.eps_fld, 0.0, 1.0, "in [0, 1]");
    read.integer("noise.replicates", oi.field_noise.replicates, 1);
    read.integer("measurement.samples", oi.samples, 1);
    int level = 1;
    read.integer("measurement.initial_level", level, 1);
    if (level > rc.nominal.dimension) doc.fail("measurement.initial_level", "exceeds the system dimension");
    oi.initial_level = level - 1;
    read.integer("conventional.samples", rc.conventional_samples, 1);

    // propagation
    oi.propagation.duration = duration;
    const double bound = PropagationSettings::dt_bound(oi.pulse.max_frequency());
    oi.propagation.dt_max = bound;
    if (auto v = doc.get_string("propagation.dt_max"); v && *v != "auto") {
        read.positive("propagation.dt_max", oi.propagation.dt_max);
        if (oi.propagation.dt_max > bound * (1.0 + 1e-12))
            doc.fail("propagation.dt_max", "exceeds 2*pi/(20*omega_max) = " + std::to_string(bound));
    }
    if (auto v = doc.get_string("propagation.scheme")) {
        try {
            oi.propagation.scheme = scheme_from_string(*v);
        } catch (const ConfigError& e) {
            doc.fail("propagation.scheme", e.what());
        }
    }

    // map
    read.integer("map.samples", oi.map.samples, 2);
    read.real("map.domain_fraction", oi.map.domain_fraction, 1e-12, 1.0, "in (0, 1]");
    read.positive("map.zero_halfwidth_h", oi.map.zero_halfwidth_h);
    read.positive("map.zero_halfwidth_mu", oi.map.zero_halfwidth_mu);
    read.positive("map.rms_threshold", oi.map.rms_threshold);
    read.integer("map.validation_points", oi.map.validation_points, 0);
    if (auto v = doc.get_string("map.spline")) {
        try {
            oi.map.spline = VectorSpline::kind_from_string(*v);
        } catch (const ConfigError& e) {
            doc.fail("map.spline", e.what());
        }
    }

    // inner inversion
    InversionConfig& inv = oi.inversion;
    read.integer("inversion.family_size", inv.family_size, 1);
    read.ga("inversion", inv.ga);
    read.real("inversion.immigrant_fraction", inv.ga.immigrant_fraction, 0.0, 0.999999, "in [0, 1)");
    read.real("inversion.lambda_reg", inv.lambda_reg, 0.0, 1e300, ">= 0");
    read.real("inversion.dedup_dist", inv.dedup_dist, 0.0, 1e300, ">= 0");

    // outer loop
    read.ga("oi", oi.outer);
    read.integer("oi.batch_size", oi.outer.batch_size, 1);
    read.positive("oi.alpha_start", oi.alpha.start);
    read.positive("oi.alpha_end", oi.alpha.end);
    read.positive("oi.beta_start", oi.beta.start);
    read.positive("oi.beta_end", oi.beta.end);
    if (oi.alpha.end < oi.alpha.start) doc.fail("oi.alpha_end", "must be >= alpha_start");
    if (oi.beta.end < oi.beta.start) doc.fail("oi.beta_end", "must be >= beta_start");

    read.integer("validate.points", rc.validate_points, 1);
    read.integer("validate.speed_evaluations", rc.speed_evaluations, 1);

    doc.reject_unused();
    oi.workers = rc.workers;
    oi.validate();
    return rc;
}

}  // namespace mapoi::cli
