#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "mapoi/errors.hpp"
#include "mapoi/lab_data.hpp"
#include "mapoi/serialize.hpp"

namespace mapoi::cli {

namespace {

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string percent(double v) { return fmt("%.4f%%", 100.0 * v); }

std::vector<SpectrumPoint> spectrum_of(const PulseShape& pulse) {
    const double top = 2.0 * std::max(pulse.max_frequency(), 1.0);
    return power_spectrum(pulse, linear_grid(0.0, top, 801));
}

void write_result(const RunConfig& rc, const OIResult& r, std::ostream& log) {
    const std::filesystem::path& out = rc.output;
    std::filesystem::create_directories(out);
    const int m = r.samples * rc.nominal.dimension;
    write_text(out / "manifest.json", manifest_to_json(r, rc.text, m, rc.truth_file.string()));
    write_text(out / "h_uncertainty.csv", grid_to_csv(r.grids.hamiltonian));
    write_text(out / "mu_uncertainty.csv", grid_to_csv(r.grids.dipole));
    write_text(out / "spectrum.csv", spectrum_to_csv(spectrum_of(r.pulse)));
    write_text(out / "family.json", family_to_json(r.family, r.bounds, "dataset.json"));
    write_text(out / "trace.csv", trace_to_csv(r.trace));
    write_text(out / "dataset.json", dataset_to_json(r.dataset));

    const Accounting& a = r.accounting;
    log << (r.conventional ? "conventional" : "oi") << " seed=" << r.seed << " Q=" << r.samples << " M=" << m << '\n';
    log << "  family: " << r.family.members.size() << " members"
        << (r.family.converged ? "" : " (unconverged: no zero-misfit member found)") << '\n';
    log << "  average rel-uncertainty: H " << percent(r.summary.hamiltonian) << ", mu " << percent(r.summary.dipole)
        << ", all " << percent(r.summary.overall) << '\n';
    log << "  control cost " << fmt("%.6g", r.control_cost) << " (Delta H* " << fmt("%.6g", r.uncertainty) << ")\n";
    log << "  trial fields " << a.trial_fields << ", map builds " << a.map_builds << ", direct solves "
        << a.map_solves + a.validation_solves << ", lab propagations " << a.lab_propagations << ", map evaluations "
        << a.map_evaluations << '\n';
    if (r.map_diagnostics)
        log << "  optimal-field map: rms " << fmt("%.4g", r.map_diagnostics->rms_overall) << ", max "
            << fmt("%.4g", r.map_diagnostics->max_overall) << (r.map_diagnostics->flagged ? " (above threshold)" : "")
            << '\n';
    log << "  wall clock " << fmt("%.1f", a.seconds_total) << " s\n";
    log << "  wrote " << out.string() << '\n';
}

OIProblem problem_of(const RunConfig& rc) { return {rc.nominal, rc.truth}; }

}  // namespace

void cmd_oi(const RunConfig& rc, std::ostream& log) {
    const OIResult r = run_oi(problem_of(rc), rc.oi, rc.seed);
    write_result(rc, r, log);
}

void cmd_conventional(const RunConfig& rc, std::ostream& log) {
    OIConfig cfg = rc.oi;
    cfg.samples = rc.conventional_samples;
    const OIResult r = run_conventional(problem_of(rc), cfg, rc.seed);
    write_result(rc, r, log);
}

void cmd_map_validate(const RunConfig& rc, std::ostream& log) {
    const OIConfig& cfg = rc.oi;
    std::vector<double> knobs;
    if (rc.stated_knobs) {
        knobs = *rc.stated_knobs;
    } else {
        // no stated pulse: mid-range amplitudes, phases at their lower bound
        const std::size_t l = cfg.pulse.components.size();
        knobs.assign(2 * l, cfg.pulse.phase_bounds.lo);
        for (std::size_t i = 0; i < l; ++i)
            knobs[i] = 0.5 * (cfg.pulse.amplitude_bounds.lo + cfg.pulse.amplitude_bounds.hi);
    }
    const PulseShape pulse = cfg.pulse.with_knobs(knobs);
    const MapDomain domain = hamiltonian_domain(rc.nominal, cfg.map.domain_fraction, cfg.map.zero_halfwidth_h,
                                                cfg.map.zero_halfwidth_mu);
    const ForwardModel model(pulse, cfg.plan(rc.nominal.dimension), cfg.propagation, cfg.initial_level);

    BuildOptions options;
    options.workers = rc.workers;
    options.pulse = pulse;
    options.spline = cfg.map.spline;
    const CutHdmrMap map = build_map(model, domain, cfg.map.samples, options);
    const MapDiagnostics diag =
        validate_map(map, model, rc.validate_points, rc.seed, cfg.map.rms_threshold, rc.workers);
    const std::size_t solves = std::max<std::size_t>(3, std::min<std::size_t>(20, rc.speed_evaluations / 500));
    const SpeedReport speed = measure_speed(map, model, rc.speed_evaluations, solves, rc.seed);

    std::filesystem::create_directories(rc.output);
    write_text(rc.output / "map.json", map_to_json(map, &diag));
    nlohmann::json report = {
        {"pulse_id", map.pulse_id()},
        {"N_h", map.variables()},
        {"S", map.samples_per_term()},
        {"spline", VectorSpline::name(map.spline_kind())},
        {"M", map.outputs()},
        {"build_solves", map.build_solves()},
        {"n_test", diag.n_test},
        {"rms_overall", diag.rms_overall},
        {"max_overall", diag.max_overall},
        {"flagged", diag.flagged},
        {"rms_err", diag.rms_err},
        {"max_err", diag.max_err},
        {"timing",
         {{"evaluations", speed.evaluations},
          {"solves", speed.solves},
          {"seconds_per_eval", speed.seconds_per_eval},
          {"seconds_per_solve", speed.seconds_per_solve},
          {"speed_ratio", speed.ratio}}},
    };
    write_text(rc.output / "map_report.json", report.dump(2) + "\n");

    log << "map-validate seed=" << rc.seed << " pulse " << map.pulse_id() << '\n';
    log << "  N_h " << map.variables() << ", S " << map.samples_per_term() << ", M " << map.outputs()
        << ", build_solves " << map.build_solves() << '\n';
    log << "  " << diag.n_test << " test points: rms " << fmt("%.4g", diag.rms_overall) << ", max "
        << fmt("%.4g", diag.max_overall) << (diag.flagged ? "  FLAGGED: above rms threshold " : "  threshold ")
        << fmt("%g", cfg.map.rms_threshold) << '\n';
    log << "  eval " << fmt("%.3g", speed.seconds_per_eval * 1e6) << " us, solve "
        << fmt("%.3g", speed.seconds_per_solve * 1e3) << " ms, speed ratio " << fmt("%.0f", speed.ratio) << "x\n";
    log << "  wrote " << rc.output.string() << '\n';
}

}  // namespace mapoi::cli
