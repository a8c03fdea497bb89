// Acceptance suite: one PASS/FAIL line per criterion, exit code 1 if any fails.
// Usage: mapoi_acceptance [criterion numbers...]   (default: all)

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapoi/hdmr_map.hpp"
#include "mapoi/inversion.hpp"
#include "mapoi/lab_data.hpp"
#include "mapoi/oi_loop.hpp"
#include "mapoi/parallel.hpp"
#include "mapoi/propagator.hpp"
#include "mapoi/rng.hpp"
#include "mapoi/serialize.hpp"
#include "mapoi/system_file.hpp"
#include "oracles.hpp"

using namespace mapoi;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [FAILED]");
    }
};

std::string num(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

HamiltonianParams bundled_system() { return load_system(fs::path(MAPOI_CONFIG_DIR) / "vibrational8.system"); }

PulseShape pulse_at(const HamiltonianParams& h, double amplitude) {
    PulseShape p = default_pulse(h);
    std::vector<double> knobs(p.knob_count(), 0.0);
    for (std::size_t i = 0; i < p.components.size(); ++i) knobs[i] = amplitude;
    return p.with_knobs(knobs);
}

PropagationSettings settings_for(const PulseShape& p) {
    PropagationSettings s;
    s.dt_max = PropagationSettings::dt_bound(p.max_frequency());
    return s;
}

// 1. Propagator correctness
Outcome propagator_correctness() {
    Outcome o;
    const auto t0 = Clock::now();

    const double gap = 2000.0;
    const double amp = std::numbers::pi;
    HamiltonianParams two = HamiltonianParams::zeros(2);
    two.values = {0.0, 0.0, gap, 1.0};
    PropagationSettings s;
    s.dt_max = PropagationSettings::dt_bound(gap) / 4.0;
    std::vector<double> times;
    for (int q = 1; q <= 50; ++q) times.push_back(q / 50.0);
    const Eigen::MatrixXd pop =
        propagate(two, [&](double t) { return amp * std::cos(gap * t); }, QuantumState::basis(2, 0), times, s);
    double rabi = 0.0;
    for (std::size_t q = 0; q < times.size(); ++q)
        rabi = std::max(rabi, std::abs(pop(q, 1) - oracle::rabi_excited(1.0, amp, times[q])));
    o.require(rabi < 1e-3, "Rabi max error " + num("%.2e", rabi) + " < 1e-3");

    const HamiltonianParams h = bundled_system();
    const PulseShape strongest = pulse_at(h, 1.0);
    const Propagator prop(h, settings_for(strongest));
    double drift = 0.0;
    prop.evolve([&](double t) { return field_value(strongest, t); }, QuantumState::basis(8, 0).amplitudes, 0.0, 1.0,
                [&](double, const Eigen::VectorXcd& psi) { drift = std::max(drift, std::abs(psi.norm() - 1.0)); });
    o.require(drift < 1e-10, "norm drift at maximum field " + num("%.2e", drift) + " < 1e-10");

    const double secs = since(t0);
    o.require(secs < 1.0, "runtime " + num("%.3f", secs) + " s < 1 s");
    return o;
}

// 2. Map exactness
std::vector<double> sum_of_sines(std::span<const double> h) {
    double s = 0.0;
    for (double x : h) s += std::sin(x);
    return {s};
}

Outcome map_exactness() {
    Outcome o;
    const auto t0 = Clock::now();

    // the 64-variable bundled map: cut nodes and reference against fresh solves
    const HamiltonianParams h = bundled_system();
    const PulseShape pulse = pulse_at(h, 0.3);
    const MeasurementPlan plan{4, 8, 1.0};
    const ForwardModel model(pulse, plan, settings_for(pulse));
    const MapDomain domain = hamiltonian_domain(h, 0.30, 1.0, 0.05);
    BuildOptions opts;
    opts.workers = default_workers();
    const CutHdmrMap map = build_map(model, domain, 4, opts);

    double node_err = 0.0;
    std::vector<double> got(map.outputs());
    for (std::size_t i = 0; i < map.variables(); ++i)
        for (double x : map.terms()[i].nodes) {
            std::vector<double> p = domain.nominal;
            p[i] = x;
            map.evaluate(p, got);
            const std::vector<double> want = model(p);
            for (std::size_t m = 0; m < got.size(); ++m) node_err = std::max(node_err, std::abs(got[m] - want[m]));
        }
    o.require(node_err < 1e-10, "cut-node error " + num("%.2e", node_err) + " < 1e-10 over 256 nodes");

    map.evaluate(domain.nominal, got);
    const std::vector<double> f0 = model(domain.nominal);
    o.require(got == f0 && got == map.f0(), "reference evaluation equals f0 bit for bit");

    // sum of sin(h_i), S = 12, 64 variables over +-30%, 100 random points
    std::vector<double> nominal(64);
    for (std::size_t i = 0; i < nominal.size(); ++i) nominal[i] = 0.5 + 0.5 * static_cast<double>(i) / 64.0;
    const MapDomain box = MapDomain::around(nominal, 0.30, [](std::size_t) { return 1.0; });
    BuildOptions nak;
    nak.spline = VectorSpline::Kind::NotAKnot;
    const CutHdmrMap additive = build_map(sum_of_sines, box, 12, nak);
    Rng rng(17);
    double add_err = 0.0;
    std::vector<double> x(64);
    for (int k = 0; k < 100; ++k) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(box.lower[i], box.upper[i]);
        const auto a = additive(x);
        const auto b = sum_of_sines(x);
        for (std::size_t m = 0; m < a.size(); ++m) add_err = std::max(add_err, std::abs(a[m] - b[m]));
    }
    o.require(add_err < 1e-6, "additive max error " + num("%.2e", add_err) + " < 1e-6 (S=12, not-a-knot)");

    const double secs = since(t0);
    o.require(secs < 30.0, "runtime " + num("%.1f", secs) + " s < 30 s");
    return o;
}

// 3. Map speedup
Outcome map_speedup() {
    Outcome o;
    const auto t0 = Clock::now();
    const HamiltonianParams h = bundled_system();
    const PulseShape pulse = pulse_at(h, 0.3);
    const ForwardModel model(pulse, MeasurementPlan{4, 8, 1.0}, settings_for(pulse));
    const MapDomain domain = hamiltonian_domain(h, 0.30, 1.0, 0.05);
    BuildOptions opts;
    opts.workers = default_workers();
    const CutHdmrMap map = build_map(model, domain, 4, opts);
    const SpeedReport r = measure_speed(map, model, 10000, 20, 5);
    o.require(r.evaluations >= 10000, std::to_string(r.evaluations) + " map evaluations");
    o.require(r.ratio >= 50.0, "eval " + num("%.3g", r.seconds_per_eval * 1e6) + " us vs solve " +
                                   num("%.3g", r.seconds_per_solve * 1e3) + " ms: ratio " + num("%.0f", r.ratio) +
                                   "x >= 50x");
    const double secs = since(t0);
    o.require(secs < 120.0, "runtime " + num("%.1f", secs) + " s < 120 s");
    return o;
}

// 4. Brute-force family oracle on a 2-variable reduced inversion
Outcome family_oracle() {
    Outcome o;
    const auto t0 = Clock::now();
    const HamiltonianParams h = bundled_system();
    const PulseShape pulse = pulse_at(h, 0.3);
    const MeasurementPlan plan{4, 8, 1.0};
    const PropagationSettings ps = settings_for(pulse);
    const ForwardModel model(pulse, plan, ps);
    const MapDomain full = hamiltonian_domain(h, 0.30, 1.0, 0.05);
    BuildOptions opts;
    opts.workers = default_workers();
    const CutHdmrMap map = build_map(model, full, 4, opts);
    const LabDataset data = simulate_lab_data(h, pulse, plan, FieldNoiseModel{}, 0.02, 11, ps);

    // H_12 and mu_13, everything else frozen at truth
    const std::size_t ia = 1;
    const std::size_t ib = 37;
    MapDomain reduced;
    reduced.nominal = {h.values[ia], h.values[ib]};
    reduced.lower = {full.lower[ia], full.lower[ib]};
    reduced.upper = {full.upper[ia], full.upper[ib]};
    const Predictor predictor = [&](std::span<const double> x, std::span<double> out) {
        thread_local std::vector<double> p;
        p = h.values;
        p[ia] = x[0];
        p[ib] = x[1];
        map.evaluate(p, out);
    };

    // exhaustive 400 x 400 scan using only the dead-zone test
    const int n = 400;
    double cell[2];
    double lo[2] = {1e300, 1e300};
    double hi[2] = {-1e300, -1e300};
    std::size_t hits = 0;
    for (int k = 0; k < 2; ++k) cell[k] = (reduced.upper[k] - reduced.lower[k]) / (n - 1);
    std::vector<double> pred(data.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double x[2] = {reduced.lower[0] + cell[0] * a, reduced.lower[1] + cell[1] * b};
            predictor(x, pred);
            if (!std::ranges::all_of(is_consistent(data, pred), [](bool v) { return v; })) continue;
            ++hits;
            for (int k = 0; k < 2; ++k) {
                lo[k] = std::min(lo[k], x[k]);
                hi[k] = std::max(hi[k], x[k]);
            }
        }
    o.require(hits > 0, std::to_string(hits) + " consistent grid points");
    if (hits == 0) return o;

    for (std::uint64_t seed : {1u, 2u, 3u}) {
        InversionConfig cfg;
        cfg.family_size = 50000;
        cfg.ga.max_generations = 5000;
        cfg.ga.seed = seed;
        const InversionFamily fam = extract_family(data, predictor, reduced, cfg);
        const auto b = family_bounds(fam, &reduced);
        double worst = 0.0;
        for (int k = 0; k < 2; ++k)
            worst = std::max({worst, std::abs(b[k].lo - lo[k]) / cell[k], std::abs(b[k].hi - hi[k]) / cell[k]});
        o.require(fam.converged && worst <= 1.0, "seed " + std::to_string(seed) + ": " +
                                                     std::to_string(fam.members.size()) + " members, worst edge " +
                                                     num("%.2f", worst) + " cells <= 1");
    }
    const double secs = since(t0);
    o.require(secs < 300.0, "runtime " + num("%.1f", secs) + " s < 300 s");
    return o;
}

// 5. Cost-function hand checks
Outcome hand_checks() {
    Outcome o;
    const std::vector<double> h{1.0};
    auto constant = [](std::vector<double> v) -> Predictor {
        return [v](std::span<const double>, std::span<double> out) { std::copy(v.begin(), v.end(), out.begin()); };
    };
    LabDataset one;
    one.values = {0.5};
    one.err_rel = {0.02};
    const double j1 = inversion_cost(h, one, constant({0.6}), 0.0, h);
    o.require(std::abs(j1 - 0.04) < 1e-15, "J_inv single " + num("%.17g", j1) + " = 0.04");
    LabDataset two;
    two.values = {0.5, 0.5};
    two.err_rel = {0.02, 0.02};
    const double j2 = inversion_cost(h, two, constant({0.505, 0.6}), 0.0, h);
    o.require(std::abs(j2 - 0.02) < 1e-15, "J_inv pair " + num("%.17g", j2) + " = 0.02");

    InversionFamily fam;
    fam.members = {{1.0}, {1.0}};
    fam.residuals = {0.0, 0.0};
    std::vector<VariableBounds> bounds(2);
    bounds[0].rel_width = 0.02;
    bounds[1].rel_width = 0.04;
    const double dh = family_uncertainty(fam, bounds, 0.01);
    o.require(std::abs(dh - 3e-4) < 1e-18, "Delta H* " + num("%.17g", dh) + " = 3e-4");

    const PulseShape p = default_pulse(bundled_system());
    const std::vector<Bounds> kb = p.knob_bounds();
    std::vector<double> lo;
    std::vector<double> hi;
    for (const Bounds& b : kb) {
        lo.push_back(b.lo);
        hi.push_back(b.hi);
    }
    const double beta = 0.01;
    o.require(beta * field_cost(lo, kb) == 0.0, "field term at minima = 0");
    const double top = beta * field_cost(hi, kb);
    o.require(top == beta * static_cast<double>(kb.size()),
              "field term at maxima " + num("%.17g", top) + " = beta * N_c = " + num("%g", beta * kb.size()));
    return o;
}

// 6 and 7 share the desk-scale runs.
struct DeskRuns {
    std::map<std::pair<int, std::uint64_t>, OIResult> oi;
    std::map<std::uint64_t, OIResult> conventional;
    double oi_seconds = 0.0;
};

OIConfig desk_config(const HamiltonianParams& h, int q) {
    OIConfig c;
    c.pulse = default_pulse(h);
    c.propagation = settings_for(c.pulse);
    c.samples = q;
    c.workers = default_workers();
    return c;
}

const std::vector<std::uint64_t> kSeeds{1, 2, 3};

void run_desk(DeskRuns& runs, bool need_q12, bool need_conventional) {
    const HamiltonianParams h = bundled_system();
    const OIProblem problem{h, h};
    const auto t0 = Clock::now();
    std::vector<int> qs{4};
    if (need_q12) qs = {1, 2, 4};
    for (int q : qs)
        for (std::uint64_t seed : kSeeds) {
            if (runs.oi.count({q, seed})) continue;
            const OIResult r = run_oi(problem, desk_config(h, q), seed);
            std::printf("  oi Q=%d seed=%llu: rel-uncertainty H %.4f%% mu %.4f%% all %.4f%%, family %zu%s (%.0f s)\n",
                        q, static_cast<unsigned long long>(seed), 100 * r.summary.hamiltonian,
                        100 * r.summary.dipole, 100 * r.summary.overall, r.family.members.size(),
                        r.family.converged ? "" : " UNCONVERGED", r.accounting.seconds_total);
            std::fflush(stdout);
            runs.oi.emplace(std::pair{q, seed}, r);
        }
    runs.oi_seconds += since(t0);
    if (!need_conventional) return;
    for (std::uint64_t seed : kSeeds) {
        OIConfig c = desk_config(h, 25);
        const OIResult r = run_conventional(problem, c, seed);
        std::printf("  conventional Q=25 seed=%llu: rel-uncertainty H %.4f%% mu %.4f%% all %.4f%%, family %zu%s\n",
                    static_cast<unsigned long long>(seed), 100 * r.summary.hamiltonian, 100 * r.summary.dipole,
                    100 * r.summary.overall, r.family.members.size(), r.family.converged ? "" : " UNCONVERGED");
        std::fflush(stdout);
        runs.conventional.emplace(seed, r);
    }
}

// An unconverged family has no consistent member, so its zero width carries no information.
bool usable(const OIResult& r) { return r.family.converged; }

Outcome information_trend(const DeskRuns& runs) {
    Outcome o;
    int ordered = 0;
    double q4_sum = 0.0;
    bool q4_usable = true;
    for (std::uint64_t seed : kSeeds) {
        const OIResult& a = runs.oi.at({1, seed});
        const OIResult& b = runs.oi.at({2, seed});
        const OIResult& c = runs.oi.at({4, seed});
        const bool ok = usable(a) && usable(b) && usable(c) && c.summary.overall < b.summary.overall &&
                        b.summary.overall < a.summary.overall;
        if (ok) ++ordered;
        q4_usable = q4_usable && usable(c);
        q4_sum += c.summary.overall;
        o.detail += (o.detail.empty() ? "" : ", ") + std::string("seed ") + std::to_string(seed) + " Q1/Q2/Q4 " +
                    num("%.3f%%", 100 * a.summary.overall) + "/" + num("%.3f%%", 100 * b.summary.overall) + "/" +
                    num("%.3f%%", 100 * c.summary.overall) + (ok ? " ordered" : " not ordered or unconverged");
    }
    o.require(ordered >= 2, std::to_string(ordered) + " of 3 seeds with Q4 < Q2 < Q1");
    const double q4 = q4_sum / static_cast<double>(kSeeds.size());
    o.require(q4_usable && q4 < 0.02, "mean Q4 rel-uncertainty " + num("%.3f%%", 100 * q4) +
                                          (q4_usable ? "" : " (unconverged family)") + " < 2%");
    o.require(runs.oi_seconds < 1800.0, "runtime " + num("%.0f", runs.oi_seconds) + " s < 1800 s");
    return o;
}

Outcome oi_vs_conventional(const DeskRuns& runs) {
    Outcome o;
    double oi = 0.0;
    double conv = 0.0;
    bool all_usable = true;
    for (std::uint64_t seed : kSeeds) {
        const OIResult& a = runs.oi.at({4, seed});
        const OIResult& b = runs.conventional.at(seed);
        all_usable = all_usable && usable(a) && usable(b);
        oi += a.summary.overall;
        conv += b.summary.overall;
    }
    oi /= static_cast<double>(kSeeds.size());
    conv /= static_cast<double>(kSeeds.size());
    const double ratio = oi > 0.0 ? conv / oi : 0.0;
    o.require(all_usable, "all families converged");
    o.require(all_usable && ratio >= 5.0, "conventional Q25 " + num("%.3f%%", 100 * conv) + " vs OI Q4 " +
                                              num("%.3f%%", 100 * oi) + ": ratio " + num("%.2f", ratio) + " >= 5");
    return o;
}

// 8. Determinism of every CLI command across worker counts
#ifdef MAPOI_CLI_PATH
int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(MAPOI_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string numerical_content(const fs::path& file) {
    const std::string text = read_text(file);
    if (file.extension() != ".json") return text;
    nlohmann::json j = nlohmann::json::parse(text);
    j.erase("timing");
    return j.dump();
}
#endif

Outcome determinism() {
    Outcome o;
#ifndef MAPOI_CLI_PATH
    o.require(false, "mapoi CLI not built (MAPOI_BUILD_TOOLS=OFF)");
#else
    const fs::path root = fs::temp_directory_path() / "mapoi_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path conf = root / "run.conf";
    std::ofstream(conf) << "[run]\nseed = 21\n\n[system]\nfile = "
                        << (fs::path(MAPOI_CONFIG_DIR) / "vibrational8.system").string()
                        << "\n\n[measurement]\nsamples = 2\n\n[noise]\nreplicates = 8\n\n"
                           "[map]\nsamples = 3\nvalidation_points = 4\n\n"
                           "[inversion]\nfamily_size = 20\npop_size = 20\nmax_generations = 5\n\n"
                           "[oi]\npop_size = 4\nmax_generations = 1\nbatch_size = 2\n\n"
                           "[conventional]\nsamples = 5\n\n[validate]\npoints = 8\nspeed_evaluations = 500\n";
    const unsigned many = std::max(3u, default_workers());
    for (const char* command : {"oi", "conventional", "map-validate"}) {
        const std::vector<std::pair<std::string, unsigned>> variants{{"a", 1}, {"b", many}, {"c", 1}};
        bool ran = true;
        for (const auto& [tag, workers] : variants) {
            const fs::path out = root / command / tag;
            const std::string args = std::string(command) + " --config " + conf.string() + " --workers " +
                                     std::to_string(workers) + " --out " + out.string();
            ran = ran && run_cli(args, root / (std::string(command) + "_" + tag + ".log")) == 0;
        }
        if (!ran) {
            o.require(false, std::string(command) + " ran");
            continue;
        }
        std::size_t files = 0;
        bool same = true;
        for (const auto& entry : fs::directory_iterator(root / command / "a")) {
            ++files;
            const std::string ref = numerical_content(entry.path());
            for (const char* tag : {"b", "c"}) {
                const fs::path other = root / command / tag / entry.path().filename();
                same = same && fs::exists(other) && numerical_content(other) == ref;
            }
        }
        o.require(same && files > 0, std::string(command) + ": " + std::to_string(files) +
                                         " files identical for workers 1, " + std::to_string(many) + ", 1");
    }
    fs::remove_all(root);
#endif
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
    if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7, 8};

    const std::map<int, std::string> names{{1, "propagator correctness"},
                                           {2, "map exactness"},
                                           {3, "map speedup"},
                                           {4, "brute-force family oracle"},
                                           {5, "cost-function hand checks"},
                                           {6, "OI information trend"},
                                           {7, "OI vs conventional"},
                                           {8, "determinism across workers"}};
    DeskRuns desk;
    std::map<int, Outcome> results;
    for (int c : wanted) {
        if (!names.count(c)) continue;
        std::printf("criterion %d: %s ...\n", c, names.at(c).c_str());
        std::fflush(stdout);
        Outcome o;
        try {
            switch (c) {
                case 1: o = propagator_correctness(); break;
                case 2: o = map_exactness(); break;
                case 3: o = map_speedup(); break;
                case 4: o = family_oracle(); break;
                case 5: o = hand_checks(); break;
                case 6:
                    run_desk(desk, true, false);
                    o = information_trend(desk);
                    break;
                case 7:
                    run_desk(desk, false, true);
                    o = oi_vs_conventional(desk);
                    break;
                case 8: o = determinism(); break;
            }
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        results[c] = o;
    }

    std::printf("\n");
    bool all = true;
    for (const auto& [c, o] : results) {
        std::printf("criterion %d (%s): %s -- %s\n", c, names.at(c).c_str(), o.pass ? "PASS" : "FAIL",
                    o.detail.c_str());
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
