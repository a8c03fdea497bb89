#include "mapoi/hdmr_map.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "mapoi/errors.hpp"
#include "mapoi/parallel.hpp"

namespace mapoi {

namespace {
constexpr double kDomainSlack = 1e-12;

double slack(double bound) { return kDomainSlack * std::max(1.0, std::abs(bound)); }
}  // namespace

void MapDomain::validate() const {
    if (lower.size() != nominal.size() || upper.size() != nominal.size())
        throw InputError("map domain vectors have different lengths");
    if (nominal.empty()) throw InputError("map domain is empty");
    for (std::size_t i = 0; i < nominal.size(); ++i)
        if (!(lower[i] < nominal[i] && nominal[i] < upper[i]))
            throw InputError("map domain for variable " + std::to_string(i) + " is degenerate or does not contain "
                             "its nominal value");
}

MapDomain MapDomain::around(std::span<const double> nominal, double fraction,
                            const std::function<double(std::size_t)>& zero_halfwidth) {
    MapDomain d;
    d.nominal.assign(nominal.begin(), nominal.end());
    d.lower.resize(nominal.size());
    d.upper.resize(nominal.size());
    for (std::size_t i = 0; i < nominal.size(); ++i) {
        const double w = nominal[i] == 0.0 ? zero_halfwidth(i) : fraction * std::abs(nominal[i]);
        d.lower[i] = nominal[i] - w;
        d.upper[i] = nominal[i] + w;
    }
    return d;
}

MapDomain hamiltonian_domain(const HamiltonianParams& nominal, double fraction, double zero_halfwidth_h,
                             double zero_halfwidth_mu) {
    const ParamIndex index(nominal.dimension);
    if (nominal.size() != index.size()) throw ConfigError("nominal parameter vector has the wrong length");
    return MapDomain::around(nominal.values, fraction, [&](std::size_t i) {
        return index.entry(i).tag == MatrixTag::Hamiltonian ? zero_halfwidth_h : zero_halfwidth_mu;
    });
}

CutHdmrMap::CutHdmrMap(MapDomain domain, std::vector<double> f0, std::vector<CutTerm> terms, PulseShape pulse,
                       VectorSpline::Kind spline)
    : domain_(std::move(domain)),
      f0_(std::move(f0)),
      terms_(std::move(terms)),
      pulse_(std::move(pulse)),
      spline_kind_(spline) {
    domain_.validate();
    if (terms_.size() != domain_.size()) throw InputError("map needs one term per domain variable");
    pulse_id_ = pulse_.components.empty() ? std::string("synthetic") : mapoi::pulse_id(pulse_);
    const std::size_t m = f0_.size();
    const std::size_t s = samples_per_term();
    if (s < 2) throw InputError("each map term needs at least 2 sample nodes");
    splines_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const CutTerm& t = terms_[i];
        if (t.nodes.size() != s || t.samples.size() != s * m)
            throw InputError("map term " + std::to_string(i) + " has inconsistent sample arrays");
        const double ref = domain_.nominal[i];
        const double tol = 1e-12 * std::max(1.0, std::abs(ref));
        std::vector<double> knots;
        std::vector<double> values;
        bool anchored = false;
        auto push_anchor = [&] {
            knots.push_back(ref);
            values.insert(values.end(), m, 0.0);
            anchored = true;
        };
        for (std::size_t k = 0; k < s; ++k) {
            if (k > 0 && !(t.nodes[k] > t.nodes[k - 1]))
                throw InputError("map term " + std::to_string(i) + " nodes are not strictly increasing");
            if (std::abs(t.nodes[k] - ref) <= tol) {
                // node coincides with the cut point; its term value is zero by construction
                push_anchor();
                continue;
            }
            if (!anchored && t.nodes[k] > ref) push_anchor();
            knots.push_back(t.nodes[k]);
            for (std::size_t o = 0; o < m; ++o) values.push_back(t.samples[k * m + o] - f0_[o]);
        }
        if (!anchored) push_anchor();
        // VectorSpline drops to linear below four knots
        splines_.emplace_back(std::move(knots), values, m, spline_kind_);
    }
}

void CutHdmrMap::evaluate(std::span<const double> h, std::span<double> out) const {
    if (h.size() != domain_.size())
        throw InputError("map expects " + std::to_string(domain_.size()) + " variables, got " +
                         std::to_string(h.size()));
    if (out.size() != f0_.size()) throw InputError("map output buffer has the wrong size");
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] >= domain_.lower[i] - slack(domain_.lower[i]) && h[i] <= domain_.upper[i] + slack(domain_.upper[i])))
            throw DomainError(i, "variable " + std::to_string(i) + " = " + std::to_string(h[i]) +
                                     " outside map domain [" + std::to_string(domain_.lower[i]) + ", " +
                                     std::to_string(domain_.upper[i]) + "]");
    }
    std::copy(f0_.begin(), f0_.end(), out.begin());
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] == domain_.nominal[i]) continue;  // every term vanishes at the cut point
        splines_[i].accumulate(h[i], out);
    }
}

std::vector<double> CutHdmrMap::operator()(std::span<const double> h) const {
    std::vector<double> out(f0_.size());
    evaluate(h, out);
    return out;
}

double CutHdmrMap::term_value(std::size_t variable, double x, std::size_t output) const {
    return splines_.at(variable).value(x, output);
}

CutHdmrMap build_map(const Solver& solver, const MapDomain& domain, int samples, const BuildOptions& options) {
    if (samples < 2) throw InputError("map needs S >= 2 sample points per term, got " + std::to_string(samples));
    domain.validate();
    const std::size_t nh = domain.size();
    const auto s = static_cast<std::size_t>(samples);

    std::vector<double> f0;
    try {
        f0 = solver(domain.nominal);
    } catch (const std::exception& e) {
        throw BuildError(nh, 0, std::string("solver failed at the reference point: ") + e.what());
    }
    const std::size_t m = f0.size();

    std::vector<CutTerm> terms(nh);
    for (std::size_t i = 0; i < nh; ++i) {
        terms[i].nodes.resize(s);
        for (std::size_t k = 0; k < s; ++k)
            terms[i].nodes[k] = domain.lower[i] + (domain.upper[i] - domain.lower[i]) * static_cast<double>(k) /
                                                      static_cast<double>(s - 1);
        terms[i].nodes[s - 1] = domain.upper[i];
        terms[i].samples.assign(s * m, 0.0);
    }

    parallel_for(nh * s, options.workers, [&](std::size_t job) {
        const std::size_t i = job / s;
        const std::size_t k = job % s;
        std::vector<double> h = domain.nominal;
        h[i] = terms[i].nodes[k];
        std::vector<double> f;
        try {
            f = solver(h);
        } catch (const std::exception& e) {
            throw BuildError(i, k, "solver failed at variable " + std::to_string(i) + " node " + std::to_string(k) +
                                       " (h = " + std::to_string(h[i]) + "): " + e.what());
        }
        if (f.size() != m)
            throw BuildError(i, k, "solver returned " + std::to_string(f.size()) + " outputs at variable " +
                                       std::to_string(i) + " node " + std::to_string(k) + ", expected " +
                                       std::to_string(m));
        std::copy(f.begin(), f.end(), terms[i].samples.begin() + static_cast<std::ptrdiff_t>(k * m));
    });

    return CutHdmrMap(domain, std::move(f0), std::move(terms), options.pulse, options.spline);
}

MapDiagnostics validate_map(const CutHdmrMap& map, const Solver& solver, std::size_t n_test, std::uint64_t seed,
                            double rms_threshold, unsigned workers) {
    if (n_test < 1) throw InputError("map validation needs n_test >= 1");
    const MapDomain& d = map.domain();
    const std::size_t m = map.outputs();

    std::vector<std::vector<double>> points(n_test, std::vector<double>(d.size()));
    Rng rng(derive_seed(seed, "validate_map"));
    for (auto& p : points)
        for (std::size_t i = 0; i < d.size(); ++i) p[i] = rng.uniform(d.lower[i], d.upper[i]);

    std::vector<std::vector<double>> direct(n_test);
    parallel_for(n_test, workers, [&](std::size_t k) { direct[k] = solver(points[k]); });

    MapDiagnostics diag;
    diag.n_test = n_test;
    diag.build_solves = map.build_solves();
    diag.rms_err.assign(m, 0.0);
    diag.max_err.assign(m, 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < n_test; ++k) {
        const std::vector<double> approx = map(points[k]);
        for (std::size_t o = 0; o < m; ++o) {
            const double e = std::abs(approx[o] - direct[k][o]);
            diag.rms_err[o] += e * e;
            diag.max_err[o] = std::max(diag.max_err[o], e);
            total += e * e;
        }
    }
    for (double& r : diag.rms_err) r = std::sqrt(r / static_cast<double>(n_test));
    diag.rms_overall = std::sqrt(total / static_cast<double>(n_test * m));
    diag.max_overall = diag.max_err.empty() ? 0.0 : *std::max_element(diag.max_err.begin(), diag.max_err.end());
    diag.flagged = diag.rms_overall > rms_threshold;
    return diag;
}

SpeedReport measure_speed(const CutHdmrMap& map, const Solver& solver, std::size_t evaluations, std::size_t solves,
                          std::uint64_t seed) {
    if (evaluations < 1 || solves < 1) throw InputError("speed measurement needs at least one evaluation and one solve");
    using Clock = std::chrono::steady_clock;
    const MapDomain& d = map.domain();
    Rng rng(derive_seed(seed, "measure_speed"));
    const std::size_t distinct = std::min<std::size_t>(evaluations, 1024);
    std::vector<std::vector<double>> points(std::max(distinct, solves), std::vector<double>(d.size()));
    for (auto& p : points)
        for (std::size_t i = 0; i < d.size(); ++i) p[i] = rng.uniform(d.lower[i], d.upper[i]);

    std::vector<double> out(map.outputs());
    double sink = 0.0;
    auto t0 = Clock::now();
    for (std::size_t k = 0; k < evaluations; ++k) {
        map.evaluate(points[k % distinct], out);
        sink += out[k % out.size()];
    }
    const double eval_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

    t0 = Clock::now();
    for (std::size_t k = 0; k < solves; ++k) sink += solver(points[k]).front();
    const double solve_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!std::isfinite(sink)) log_warning("non-finite output during speed measurement");

    SpeedReport r;
    r.evaluations = evaluations;
    r.solves = solves;
    r.seconds_per_eval = eval_seconds / static_cast<double>(evaluations);
    r.seconds_per_solve = solve_seconds / static_cast<double>(solves);
    r.ratio = r.seconds_per_eval > 0.0 ? r.seconds_per_solve / r.seconds_per_eval : 0.0;
    return r;
}

}  // namespace mapoi
