#include "mapoi/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mapoi/errors.hpp"

namespace mapoi {

Predictor map_predictor(const CutHdmrMap& map) {
    return [&map](std::span<const double> h, std::span<double> out) { map.evaluate(h, out); };
}

Predictor solver_predictor(Solver solver) {
    return [solver = std::move(solver)](std::span<const double> h, std::span<double> out) {
        const std::vector<double> v = solver(h);
        if (v.size() != out.size()) throw InputError("solver returned the wrong number of observables");
        std::copy(v.begin(), v.end(), out.begin());
    };
}

GAParams InversionConfig::default_ga() {
    GAParams ga;
    ga.pop_size = 100;
    ga.crossover_rate = 0.70;
    ga.mutation_rate = 0.05;
    ga.max_generations = 200;
    ga.immigrant_fraction = 0.25;
    return ga;
}

void InversionConfig::validate() const {
    if (family_size < 1) throw ConfigError("family size N_s must be >= 1");
    if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (!(dedup_dist >= 0.0)) throw ConfigError("dedup distance must be >= 0");
    if (!(lambda_reg >= 0.0)) throw ConfigError("regularization weight must be >= 0");
    ga.validate();
}

InversionProblem::InversionProblem(const LabDataset& dataset, Predictor predictor, const MapDomain& domain,
                                   double lambda_reg)
    : dataset_(dataset), predictor_(std::move(predictor)), domain_(domain), lambda_(lambda_reg) {
    if (dataset.size() == 0) throw InputError("dataset is empty");
    if (dataset.err_rel.size() != dataset.size()) throw InputError("dataset error bars do not match its values");
    bars_.resize(dataset.size());
    denom_.resize(dataset.size());
    for (std::size_t m = 0; m < dataset.size(); ++m) {
        bars_[m] = absolute_error(dataset.values[m], dataset.err_rel[m]);
        denom_[m] = dataset.values[m] != 0.0 ? std::abs(dataset.values[m]) : kPopulationFloor;
    }
    scale_.resize(domain.size());
    for (std::size_t i = 0; i < domain.size(); ++i)
        scale_[i] = domain.nominal[i] != 0.0 ? std::abs(domain.nominal[i]) : domain.half_width(i);
}

CostTerms InversionProblem::terms(std::span<const double> h) const {
    thread_local std::vector<double> predicted;
    predicted.resize(dataset_.size());
    predictor_(h, predicted);
    calls_.fetch_add(1, std::memory_order_relaxed);
    CostTerms c;
    for (std::size_t m = 0; m < predicted.size(); ++m) {
        const double diff = dataset_.values[m] - predicted[m];
        if (std::abs(diff) <= bars_[m]) continue;
        const double r = diff / denom_[m];
        c.misfit += r * r;
    }
    c.misfit /= static_cast<double>(predicted.size());
    if (lambda_ > 0.0) {
        for (std::size_t i = 0; i < h.size(); ++i) {
            const double d = (h[i] - domain_.nominal[i]) / scale_[i];
            c.penalty += d * d;
        }
        c.penalty *= lambda_;
    }
    return c;
}

double inversion_cost(std::span<const double> h, const LabDataset& dataset, const Predictor& predictor,
                      double lambda_reg, std::span<const double> nominal) {
    MapDomain d;
    d.nominal.assign(nominal.begin(), nominal.end());
    d.lower = d.nominal;
    d.upper = d.nominal;
    for (std::size_t i = 0; i < d.size(); ++i) {
        // only the penalty scale is needed; zero nominal entries fall back to unit scale
        if (d.nominal[i] == 0.0) {
            d.lower[i] = -1.0;
            d.upper[i] = 1.0;
        }
    }
    return InversionProblem(dataset, predictor, d, lambda_reg).cost(h);
}

namespace {

class FamilyArchive {
public:
    FamilyArchive(const MapDomain& domain, double dedup, std::size_t capacity)
        : domain_(domain), dedup_(dedup), capacity_(capacity) {}

    // Evaluations already in flight when the GA is told to stop still arrive here.
    bool offer(const std::vector<double>& h, double residual) {
        if (members_.size() >= capacity_) return false;
        for (const auto& m : members_) {
            double dist = 0.0;
            for (std::size_t i = 0; i < h.size(); ++i)
                dist = std::max(dist, std::abs(h[i] - m[i]) / (domain_.upper[i] - domain_.lower[i]));
            if (dist < dedup_) return false;
        }
        members_.push_back(h);
        residuals_.push_back(residual);
        return true;
    }

    std::size_t size() const { return members_.size(); }
    std::vector<std::vector<double>>& members() { return members_; }
    std::vector<double>& residuals() { return residuals_; }

private:
    const MapDomain& domain_;
    double dedup_;
    std::size_t capacity_;
    std::vector<std::vector<double>> members_;
    std::vector<double> residuals_;
};

}  // namespace

InversionFamily extract_family(const LabDataset& dataset, const Predictor& predictor, const MapDomain& domain,
                               const InversionConfig& config) {
    config.validate();
    domain.validate();
    const InversionProblem problem(dataset, predictor, domain, config.lambda_reg);

    std::vector<Bounds> bounds(domain.size());
    for (std::size_t i = 0; i < domain.size(); ++i) bounds[i] = {domain.lower[i], domain.upper[i]};

    FamilyArchive archive(domain, config.dedup_dist, config.family_size);
    const FitnessFn fitness = [&](std::span<const double> h, const EvalContext&) { return problem.cost(h); };
    const EvaluationObserver observer = [&](const Individual& ind, std::size_t, bool) {
        const bool zero_misfit = config.lambda_reg == 0.0 ? ind.fitness == 0.0 : problem.terms(ind.genome).misfit == 0.0;
        if (zero_misfit) archive.offer(ind.genome, ind.fitness);
        return archive.size() >= config.family_size;
    };
    const GAResult ga = run_ga(fitness, bounds, config.ga, observer);

    InversionFamily family;
    family.evaluations = ga.evaluations;
    family.generations = ga.generations;
    if (archive.size() > 0) {
        family.members = std::move(archive.members());
        family.residuals = std::move(archive.residuals());
        family.converged = true;
    } else {
        family.members = {ga.best.genome};
        family.residuals = {ga.best.fitness};
        family.converged = false;
    }
    return family;
}

std::vector<VariableBounds> family_bounds(const InversionFamily& family, const MapDomain* domain) {
    if (family.members.empty()) throw InputError("family is empty");
    const std::size_t n = family.members.front().size();
    std::vector<VariableBounds> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double lo = family.members.front()[i];
        double hi = lo;
        for (const auto& m : family.members) {
            lo = std::min(lo, m[i]);
            hi = std::max(hi, m[i]);
        }
        VariableBounds& b = out[i];
        b.lo = lo;
        b.hi = hi;
        b.width = hi - lo;
        const double mid = 0.5 * std::abs(lo + hi);
        if (domain) {
            const double half = domain->half_width(i);
            b.fallback = mid <= half;
            b.rel_width = b.fallback ? b.width / half : std::abs(2.0 * b.width / (lo + hi));
        } else {
            b.fallback = lo + hi == 0.0;
            b.rel_width = b.fallback ? b.width : std::abs(2.0 * b.width / (lo + hi));
        }
    }
    return out;
}

double family_uncertainty(const InversionFamily& family, std::span<const VariableBounds> bounds, double alpha) {
    if (family.members.empty()) throw InputError("family is empty");
    double fit = 0.0;
    for (double r : family.residuals) fit += r;
    fit /= static_cast<double>(family.residuals.size());
    double rel = 0.0;
    for (const auto& b : bounds) rel += std::abs(b.rel_width);
    rel /= static_cast<double>(bounds.size());
    return fit + alpha * rel;
}

UncertaintySummary summarize(std::span<const VariableBounds> bounds, int dimension) {
    const ParamIndex index(dimension);
    if (bounds.size() != index.size()) throw InputError("bounds do not match the parameter layout");
    UncertaintySummary s;
    std::size_t nh = 0;
    std::size_t nm = 0;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const double r = std::abs(bounds[i].rel_width);
        if (index.entry(i).tag == MatrixTag::Hamiltonian) {
            s.hamiltonian += r;
            ++nh;
        } else {
            s.dipole += r;
            ++nm;
        }
        s.overall += r;
        if (bounds[i].fallback) ++s.fallback_count;
    }
    s.hamiltonian /= static_cast<double>(nh);
    s.dipole /= static_cast<double>(nm);
    s.overall /= static_cast<double>(bounds.size());
    return s;
}

UncertaintyGrids uncertainty_grids(std::span<const VariableBounds> bounds, int dimension) {
    const ParamIndex index(dimension);
    if (bounds.size() != index.size()) throw InputError("bounds do not match the parameter layout");
    UncertaintyGrids g{Eigen::MatrixXd::Zero(dimension, dimension), Eigen::MatrixXd::Zero(dimension, dimension)};
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const ParamEntry& e = index.entry(i);
        Eigen::MatrixXd& grid = e.tag == MatrixTag::Hamiltonian ? g.hamiltonian : g.dipole;
        grid(e.row, e.col) = grid(e.col, e.row) = std::abs(bounds[i].rel_width);
    }
    return g;
}

}  // namespace mapoi
