#include "mapoi/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mapoi/errors.hpp"
#include "mapoi/parallel.hpp"
#include "mapoi/rng.hpp"

namespace mapoi {

void GAParams::validate() const {
    if (pop_size < 2) throw ConfigError("GA population size must be >= 2");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw ConfigError("crossover rate must be in [0, 1]");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw ConfigError("mutation rate must be in [0, 1]");
    if (!(immigrant_fraction >= 0.0 && immigrant_fraction < 1.0))
        throw ConfigError("immigrant fraction must be in [0, 1)");
    if (tournament_size < 1) throw ConfigError("tournament size must be >= 1");
    if (batch_size < 1) throw ConfigError("GA batch size must be >= 1");
    if (!(blx_alpha >= 0.0) || !(mutation_window > 0.0)) throw ConfigError("invalid GA operator parameters");
}

bool better(const Individual& a, const Individual& b) {
    if (a.fitness != b.fitness) return a.fitness < b.fitness;
    return a.eval_id < b.eval_id;
}

namespace {

class Engine {
public:
    Engine(const FitnessFn& fitness, std::span<const Bounds> bounds, const GAParams& params,
           const EvaluationObserver& observer)
        : fitness_(fitness), bounds_(bounds), params_(params), observer_(observer) {}

    GAResult run() {
        GAResult result;
        // initial population
        std::vector<Individual> initial(params_.pop_size);
        for (auto& ind : initial) {
            ind.eval_id = next_id_++;
            Rng rng(derive_seed(params_.seed, ind.eval_id));
            ind.genome = random_genome(rng);
        }
        evaluate(initial, 0, result);
        for (auto& ind : initial) {
            const bool stop = notify(ind, 0, true);
            pop_.push_back(std::move(ind));
            result.stopped = result.stopped || stop;
        }
        result.trace.push_back(stats(0, result));

        const std::size_t per_gen =
            params_.replacements_per_generation == 0 ? params_.pop_size : params_.replacements_per_generation;
        const auto immigrants = static_cast<std::size_t>(std::floor(params_.immigrant_fraction *
                                                                    static_cast<double>(params_.pop_size)));
        for (std::size_t gen = 1; gen <= params_.max_generations && !result.stopped; ++gen) {
            std::size_t done = 0;
            while (done < per_gen && !result.stopped) {
                const std::size_t count = std::min(params_.batch_size, per_gen - done);
                std::vector<Individual> batch(count);
                for (auto& child : batch) {
                    child.eval_id = next_id_++;
                    Rng rng(derive_seed(params_.seed, child.eval_id));
                    child.genome = offspring(rng);
                }
                evaluate(batch, gen, result);
                for (auto& child : batch) {
                    const std::size_t w = worst_index();
                    const bool inserted = better(child, pop_[w]) && child.fitness < pop_[w].fitness;
                    const bool stop = notify(child, gen, inserted);
                    if (inserted) pop_[w] = std::move(child);
                    result.stopped = result.stopped || stop;
                }
                done += count;
            }
            if (immigrants > 0 && !result.stopped) inject_immigrants(immigrants, gen, result);
            result.generations = gen;
            result.trace.push_back(stats(gen, result));
        }
        result.best = pop_[best_index()];
        result.population = std::move(pop_);
        result.evaluations = next_id_;
        return result;
    }

private:
    std::vector<double> random_genome(Rng& rng) const {
        std::vector<double> g(bounds_.size());
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = rng.uniform(bounds_[i].lo, bounds_[i].hi);
        return g;
    }

    const Individual& tournament(Rng& rng) const {
        std::size_t pick = rng.index(pop_.size());
        for (std::size_t k = 1; k < params_.tournament_size; ++k) {
            const std::size_t other = rng.index(pop_.size());
            if (better(pop_[other], pop_[pick])) pick = other;
        }
        return pop_[pick];
    }

    std::vector<double> offspring(Rng& rng) const {
        const Individual& a = tournament(rng);
        const Individual& b = tournament(rng);
        std::vector<double> child = a.genome;
        if (rng.uniform() < params_.crossover_rate) {
            // BLX-alpha
            for (std::size_t i = 0; i < child.size(); ++i) {
                const double lo = std::min(a.genome[i], b.genome[i]);
                const double hi = std::max(a.genome[i], b.genome[i]);
                const double ext = params_.blx_alpha * (hi - lo);
                child[i] = rng.uniform(lo - ext, hi + ext);
            }
        }
        for (std::size_t i = 0; i < child.size(); ++i) {
            if (rng.uniform() < params_.mutation_rate) {
                const double half = 0.5 * params_.mutation_window * bounds_[i].width();
                child[i] += rng.uniform(-half, half);
            }
            child[i] = std::clamp(child[i], bounds_[i].lo, bounds_[i].hi);
        }
        return child;
    }

    void evaluate(std::vector<Individual>& batch, std::size_t gen, GAResult& result) {
        parallel_for(batch.size(), params_.workers, [&](std::size_t k) {
            batch[k].fitness = fitness_(batch[k].genome, EvalContext{batch[k].eval_id, gen});
        });
        for (auto& ind : batch) {
            if (!std::isfinite(ind.fitness)) {
                ++result.nonfinite;
                log_warning("non-finite fitness at eval " + std::to_string(ind.eval_id) + "; assigned +inf");
                ind.fitness = std::numeric_limits<double>::infinity();
            }
        }
    }

    bool notify(const Individual& ind, std::size_t gen, bool inserted) const {
        return observer_ ? observer_(ind, gen, inserted) : false;
    }

    // Worst individual: highest fitness, ties to the youngest.
    std::size_t worst_index() const {
        std::size_t w = 0;
        for (std::size_t k = 1; k < pop_.size(); ++k)
            if (better(pop_[w], pop_[k])) w = k;
        return w;
    }

    std::size_t best_index() const {
        std::size_t b = 0;
        for (std::size_t k = 1; k < pop_.size(); ++k)
            if (better(pop_[k], pop_[b])) b = k;
        return b;
    }

    void inject_immigrants(std::size_t count, std::size_t gen, GAResult& result) {
        std::vector<Individual> batch(count);
        for (auto& ind : batch) {
            ind.eval_id = next_id_++;
            Rng rng(derive_seed(params_.seed, ind.eval_id));
            ind.genome = random_genome(rng);
        }
        evaluate(batch, gen, result);
        // replace the `count` worst members, never the current best
        std::vector<std::size_t> order(pop_.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return better(pop_[y], pop_[x]); });
        const std::size_t keep = best_index();
        std::size_t slot = 0;
        for (auto& ind : batch) {
            while (order[slot] == keep) ++slot;
            const bool stop = notify(ind, gen, true);
            pop_[order[slot++]] = std::move(ind);
            result.stopped = result.stopped || stop;
        }
    }

    GenerationStats stats(std::size_t gen, const GAResult& result) const {
        GenerationStats s;
        s.generation = gen;
        s.best_fitness = pop_[best_index()].fitness;
        double sum = 0.0;
        std::size_t finite = 0;
        for (const auto& ind : pop_)
            if (std::isfinite(ind.fitness)) {
                sum += ind.fitness;
                ++finite;
            }
        s.mean_fitness = finite ? sum / static_cast<double>(finite) : std::numeric_limits<double>::infinity();
        s.evaluations = next_id_;
        (void)result;
        return s;
    }

    const FitnessFn& fitness_;
    std::span<const Bounds> bounds_;
    const GAParams& params_;
    const EvaluationObserver& observer_;
    std::vector<Individual> pop_;
    std::uint64_t next_id_ = 0;
};

}  // namespace

GAResult run_ga(const FitnessFn& fitness, std::span<const Bounds> bounds, const GAParams& params,
                const EvaluationObserver& observer) {
    params.validate();
    for (std::size_t i = 0; i < bounds.size(); ++i)
        if (!std::isfinite(bounds[i].lo) || !std::isfinite(bounds[i].hi) || bounds[i].lo > bounds[i].hi)
            throw InputError("GA bounds for gene " + std::to_string(i) + " are not a finite interval");
    return Engine(fitness, bounds, params, observer).run();
}

}  // namespace mapoi
