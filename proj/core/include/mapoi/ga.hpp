#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "mapoi/pulse.hpp"

namespace mapoi {

/// Real-coded steady-state GA settings.
///
/// One generation is `replacements_per_generation` offspring (default
/// pop_size). Offspring are produced in batches of `batch_size` from the
/// population as it stood at the start of the batch, evaluated (possibly in
/// parallel), then offered for replacement in eval_id order. The batch size
/// is part of the algorithm; `workers` only changes wall-clock time.
struct GAParams {
    std::size_t pop_size = 30;
    double crossover_rate = 0.75;
    double mutation_rate = 0.05;  // per gene
    std::size_t tournament_size = 2;
    std::size_t max_generations = 50;
    std::size_t replacements_per_generation = 0;  // 0 -> pop_size
    double blx_alpha = 0.5;
    double mutation_window = 0.1;  // fraction of the gene range
    double immigrant_fraction = 0.0;  // random immigrants per generation, replace the worst
    std::size_t batch_size = 1;
    std::uint64_t seed = 1;
    unsigned workers = 1;

    void validate() const;
};

struct Individual {
    std::vector<double> genome;
    double fitness = std::numeric_limits<double>::infinity();  // lower is better
    std::uint64_t eval_id = 0;
};

/// Strict "a is better than b": lower fitness, ties to the older individual.
bool better(const Individual& a, const Individual& b);

struct EvalContext {
    std::uint64_t eval_id;
    std::size_t generation;  // 0 for the initial population
};

using FitnessFn = std::function<double(std::span<const double>, const EvalContext&)>;

/// Called once per evaluated individual, in eval_id order, after the
/// replacement decision. Returning true stops the run after the current batch.
using EvaluationObserver = std::function<bool(const Individual&, std::size_t generation, bool inserted)>;

struct GenerationStats {
    std::size_t generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;  // over finite fitness values
    std::uint64_t evaluations = 0;
};

struct GAResult {
    std::vector<Individual> population;
    Individual best;
    std::uint64_t evaluations = 0;
    std::size_t generations = 0;
    std::size_t nonfinite = 0;
    bool stopped = false;
    std::vector<GenerationStats> trace;  // entry 0 is the initial population
};

GAResult run_ga(const FitnessFn& fitness, std::span<const Bounds> bounds, const GAParams& params,
                const EvaluationObserver& observer = {});

}  // namespace mapoi
