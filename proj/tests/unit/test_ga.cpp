#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <mutex>

#include "mapoi/errors.hpp"
#include "mapoi/ga.hpp"

using namespace mapoi;

namespace {

double sphere(std::span<const double> g, const EvalContext&) {
    double s = 0.0;
    for (double x : g) s += x * x;
    return s;
}

std::vector<Bounds> cube(std::size_t n, double lo = -1.0, double hi = 1.0) { return std::vector<Bounds>(n, {lo, hi}); }

}  // namespace

TEST(GA, SphereConverges) {
    GAParams p;
    p.pop_size = 30;
    p.max_generations = 200;
    p.seed = 12;
    const auto bounds = cube(10);
    const GAResult r = run_ga(sphere, bounds, p);
    EXPECT_LT(r.best.fitness, 1e-3);
    EXPECT_EQ(r.generations, 200u);
}

TEST(GA, ZeroGenerationsEvaluatesInitialPopulationOnly) {
    GAParams p;
    p.pop_size = 17;
    p.max_generations = 0;
    const auto bounds = cube(3);
    const GAResult r = run_ga(sphere, bounds, p);
    EXPECT_EQ(r.evaluations, 17u);
    EXPECT_EQ(r.population.size(), 17u);
    EXPECT_EQ(r.generations, 0u);
    ASSERT_EQ(r.trace.size(), 1u);
    for (std::size_t k = 0; k < r.population.size(); ++k) EXPECT_EQ(r.population[k].eval_id, k);
}

TEST(GA, SameSeedSameResult) {
    GAParams p;
    p.max_generations = 30;
    p.seed = 99;
    const auto bounds = cube(6);
    const GAResult a = run_ga(sphere, bounds, p);
    const GAResult b = run_ga(sphere, bounds, p);
    EXPECT_EQ(a.best.genome, b.best.genome);
    EXPECT_EQ(a.best.fitness, b.best.fitness);
    p.seed = 100;
    EXPECT_NE(run_ga(sphere, bounds, p).best.genome, a.best.genome);
}

TEST(GA, GenomesStayInBounds) {
    GAParams p;
    p.max_generations = 60;
    p.mutation_rate = 0.5;
    p.mutation_window = 0.9;
    std::vector<Bounds> bounds{{0.0, 1.0}, {-5.0, -4.0}, {10.0, 10.5}};
    bool ok = true;
    const FitnessFn f = [&](std::span<const double> g, const EvalContext&) {
        for (std::size_t i = 0; i < g.size(); ++i) ok = ok && bounds[i].contains(g[i]);
        return std::abs(g[0] - 2.0);  // pulls toward the upper edge
    };
    const GAResult r = run_ga(f, bounds, p);
    EXPECT_TRUE(ok);
    EXPECT_NEAR(r.best.genome[0], 1.0, 1e-2);
}

TEST(GA, BestNeverGetsWorse) {
    GAParams p;
    p.max_generations = 40;
    p.seed = 3;
    const auto bounds = cube(5);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> history;
    const EvaluationObserver obs = [&](const Individual& ind, std::size_t, bool) {
        best = std::min(best, ind.fitness);
        history.push_back(best);
        return false;
    };
    const GAResult r = run_ga(sphere, bounds, p, obs);
    for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k].best_fitness, r.trace[k - 1].best_fitness);
    EXPECT_EQ(r.trace.back().best_fitness, best);
    EXPECT_EQ(history.size(), r.evaluations);
}

TEST(GA, EvaluationCount) {
    GAParams p;
    p.pop_size = 10;
    p.max_generations = 7;
    p.replacements_per_generation = 4;
    const auto bounds = cube(2);
    EXPECT_EQ(run_ga(sphere, bounds, p).evaluations, 10u + 7u * 4u);
    p.immigrant_fraction = 0.2;  // two immigrants per generation
    EXPECT_EQ(run_ga(sphere, bounds, p).evaluations, 10u + 7u * (4u + 2u));
}

TEST(GA, NonFiniteFitnessBecomesInfinity) {
    GAParams p;
    p.max_generations = 5;
    const auto bounds = cube(2);
    const FitnessFn f = [](std::span<const double> g, const EvalContext&) {
        return g[0] > 0.0 ? std::numeric_limits<double>::quiet_NaN() : g[0] * g[0];
    };
    set_warnings_enabled(false);
    const GAResult r = run_ga(f, bounds, p);
    set_warnings_enabled(true);
    EXPECT_GT(r.nonfinite, 0u);
    for (const auto& ind : r.population) EXPECT_FALSE(std::isnan(ind.fitness));
    EXPECT_LE(r.best.genome[0], 0.0);
}

TEST(GA, ObserverCanStop) {
    GAParams p;
    p.max_generations = 100;
    p.batch_size = 3;
    const auto bounds = cube(2);
    std::size_t seen = 0;
    const EvaluationObserver obs = [&](const Individual&, std::size_t, bool) { return ++seen >= 45; };
    const GAResult r = run_ga(sphere, bounds, p, obs);
    EXPECT_TRUE(r.stopped);
    EXPECT_GE(r.evaluations, 45u);
    EXPECT_LT(r.evaluations, 45u + 3u);
}

TEST(GA, WorkersDoNotChangeResult) {
    GAParams p;
    p.max_generations = 20;
    p.batch_size = 4;
    p.immigrant_fraction = 0.1;
    const auto bounds = cube(4);
    std::mutex mu;
    std::vector<std::uint64_t> ids_seen;
    const FitnessFn f = [&](std::span<const double> g, const EvalContext& ctx) {
        {
            std::lock_guard lock(mu);
            ids_seen.push_back(ctx.eval_id);
        }
        return sphere(g, ctx);
    };
    const GAResult a = run_ga(f, bounds, p);
    p.workers = 4;
    const GAResult b = run_ga(f, bounds, p);
    EXPECT_EQ(a.best.genome, b.best.genome);
    ASSERT_EQ(a.population.size(), b.population.size());
    for (std::size_t k = 0; k < a.population.size(); ++k) EXPECT_EQ(a.population[k].genome, b.population[k].genome);
    EXPECT_EQ(ids_seen.size(), 2 * a.evaluations);
}

TEST(GA, TiesGoToOlder) {
    Individual a{{0.0}, 1.0, 3};
    Individual b{{1.0}, 1.0, 7};
    EXPECT_TRUE(better(a, b));
    EXPECT_FALSE(better(b, a));
    Individual c{{2.0}, 0.5, 9};
    EXPECT_TRUE(better(c, a));
}

TEST(GA, ValidatesParameters) {
    const auto bounds = cube(2);
    GAParams p;
    p.pop_size = 1;
    EXPECT_THROW(run_ga(sphere, bounds, p), ConfigError);
    p = GAParams{};
    p.crossover_rate = 1.5;
    EXPECT_THROW(run_ga(sphere, bounds, p), ConfigError);
    p = GAParams{};
    p.mutation_rate = -0.1;
    EXPECT_THROW(run_ga(sphere, bounds, p), ConfigError);
    const std::vector<Bounds> infinite{{0.0, std::numeric_limits<double>::infinity()}};
    EXPECT_THROW(run_ga(sphere, infinite, GAParams{}), InputError);
}
