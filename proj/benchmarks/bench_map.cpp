// Map evaluation against direct propagation on the bundled 8-level system.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <memory>

#include "mapoi/hdmr_map.hpp"
#include "mapoi/inversion.hpp"
#include "mapoi/lab_data.hpp"
#include "mapoi/oi_loop.hpp"
#include "mapoi/rng.hpp"
#include "mapoi/system_file.hpp"

using namespace mapoi;

namespace {

struct Fixture {
    HamiltonianParams h;
    std::unique_ptr<ForwardModel> model;
    MapDomain domain;

    explicit Fixture(int q) {
        h = load_system(std::filesystem::path(MAPOI_CONFIG_DIR) / "vibrational8.system");
        PulseShape p = default_pulse(h);
        std::vector<double> knobs(p.knob_count(), 0.0);
        for (std::size_t i = 0; i < p.components.size(); ++i) knobs[i] = 0.3;
        p = p.with_knobs(knobs);
        PropagationSettings s;
        s.dt_max = PropagationSettings::dt_bound(p.max_frequency());
        model = std::make_unique<ForwardModel>(p, MeasurementPlan{q, 8, 1.0}, s);
        domain = hamiltonian_domain(h, 0.30, 1.0, 0.05);
    }

    std::vector<std::vector<double>> points(std::size_t n) const {
        Rng rng(3);
        std::vector<std::vector<double>> out(n, std::vector<double>(domain.size()));
        for (auto& x : out)
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(domain.lower[i], domain.upper[i]);
        return out;
    }
};

void BM_MapEvaluate(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)));
    const CutHdmrMap map = build_map(*f.model, f.domain, static_cast<int>(state.range(1)));
    const auto pts = f.points(256);
    std::vector<double> out(map.outputs());
    std::size_t k = 0;
    for (auto _ : state) {
        map.evaluate(pts[k++ % pts.size()], out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_MapEvaluate)->ArgsProduct({{1, 4, 25}, {4, 6}})->ArgNames({"Q", "S"});

void BM_DirectSolve(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)));
    const auto pts = f.points(16);
    std::size_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize((*f.model)(pts[k++ % pts.size()]));
}
BENCHMARK(BM_DirectSolve)->Arg(1)->Arg(4)->Arg(25)->ArgName("Q")->Unit(benchmark::kMillisecond);

void BM_MapBuild(benchmark::State& state) {
    const Fixture f(4);
    for (auto _ : state) benchmark::DoNotOptimize(build_map(*f.model, f.domain, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_MapBuild)->Arg(4)->ArgName("S")->Unit(benchmark::kMillisecond)->Iterations(2);

void BM_InversionCost(benchmark::State& state) {
    const Fixture f(4);
    const CutHdmrMap map = build_map(*f.model, f.domain, 4);
    const LabDataset data = simulate_lab_data(f.h, f.model->pulse(), f.model->plan(), FieldNoiseModel{}, 0.02, 1,
                                              f.model->settings());
    const InversionProblem problem(data, map_predictor(map), f.domain, 0.0);
    const auto pts = f.points(256);
    std::size_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(problem.cost(pts[k++ % pts.size()]));
}
BENCHMARK(BM_InversionCost);

}  // namespace

BENCHMARK_MAIN();
