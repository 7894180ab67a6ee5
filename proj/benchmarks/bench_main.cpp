#include <benchmark/benchmark.h>

#include "gibbspp/energy.hpp"
#include "gibbspp/sampler.hpp"

using namespace gibbspp;

namespace {

Configuration random_config(int n, const Window& w, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back(w.sample(rng));
    return Configuration(std::move(pts));
}

void BM_Delaunay(benchmark::State& state) {
    const Window w = Window::box({0.0, 0.0}, {1.0, 1.0});
    const Configuration cfg = random_config(static_cast<int>(state.range(0)), w, 7);
    for (auto _ : state) benchmark::DoNotOptimize(delaunay(cfg));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Delaunay)->Arg(16)->Arg(32)->Arg(64)->Arg(128)->Complexity();

void BM_Hamiltonian(benchmark::State& state) {
    const Window w = Window::box({0.0, 0.0}, {1.0, 1.0});
    const LatticeSpec lat = LatticeSpec::triangular(0.25);
    const GibbsSpec spec =
        make_spec(Del2{}, Potential::poly_edge({0.0, 1.0, 2.0, std::nullopt}), 1.0, w,
                  Configuration(), lat);
    const Configuration cfg = random_config(static_cast<int>(state.range(0)), w, 11);
    for (auto _ : state) benchmark::DoNotOptimize(hamiltonian(spec, cfg).total);
}
BENCHMARK(BM_Hamiltonian)->Arg(8)->Arg(32)->Arg(64);

void BM_SamplerStep(benchmark::State& state) {
    const Window w = Window::box({0.0, 0.0}, {1.0, 1.0});
    const LatticeSpec lat = LatticeSpec::triangular(0.25);
    const GibbsSpec spec =
        make_spec(Del2{}, Potential::poly_edge({0.0, 0.5, 2.0, std::nullopt}), 20.0, w,
                  Configuration(), lat);
    SamplerConfig sc;
    ChainState chain = init_feasible(spec, lat, SingletonBall{0.05}, 3);
    for (auto _ : state) benchmark::DoNotOptimize(step(chain, spec, sc));
}
BENCHMARK(BM_SamplerStep);

}  // namespace

BENCHMARK_MAIN();
