#include <benchmark/benchmark.h>

#include <horoct/fields.hpp>
#include <horoct/slice.hpp>
#include <horoct/transform.hpp>
#include <horoct/volterra.hpp>

#include <cmath>

namespace {

void BM_TransformSphere(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto f = horoct::fields::gaussian_bump(n);
    horoct::QuadratureSpec q;
    horoct::Vec contact(n - 1, 0.0);
    for (auto _ : state) {
        auto est = horoct::transform_sphere(f, contact, 0.3, q);
        benchmark::DoNotOptimize(est.value);
    }
}
BENCHMARK(BM_TransformSphere)->Arg(2)->Arg(3)->Arg(4);

void BM_SpherePhaseIntegral(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    double z = 0.0;
    for (auto _ : state) {
        z = std::fmod(z + 0.37, 20.0);
        benchmark::DoNotOptimize(horoct::sphere_phase_integral(z, n));
    }
}
BENCHMARK(BM_SpherePhaseIntegral)->Arg(3)->Arg(6);

void BM_SolveSecondKind(benchmark::State& state) {
    const std::size_t nodes = static_cast<std::size_t>(state.range(0));
    auto grid = horoct::volterra::uniform_grid(0.0, 4.0, nodes);
    auto K = [](double s, double t) { return std::exp(-(s - t)); };
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) f[i] = std::sin(grid[i]);
    for (auto _ : state) {
        auto sol = horoct::volterra::solve_second_kind<double>(grid, K, f);
        benchmark::DoNotOptimize(sol);
    }
}
BENCHMARK(BM_SolveSecondKind)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
