#include <benchmark/benchmark.h>

#include <random>

#include "risloc/em_dipole.hpp"
#include "risloc/linalg.hpp"
#include "risloc/localization.hpp"
#include "risloc/radiomap.hpp"

using namespace risloc;

namespace {

void BM_SineCosineIntegral(benchmark::State& state) {
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sine_integral(x));
        benchmark::DoNotOptimize(cosine_integral(x));
        x = x < 600.0 ? x * 1.01 : 0.01;
    }
}
BENCHMARK(BM_SineCosineIntegral);

void BM_ReflectionMatrix(benchmark::State& state) {
    const Scenario s = make_default_scenario();
    const ComplexMatrix z = coupling_matrix(s.ris, s.wave);
    RisConfiguration cfg;
    cfg.id = "bench";
    cfg.loads.assign(s.ris.elements.size(), Impedance{0.0, 50.0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(reflection_matrix(z, cfg));
    }
}
BENCHMARK(BM_ReflectionMatrix);

void BM_RadioMapCell(benchmark::State& state) {
    const Scenario s = make_default_scenario();
    const LoadCodebook cb = LoadCodebook::uniform_span(200, -300.0, 300.0);
    const ConfigurationSet set = generate_configuration_set(cb, s.ris.elements.size(), 1);
    ChannelWorkspace ws(s, set.configs);
    const Vec3 mu{7.3, 11.1, 1.5};
    std::size_t m = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ws.channel(m, mu));
        m = (m + 1) % set.size();
    }
}
BENCHMARK(BM_RadioMapCell);

void BM_KnnLocalize(benchmark::State& state) {
    const std::size_t L = static_cast<std::size_t>(state.range(0)), M = 15;
    RadioMap map;
    map.grid.spacing = 1.0;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-90.0, -30.0);
    for (std::size_t l = 0; l < L; ++l) {
        map.grid.points.push_back({static_cast<double>(l % 20), static_cast<double>(l / 20), 1.5});
        map.config_ids.resize(M);
    }
    map.rssi.resize(L * M);
    for (double& v : map.rssi) v = dist(rng);
    RssiVector q;
    q.values.resize(M);
    for (double& v : q.values) v = dist(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(knn_localize(q, map, 5));
    }
}
BENCHMARK(BM_KnnLocalize)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
