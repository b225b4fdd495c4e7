#include <benchmark/benchmark.h>

#include "chl/interval_chain.hpp"
#include "chl/marked_config.hpp"
#include "chl/rng.hpp"
#include "chl/slit_map.hpp"

namespace {

void BM_PointShift(benchmark::State& state) {
    const chl::SlitParams p = chl::make_params_from_delta(0.1);
    chl::Rng rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(chl::point_shift(rng.uniform_angle(), p));
    }
}
BENCHMARK(BM_PointShift);

void BM_IntervalInverse(benchmark::State& state) {
    const chl::SlitParams p = chl::make_params_from_delta(0.1);
    chl::Rng rng(2);
    chl::TorusInterval i(chl::TorusAngle(0.0), 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(chl::interval_inverse(i, rng.uniform_angle(), p));
    }
}
BENCHMARK(BM_IntervalInverse);

void BM_StepChain(benchmark::State& state) {
    const chl::SlitParams p =
        chl::make_params_from_delta(1.0 / static_cast<double>(state.range(0)));
    chl::ChainState s({chl::TorusAngle(0.0), chl::kPi}, 3);
    for (auto _ : state) {
        chl::step_chain(s, p);
        // Keep the chain inside the barriers so the work stays homogeneous.
        if (s.interval.length < 0.5 || s.interval.length > 5.5) {
            s.interval = {chl::TorusAngle(0.0), chl::kPi};
        }
    }
}
BENCHMARK(BM_StepChain)->Arg(10)->Arg(100);

void BM_ApplyParticle(benchmark::State& state) {
    const chl::SlitParams p =
        chl::make_params_from_delta(1.0 / static_cast<double>(state.range(0)));
    chl::Rng rng(4);
    chl::MarkedConfiguration m;
    for (auto _ : state) {
        benchmark::DoNotOptimize(m.apply_particle(rng.uniform_angle(), p));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ApplyParticle)->Arg(5)->Arg(20);

void BM_SecondMomentQuadrature(benchmark::State& state) {
    const chl::SlitParams p = chl::make_params_from_delta(0.01);
    for (auto _ : state) {
        benchmark::DoNotOptimize(chl::second_moment_quadrature(chl::kPi, p, 1e-12));
    }
}
BENCHMARK(BM_SecondMomentQuadrature);

void BM_TrackRun(benchmark::State& state) {
    const chl::SlitParams p = chl::make_params_from_delta(0.3);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(chl::track_run(p, 1e-3, ++seed));
    }
}
BENCHMARK(BM_TrackRun);

}  // namespace

BENCHMARK_MAIN();
