#include <benchmark/benchmark.h>

#include "flowsim/harness.hpp"

using namespace flowsim;

namespace {

EnvironmentSpec sqrt_env() {
    EnvironmentSpec spec;
    spec.complexity_kind = ComplexityKind::Sqrt;
    spec.level_max = 200.0;
    spec.ambient_death = 0.001;
    spec.horizon = 4001;
    return spec;
}

ComplexityProfile mined_profile(const EnvironmentSpec& spec, const SlopeRange& slopes) {
    MiningParams params{2000, 0.001, 1.0, uniform_probe_slopes(slopes)};
    return mine_pipeline(spec, params, 7);
}

void BM_EnvStep(benchmark::State& state) {
    const EnvironmentSpec spec = sqrt_env();
    RandomSource rng(1);
    AgentState s = make_initial_state(spec);
    s.time = 50;
    s.ability = {50.0};
    s.level = 50.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(step(spec, s, 60.0, rng));
    }
}
BENCHMARK(BM_EnvStep);

void BM_BaselineEpisode(benchmark::State& state) {
    const EnvironmentSpec spec = sqrt_env();
    const BaselineMetaPolicy meta(BaselinePolicy{1.03}, spec.level_max);
    const IdentityBasePolicy base;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        RandomSource rng(seed++);
        benchmark::DoNotOptimize(run_episode(spec, meta, base, rng));
    }
}
BENCHMARK(BM_BaselineEpisode);

void BM_MineProfile(benchmark::State& state) {
    const EnvironmentSpec spec = sqrt_env();
    const auto probes = static_cast<std::int64_t>(state.range(0));
    for (auto _ : state) {
        MiningParams params{probes, 0.001, 1.0, uniform_probe_slopes({0.5, 20.0})};
        benchmark::DoNotOptimize(mine_pipeline(spec, params, 7));
    }
}
BENCHMARK(BM_MineProfile)->Arg(200)->Arg(1000);

void BM_SelectTargetLevel(benchmark::State& state) {
    const EnvironmentSpec spec = sqrt_env();
    const ComplexityProfile profile = mined_profile(spec, {0.5, 20.0});
    const FlowConfig cfg;
    double ability = 1.0;
    for (auto _ : state) {
        const AbilityVector a{ability};
        benchmark::DoNotOptimize(
            select_target_level(profile, a, 0.0, cfg, spec.level_max));
        ability = ability >= 14.0 ? 1.0 : ability + 1.0;
    }
}
BENCHMARK(BM_SelectTargetLevel);

void BM_FlowEpisode(benchmark::State& state) {
    const EnvironmentSpec spec = sqrt_env();
    const ComplexityProfile profile = mined_profile(spec, {0.5, 20.0});
    const FlowMetaPolicy meta(profile, FlowConfig{}, spec.level_max);
    const IdentityBasePolicy base;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        RandomSource rng(seed++);
        benchmark::DoNotOptimize(run_episode(spec, meta, base, rng));
    }
}
BENCHMARK(BM_FlowEpisode);

} // namespace

BENCHMARK_MAIN();
