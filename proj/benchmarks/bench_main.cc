// Copyright 2026 The zonesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "zonesim/decoder.h"
#include "zonesim/engine.h"
#include "zonesim/lindblad.h"
#include "zonesim/logistics.h"
#include "zonesim/matching.h"
#include "zonesim/qec_circuits.h"
#include "zonesim/rng.h"

namespace {

using namespace zonesim;

void BM_RepcodeShot(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const Circuit c = gen_walking_repcode({d, d, false, 0});
    const Engine engine(c, NoiseModel::defaults());
    uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(engine.run_shot(derive_seed(1, seed++)));
}
BENCHMARK(BM_RepcodeShot)->Arg(3)->Arg(5)->Arg(7);

void BM_DecodeShot(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const Circuit c = gen_walking_repcode({d, d, false, 0});
    const NoiseModel noise = NoiseModel::defaults();
    const MatchingGraph graph = build_matching_graph(c, noise);
    const auto shots = run_batch(c, noise, 256, 7);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(decode_shot(graph, shots[i++ % shots.size()]));
}
BENCHMARK(BM_DecodeShot)->Arg(3)->Arg(7);

void BM_BuildGraph(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const Circuit c = gen_walking_repcode({d, d, false, 0});
    const NoiseModel noise = NoiseModel::defaults();
    for (auto _ : state) benchmark::DoNotOptimize(build_matching_graph(c, noise));
}
BENCHMARK(BM_BuildGraph)->Arg(3)->Arg(7);

void BM_PerfectMatching(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    CounterRng rng(3);
    std::vector<std::vector<int64_t>> cost(n, std::vector<int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) cost[i][j] = cost[j][i] = static_cast<int64_t>(rng.below(1000));
    for (auto _ : state) benchmark::DoNotOptimize(min_cost_perfect_matching(cost));
}
BENCHMARK(BM_PerfectMatching)->Arg(8)->Arg(24)->Arg(64);

void BM_PlanFill(benchmark::State& state) {
    const ZoneLayout layout = ZoneLayout::defaults();
    std::vector<Site> vac, src;
    for (int i = 0; i < 32; ++i) vac.push_back({ZoneKind::kStorage, i});
    for (int i = 0; i < 75; i += 2) src.push_back({ZoneKind::kLoading, i});
    for (auto _ : state) benchmark::DoNotOptimize(plan_moves(layout, vac, src));
}
BENCHMARK(BM_PlanFill);

void BM_ImagingEvolution(benchmark::State& state) {
    const RegisterImagingModel model = [] {
        RegisterImagingModel m;
        m.imaging_rabi = 1.2;
        m.gamma_3p1 = 1.14;
        m.register_rabi = 15080.0;
        m.register_detuning = -47752.0;
        m.s1_offsets = {0.0, 18850.0};
        m.s1_weights = {0.73, 0.4};
        m.gamma_3s1 = 50.3;
        return m;
    }();
    const LevelSystem s = model.build(0.0, 0.0);
    StepControl ctl;
    ctl.outputs = 1;
    for (auto _ : state) benchmark::DoNotOptimize(evolve(s, pure_state(s.dim(), 0), 7000.0, ctl));
}
BENCHMARK(BM_ImagingEvolution);

}  // namespace
BENCHMARK_MAIN();
