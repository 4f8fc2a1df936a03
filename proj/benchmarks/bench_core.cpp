// Copyright 2026 The qnfauth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "qnf/constellation.hpp"
#include "qnf/distributions.hpp"
#include "qnf/fingerprinting.hpp"
#include "qnf/quantum_sim.hpp"

namespace {

using namespace qnf;

void BM_SampleShots(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const DeviceNoiseParams device = draw_device(n, {}, 1);
    const Circuit ghz = build_ghz_circuit(n);
    uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_shots(device, ghz, 1000, seed++));
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SampleShots)->Arg(2)->Arg(5)->Arg(8);

void BM_KlMatrix(benchmark::State &state) {
    const int n = 5;
    const auto m = static_cast<uint32_t>(state.range(0));
    std::vector<std::vector<double>> refs;
    const ClassifierConfig cfg;
    for (uint32_t i = 0; i < m; ++i) {
        const Counts c = sample_shots(draw_device(n, {}, i), build_ghz_circuit(n), 10000, i);
        const auto probs = train_fingerprint(NodeId{i + 1}, c, cfg).reference_probs();
        refs.emplace_back(probs.begin(), probs.end());
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(kl_matrix(std::span<const std::vector<double>>(refs)));
    }
}
BENCHMARK(BM_KlMatrix)->Arg(4)->Arg(16);

void BM_Classify(benchmark::State &state) {
    const int n = 5;
    ClassifierConfig cfg;
    cfg.mode = state.range(0) == 0 ? ClassifierMode::MinKL : ClassifierMode::MultinomialLikelihood;
    cfg.rejection_threshold = 1.0;
    std::vector<NoiseFingerprint> profiles;
    for (uint32_t i = 0; i < 3; ++i) {
        profiles.push_back(train_fingerprint(
            NodeId{i + 1}, sample_shots(draw_device(n, {}, i), build_ghz_circuit(n), 10000, i), cfg));
    }
    const Counts observed = sample_shots(draw_device(n, {}, 0), build_ghz_circuit(n), 1000, 99);
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify(observed, profiles, cfg));
    }
}
BENCHMARK(BM_Classify)->Arg(0)->Arg(1);

void BM_PresetExperiment(benchmark::State &state) {
    ConstellationConfig config;
    config.master_seed = 42;
    config.trials_per_pair = 10;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_experiment(config));
    }
}
BENCHMARK(BM_PresetExperiment)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
