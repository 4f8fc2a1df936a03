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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails, including its runtime bound.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "qnf/constellation.hpp"
#include "qnf/distributions.hpp"
#include "qnf/errors.hpp"
#include "qnf/fingerprinting.hpp"
#include "qnf/harness.hpp"
#include "qnf/quantum_sim.hpp"
#include "test_support.hpp"

namespace {

using namespace qnf;
using Clock = std::chrono::steady_clock;

// Bounds frozen from the seeded table1-analog run (seed 42): genuine accept
// 0.998, regenerating-adversary reject 1.00. Seeds 1, 2, 3, 7, 100, 2024 and
// 31337 give 0.98 to 1.00 and 1.00.
constexpr double kGenuineAcceptBound = 0.95;
constexpr double kImpostorRejectBound = 0.90;
constexpr uint64_t kPresetSeed = 42;

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double runtime_bound_s;
    std::function<Outcome()> check;
};

std::string fmt(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// Shared between criteria 5 to 7 so the preset runs once; its cost is charged
// to the first criterion that needs it.
const ExperimentResult &preset_result() {
    static const ExperimentResult result = run_experiment(preset_config("table1-analog", kPresetSeed));
    return result;
}

Outcome noiseless_ghz() {
    const Counts c = sample_shots(DeviceNoiseParams::noiseless(5), build_ghz_circuit(5), 10000, kPresetSeed);
    Outcome o;
    o.ok = c.shots() == 10000 && c[0] + c[31] == 10000;
    const double f0 = static_cast<double>(c[0]) / 10000.0;
    const double f31 = static_cast<double>(c[31]) / 10000.0;
    o.ok = o.ok && std::abs(f0 - 0.5) <= 0.015 && std::abs(f31 - 0.5) <= 0.015;
    o.detail = "support {00000,11111} mass " + std::to_string(c[0] + c[31]) + "/10000, freq " + fmt(f0) + " / " +
               fmt(f31) + " (0.5 +/- 0.015)";
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    double worst = 0.0;
    DeviceParamRanges ranges;
    ranges.readout_min = 0.02;
    ranges.readout_max = 0.15;
    for (int n = 2; n <= 4; ++n) {
        DeviceNoiseParams d = draw_device(n, ranges, 100 + static_cast<uint64_t>(n));
        d.p1 = d.p2 = 0.0;
        const Counts c = sample_shots(d, build_ghz_circuit(n), 100000, 200 + static_cast<uint64_t>(n));
        const double tv = total_variation(empirical_from_counts(c), readout_oracle_distribution(n, d.readout));
        worst = std::max(worst, tv);
        o.ok = o.ok && tv <= 0.01;
    }
    o.detail = "n in {2,3,4}, 100000 shots, max TV " + fmt(worst) + " (<= 0.01)";
    return o;
}

Outcome kl_properties() {
    Outcome o;
    std::mt19937_64 rng(kPresetSeed);
    int self_nonzero = 0, negative = 0, pinsker = 0;
    for (int i = 0; i < 1000; ++i) {
        const size_t size = size_t{1} << (1 + i % 5);
        const auto p = testing::random_positive_distribution(rng, size);
        const auto q = testing::random_positive_distribution(rng, size);
        const std::span<const double> sp(p), sq(q);
        if (kl_divergence(sp, sp) != 0.0) ++self_nonzero;
        const double d = kl_divergence(sp, sq);
        if (!(d >= 0.0)) ++negative;
        if (total_variation(sp, sq) > std::sqrt(d / 2.0) + 1e-12) ++pinsker;
    }
    const std::vector<double> a = {0.5, 0.5}, b = {0.25, 0.75};
    const double hand = kl_divergence(std::span<const double>(a), std::span<const double>(b));
    o.ok = self_nonzero == 0 && negative == 0 && pinsker == 0 && std::abs(hand - 0.14384) <= 1e-5;
    o.detail = "1000 pairs: D(P||P)!=0 " + std::to_string(self_nonzero) + ", D<0 " + std::to_string(negative) +
               ", Pinsker violations " + std::to_string(pinsker) + "; D((.5,.5)||(.25,.75)) = " + fmt(hand, 8) +
               " nats";
    return o;
}

Outcome error_restriction() {
    const auto r = restrict_to_error_states(OutcomeDistribution(2, {0.48, 0.02, 0.03, 0.47}));
    Outcome o;
    o.ok = r.probs().size() == 2 && std::abs(r.probs()[0] - 0.4) <= 1e-12 && std::abs(r.probs()[1] - 0.6) <= 1e-12;
    o.detail = "(0.48,0.02,0.03,0.47) -> (" + fmt(r.probs()[0], 12) + ", " + fmt(r.probs()[1], 12) + ")";
    return o;
}

Outcome kl_matrix_structure() {
    const SquareMatrix &kl = preset_result().kl;
    Outcome o;
    o.ok = kl.dim() == 4;
    double min_off = INFINITY, max_asym = 0.0;
    for (size_t i = 0; i < kl.dim(); ++i) {
        for (size_t j = 0; j < kl.dim(); ++j) {
            if (i == j) {
                o.ok = o.ok && kl(i, j) == 0.0;
            } else {
                min_off = std::min(min_off, kl(i, j));
                max_asym = std::max(max_asym, std::abs(kl(i, j) - kl(j, i)));
            }
        }
    }
    o.ok = o.ok && min_off > 0.0 && max_asym > 1e-3;
    o.detail = "4x4, zero diagonal, min off-diagonal " + fmt(min_off) + " nats, max |Dij-Dji| " + fmt(max_asym);
    return o;
}

Outcome genuine_authentication() {
    const ExperimentMetrics &m = preset_result().metrics;
    Outcome o;
    o.ok = m.genuine_trials == 12 * 100 && m.genuine_accept_rate >= kGenuineAcceptBound;
    o.detail = "k=1000, " + std::to_string(m.genuine_trials) + " trials, accept rate " + fmt(m.genuine_accept_rate) +
               " (>= " + fmt(kGenuineAcceptBound) + ")";
    return o;
}

Outcome mitm_detection() {
    const ExperimentResult &regen = preset_result();
    const ExperimentMetrics &m = regen.metrics;
    Outcome o;
    o.ok = m.impostor_trials == 100 && m.impostor_reject_rate >= kImpostorRejectBound;

    ConstellationConfig identical = preset_config("table1-analog", kPresetSeed);
    identical.adversary->kind = AdversaryKind::IdenticalDevice;
    const ExperimentResult same = run_experiment(identical);
    const double accepted = same.metrics.impostor_trials == 0
                                ? 0.0
                                : static_cast<double>(same.metrics.impostor_accepts) /
                                      static_cast<double>(same.metrics.impostor_trials);
    const double genuine = same.metrics.genuine_accept_rate;
    o.ok = o.ok && accepted >= genuine - 0.05;
    o.detail = "offset " + fmt(identical.adversary->readout_offset) + ": reject rate " +
               fmt(m.impostor_reject_rate) + " (>= " + fmt(kImpostorRejectBound) +
               "); identical-device adversary accepted " + fmt(accepted) + " vs genuine " + fmt(genuine) +
               " (limitation documented)";
    return o;
}

Outcome determinism() {
    testing::TempDir dir("acceptance");
    std::ostringstream out, err;
    Outcome o;
    for (const char *leaf : {"a", "b"}) {
        const int code = cli::dispatch(
            {"experiment", "--preset", "table1-analog", "--seed", std::to_string(kPresetSeed), "--out", dir / leaf},
            out, err);
        if (code != 0) return {false, "experiment exited " + std::to_string(code) + ": " + err.str()};
    }
    size_t files = 0, differing = 0;
    const auto a = dir.path() / "a", b = dir.path() / "b";
    for (const auto &entry : std::filesystem::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file()) continue;
        ++files;
        const auto other = b / std::filesystem::relative(entry.path(), a);
        if (!std::filesystem::exists(other) || read_file(entry.path()) != read_file(other)) ++differing;
    }
    size_t files_b = 0;
    for (const auto &entry : std::filesystem::recursive_directory_iterator(b)) files_b += entry.is_regular_file();
    o.ok = files > 0 && files == files_b && differing == 0 && verify_manifest(a).empty();
    o.detail = std::to_string(files) + " artifacts, " + std::to_string(differing) + " differ, manifest verified";
    return o;
}

Outcome classifier_consistency() {
    std::mt19937_64 rng(kPresetSeed);
    std::uniform_int_distribution<uint64_t> count(1, 400);
    auto positive_counts = [&](int n) {
        std::vector<uint64_t> h(size_t{1} << n);
        for (auto &x : h) x = count(rng);
        return Counts(n, h);
    };
    int agree = 0;
    for (int instance = 0; instance < 100; ++instance) {
        const int n = 2 + instance % 4;
        ClassifierConfig kl_cfg;
        kl_cfg.smoothing.alpha = 0.0;
        kl_cfg.domain = instance % 2 == 0 ? Domain::ErrorStatesOnly : Domain::FullSpectrum;
        ClassifierConfig ml_cfg = kl_cfg;
        ml_cfg.mode = ClassifierMode::MultinomialLikelihood;
        std::vector<NoiseFingerprint> profiles;
        const int size = 2 + instance % 5;
        for (int id = 1; id <= size; ++id) {
            profiles.push_back(train_fingerprint(NodeId{static_cast<uint32_t>(id)}, positive_counts(n), kl_cfg));
        }
        const Counts observed = positive_counts(n);
        agree += classify(observed, profiles, kl_cfg).best_candidate ==
                 classify(observed, profiles, ml_cfg).best_candidate;
    }
    return {agree == 100, std::to_string(agree) + "/100 instances: argmin KL == argmax likelihood (alpha=0)"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "noiseless GHZ validity", 1.0, noiseless_ghz},
        {2, "readout oracle equivalence", 5.0, oracle_equivalence},
        {3, "KL property suite", 1.0, kl_properties},
        {4, "error-state restriction", 0.1, error_restriction},
        {5, "KL matrix structure (table1-analog)", 30.0, kl_matrix_structure},
        {6, "genuine authentication", 120.0, genuine_authentication},
        {7, "MITM detection", 120.0, mitm_detection},
        {8, "determinism", 120.0, determinism},
        {9, "classifier consistency", 5.0, classifier_consistency},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        const auto start = Clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
        const bool in_time = seconds < c.runtime_bound_s;
        const bool pass = o.ok && in_time;
        failures += !pass;
        std::printf("%s %d %s: %s; runtime %.3f s (< %g s)%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    o.detail.c_str(), seconds, c.runtime_bound_s, in_time ? "" : " EXCEEDED");
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
