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

#include "qnf/fingerprinting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "qnf/errors.hpp"

namespace qnf {

namespace {

struct Candidate {
    NodeId id;
    double score;
};

// Best candidate under `better`, ties to the smallest node id.
template <typename Better>
size_t select_best(std::span<const Candidate> candidates, Better better) {
    size_t best = 0;
    for (size_t i = 1; i < candidates.size(); ++i) {
        const auto &c = candidates[i];
        const auto &b = candidates[best];
        if (better(c.score, b.score) || (c.score == b.score && c.id < b.id)) {
            best = i;
        }
    }
    return best;
}

void check_profiles(const Counts &observed, std::span<const NoiseFingerprint> profiles, const ClassifierConfig &config) {
    if (profiles.empty()) {
        throw InvalidArgument("classify needs at least one profile");
    }
    std::set<NodeId> seen;
    for (const auto &p : profiles) {
        if (p.num_qubits() != observed.num_qubits()) {
            throw InvalidArgument("profile for node " + to_string(p.node_id) + " has " +
                                  std::to_string(p.num_qubits()) + " qubits, observed counts have " +
                                  std::to_string(observed.num_qubits()));
        }
        if (p.domain() != config.domain) {
            throw InvalidArgument("profile for node " + to_string(p.node_id) + " uses a different domain");
        }
        if (!seen.insert(p.node_id).second) {
            throw InvalidArgument("duplicate profile for node " + to_string(p.node_id));
        }
    }
}

}  // namespace

void ClassifierConfig::validate() const {
    if (!(rejection_threshold >= 0.0) || !std::isfinite(rejection_threshold)) {
        throw InvalidArgument("rejection threshold must be finite and >= 0");
    }
    if (!(margin >= 1.0) || !std::isfinite(margin)) {
        throw InvalidArgument("calibration margin must be finite and >= 1");
    }
    if (!(smoothing.alpha >= 0.0) || !std::isfinite(smoothing.alpha)) {
        throw InvalidArgument("smoothing alpha must be finite and >= 0");
    }
}

int NoiseFingerprint::num_qubits() const {
    return std::visit([](const auto &d) { return d.num_qubits(); }, reference);
}

Domain NoiseFingerprint::domain() const noexcept {
    return std::holds_alternative<ErrorStateDistribution>(reference) ? Domain::ErrorStatesOnly : Domain::FullSpectrum;
}

std::span<const double> NoiseFingerprint::reference_probs() const noexcept {
    return std::visit([](const auto &d) { return d.probs(); }, reference);
}

std::vector<double> domain_distribution(const Counts &counts, SmoothingPolicy smoothing, Domain domain) {
    OutcomeDistribution full = smooth(counts, smoothing);
    if (domain == Domain::FullSpectrum) {
        return {full.probs().begin(), full.probs().end()};
    }
    ErrorStateDistribution errors = restrict_to_error_states(full);
    return {errors.probs().begin(), errors.probs().end()};
}

std::vector<uint64_t> domain_counts(const Counts &counts, Domain domain) {
    const auto hist = counts.histogram();
    if (domain == Domain::FullSpectrum) {
        return {hist.begin(), hist.end()};
    }
    return {hist.begin() + 1, hist.end() - 1};
}

NoiseFingerprint train_fingerprint(NodeId node_id, const Counts &counts, const ClassifierConfig &config) {
    config.validate();
    if (counts.shots() == 0) {
        throw InvalidArgument("training counts have zero shots");
    }
    OutcomeDistribution full = smooth(counts, config.smoothing);
    NoiseFingerprint fp{node_id, full, counts.shots(), config.smoothing.alpha};
    if (config.domain == Domain::ErrorStatesOnly) {
        fp.reference = restrict_to_error_states(full);
    }
    return fp;
}

double threshold_from_divergences(std::span<const double> divergences, double gamma) {
    if (divergences.empty()) {
        throw InvalidArgument("threshold calibration needs at least one validation batch");
    }
    if (!(gamma >= 1.0)) {
        throw InvalidArgument("calibration margin must be >= 1");
    }
    return gamma * *std::max_element(divergences.begin(), divergences.end());
}

double calibrate_threshold(const NoiseFingerprint &profile, std::span<const Counts> validation, double gamma,
                           KlDirection direction) {
    if (validation.empty()) {
        throw InvalidArgument("threshold calibration needs at least one validation batch");
    }
    std::vector<double> divergences;
    divergences.reserve(validation.size());
    for (const auto &batch : validation) {
        if (batch.num_qubits() != profile.num_qubits()) {
            throw InvalidArgument("validation batch qubit count differs from profile");
        }
        const auto observed = domain_distribution(batch, SmoothingPolicy{profile.alpha}, profile.domain());
        const auto reference = profile.reference_probs();
        divergences.push_back(direction == KlDirection::ObservedToReference ? kl_divergence(observed, reference)
                                                                            : kl_divergence(reference, observed));
    }
    return threshold_from_divergences(divergences, gamma);
}

double multinomial_loglik(const Counts &counts, const NoiseFingerprint &profile) {
    if (counts.num_qubits() != profile.num_qubits()) {
        throw InvalidArgument("counts and profile have different qubit counts");
    }
    const auto c = domain_counts(counts, profile.domain());
    const auto p = profile.reference_probs();
    double total = 0.0;
    for (size_t x = 0; x < c.size(); ++x) {
        if (c[x] == 0) continue;
        if (p[x] <= 0.0) {
            throw DivergenceUndefined("profile assigns zero probability to an observed outcome");
        }
        total += static_cast<double>(c[x]) * std::log(p[x]);
    }
    return total;
}

AuthDecision classify(const Counts &observed, std::span<const NoiseFingerprint> profiles,
                      const ClassifierConfig &config) {
    std::vector<double> thresholds(profiles.size(), config.rejection_threshold);
    return classify(observed, profiles, thresholds, config);
}

AuthDecision classify(const Counts &observed, std::span<const NoiseFingerprint> profiles,
                      std::span<const double> thresholds, const ClassifierConfig &config) {
    config.validate();
    check_profiles(observed, profiles, config);
    if (thresholds.size() != profiles.size()) {
        throw InvalidArgument("need one threshold per profile");
    }
    for (double t : thresholds) {
        if (!(t >= 0.0)) throw InvalidArgument("thresholds must be >= 0");
    }
    if (observed.shots() == 0) {
        throw InvalidArgument("observed counts have zero shots");
    }

    AuthDecision decision;
    std::vector<Candidate> candidates;
    candidates.reserve(profiles.size());

    if (config.mode == ClassifierMode::MinKL) {
        const auto p = domain_distribution(observed, config.smoothing, config.domain);
        for (const auto &profile : profiles) {
            const auto q = profile.reference_probs();
            const double score = config.direction == KlDirection::ObservedToReference ? kl_divergence(p, q)
                                                                                      : kl_divergence(q, p);
            candidates.push_back({profile.node_id, score});
            decision.scores[profile.node_id] = score;
        }
        const size_t best = select_best(candidates, [](double a, double b) { return a < b; });
        decision.best_candidate = candidates[best].id;
        decision.best_score = candidates[best].score;
        if (candidates[best].score <= thresholds[best] + kKlAcceptTolerance) {
            decision.accepted = candidates[best].id;
        }
        return decision;
    }

    const auto c = domain_counts(observed, config.domain);
    uint64_t scored = 0;
    for (uint64_t v : c) scored += v;
    for (const auto &profile : profiles) {
        const double total = multinomial_loglik(observed, profile);
        candidates.push_back({profile.node_id, total});
        decision.scores[profile.node_id] = scored > 0 ? total / static_cast<double>(scored) : 0.0;
    }
    const size_t best = select_best(candidates, [](double a, double b) { return a > b; });
    decision.best_candidate = candidates[best].id;
    decision.best_score = decision.scores[candidates[best].id];
    if (scored == 0) {
        return decision;  // no evidence in the scoring domain
    }
    const double shots = static_cast<double>(scored);
    bool passes = false;
    if (candidates.size() == 1) {
        passes = candidates[0].score / shots >= -thresholds[0];
    } else {
        double second = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < candidates.size(); ++i) {
            if (i != best) second = std::max(second, candidates[i].score);
        }
        passes = (candidates[best].score - second) / shots >= thresholds[best];
    }
    if (passes) {
        decision.accepted = candidates[best].id;
    }
    return decision;
}

}  // namespace qnf
