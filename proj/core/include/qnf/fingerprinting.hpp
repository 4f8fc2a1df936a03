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

// Per-transmitter noise fingerprints and the open-set classifier that matches
// an observed histogram against a set of them.

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qnf/distributions.hpp"
#include "qnf/quantum_sim.hpp"

namespace qnf {

struct NodeId {
    uint32_t value = 0;
    auto operator<=>(const NodeId &) const = default;
};

inline std::string to_string(NodeId id) { return std::to_string(id.value); }

enum class ClassifierMode { MinKL, MultinomialLikelihood };

/// Which outcomes a fingerprint covers.
enum class Domain { ErrorStatesOnly, FullSpectrum };

/// Argument order of the KL score in MinKL mode.
enum class KlDirection { ObservedToReference, ReferenceToObserved };

/// Slack added to MinKL thresholds. Fingerprints stored at 12 significant
/// digits score ~1e-12 nats against their own training counts.
inline constexpr double kKlAcceptTolerance = 1e-9;

struct ClassifierConfig {
    ClassifierMode mode = ClassifierMode::MinKL;
    Domain domain = Domain::ErrorStatesOnly;
    /// Nats in MinKL mode; per-shot log-likelihood margin in likelihood mode.
    double rejection_threshold = 0.0;
    /// Calibration margin gamma: theta = gamma * max validation divergence.
    double margin = 3.0;
    SmoothingPolicy smoothing{};
    KlDirection direction = KlDirection::ObservedToReference;

    /// Throws InvalidArgument on theta < 0, gamma < 1 or alpha < 0.
    void validate() const;

    bool operator==(const ClassifierConfig &) const = default;
};

struct NoiseFingerprint {
    NodeId node_id;
    std::variant<ErrorStateDistribution, OutcomeDistribution> reference;
    uint64_t training_shots = 0;
    double alpha = 0.0;

    int num_qubits() const;
    Domain domain() const noexcept;
    std::span<const double> reference_probs() const noexcept;
};

/// Projects a histogram onto a domain after smoothing. In ErrorStatesOnly
/// mode this is restrict_to_error_states(smooth(counts)).
std::vector<double> domain_distribution(const Counts &counts, SmoothingPolicy smoothing, Domain domain);

/// Counts restricted to a domain, in domain order.
std::vector<uint64_t> domain_counts(const Counts &counts, Domain domain);

/// Reference = domain_distribution(counts, config.smoothing, config.domain).
/// NoErrorMass can only escape when alpha == 0.
NoiseFingerprint train_fingerprint(NodeId node_id, const Counts &counts, const ClassifierConfig &config);

/// gamma * max(divergences). Throws InvalidArgument on an empty list or gamma < 1.
double threshold_from_divergences(std::span<const double> divergences, double gamma);

/// Scores each validation batch against the profile (the profile's own
/// domain and smoothing) and returns threshold_from_divergences.
double calibrate_threshold(const NoiseFingerprint &profile, std::span<const Counts> validation, double gamma,
                           KlDirection direction = KlDirection::ObservedToReference);

struct AuthDecision {
    /// Set on Accept.
    std::optional<NodeId> accepted;
    /// KL in nats (MinKL) or mean per-shot log-likelihood (likelihood mode).
    std::map<NodeId, double> scores;
    /// Best-scoring profile, whether or not it passed the threshold.
    NodeId best_candidate;
    double best_score = 0.0;

    bool is_accept() const noexcept { return accepted.has_value(); }
    bool accepts(NodeId id) const noexcept { return accepted && *accepted == id; }
};

/// Open-set classification against `profiles` with one threshold for all.
AuthDecision classify(const Counts &observed, std::span<const NoiseFingerprint> profiles,
                      const ClassifierConfig &config);

/// As above, but profile i is accepted only against thresholds[i].
AuthDecision classify(const Counts &observed, std::span<const NoiseFingerprint> profiles,
                      std::span<const double> thresholds, const ClassifierConfig &config);

/// sum_x c_x ln p_x over the profile's domain; the multinomial coefficient is
/// omitted. Throws DivergenceUndefined if p_x = 0 < c_x.
double multinomial_loglik(const Counts &counts, const NoiseFingerprint &profile);

}  // namespace qnf
