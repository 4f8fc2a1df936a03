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

// A simulated constellation: nodes learn each other's noise fingerprints in a
// training phase, then authenticate peers (and face a regenerating
// man-in-the-middle) online.
//
// Noise belongs to the transmitting device only; the link is ideal. Every RNG
// stream is derived from (master_seed, stream label, indices), so results do
// not depend on the order in which trials run.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qnf/distributions.hpp"
#include "qnf/fingerprinting.hpp"
#include "qnf/quantum_sim.hpp"

namespace qnf {

enum class AdversaryKind {
    /// Regenerates the GHZ batches on its own hardware: the impersonated
    /// device's readout errors, each shifted by +/- readout_offset.
    Regenerate,
    /// Bit-identical physics to the impersonated device. Indistinguishable by
    /// construction; kept to document the limit of the scheme.
    IdenticalDevice,
};

struct AdversarySettings {
    AdversaryKind kind = AdversaryKind::Regenerate;
    NodeId claimed_id{2};
    NodeId verifier_id{1};
    double readout_offset = 0.05;
    uint32_t trials = 100;
    /// Seed of the adversary's hardware; derived from the master seed if unset.
    std::optional<uint64_t> device_seed;
    /// Explicit adversary hardware; overrides kind/readout_offset.
    std::optional<DeviceNoiseParams> device;

    bool operator==(const AdversarySettings &) const = default;
};

struct ConstellationConfig {
    uint32_t m = 4;
    int n = 5;
    uint64_t k = 1000;         ///< authentication shots per trial
    uint64_t k_train = 10000;  ///< training shots per (verifier, peer) pair
    uint64_t master_seed = 0;
    DeviceParamRanges device_ranges{};
    /// Explicit devices for nodes 1..m; drawn from device_ranges when empty.
    std::vector<DeviceNoiseParams> devices;
    ClassifierConfig classifier{};
    uint32_t trials_per_pair = 100;
    /// Undirected training links; complete graph when unset.
    std::optional<std::vector<std::pair<NodeId, NodeId>>> adjacency;
    std::optional<AdversarySettings> adversary;
    /// Fraction of k_train held out for threshold calibration.
    double holdout_fraction = 0.2;

    /// Throws ConfigError naming the offending field.
    void validate() const;
    /// Non-fatal advisories, e.g. k_train below 10 k.
    std::vector<std::string> warnings() const;

    std::vector<NodeId> node_ids() const;
    bool are_neighbors(NodeId a, NodeId b) const;

    bool operator==(const ConstellationConfig &) const = default;
};

/// One satellite: its own transmitter plus what it has learned about peers.
class SatelliteNode {
   public:
    SatelliteNode(NodeId id, DeviceNoiseParams device, ClassifierConfig classifier);

    NodeId id() const noexcept { return id_; }
    const DeviceNoiseParams &device() const noexcept { return device_; }
    const ClassifierConfig &classifier() const noexcept { return classifier_; }

    /// Profiles ordered by node id, with thresholds in the same order.
    std::span<const NoiseFingerprint> profiles() const noexcept { return profiles_; }
    std::span<const double> thresholds() const noexcept { return thresholds_; }
    const NoiseFingerprint *profile_for(NodeId peer) const;
    std::optional<double> threshold_for(NodeId peer) const;

    /// Throws InvalidArgument for the node's own id or a duplicate peer.
    void enroll(NoiseFingerprint profile, double threshold);
    void mark_trained() noexcept { trained_ = true; }
    bool trained() const noexcept { return trained_; }

    /// Classifies against the enrolled profiles with per-peer thresholds.
    /// Throws ProtocolStateError before training.
    AuthDecision classify(const Counts &observed) const;

   private:
    NodeId id_;
    DeviceNoiseParams device_;
    ClassifierConfig classifier_;
    std::vector<NoiseFingerprint> profiles_;
    std::vector<double> thresholds_;
    bool trained_ = false;
};

/// Devices of nodes 1..m, explicit or drawn from the configured ranges.
std::vector<DeviceNoiseParams> constellation_devices(const ConstellationConfig &config);

/// Every node queries each neighbor for k_train shots, trains a fingerprint on
/// the first part and calibrates that peer's threshold on held-out batches of
/// k shots.
std::vector<SatelliteNode> run_training_phase(const ConstellationConfig &config);

/// The claimant's device transmits k shots; the verifier classifies them. A
/// claimant the verifier never enrolled is always rejected.
AuthDecision authenticate_peer(const SatelliteNode &verifier, const SatelliteNode &claimant, uint64_t k,
                               uint64_t seed);

struct AdversaryConfig {
    DeviceNoiseParams device;
    NodeId claimed_id;
    NodeId verifier_id;
};

/// Each qubit's p01 and p10 moved by exactly `offset`, in a direction drawn
/// from `seed` (forced inward where the other direction would leave [0, 0.5)).
/// Gate error rates are copied unchanged.
DeviceNoiseParams make_impostor_device(const DeviceNoiseParams &genuine, double offset, uint64_t seed);

/// The adversary's device generates k shots while claiming claimed_id.
AuthDecision run_mitm_attack(const SatelliteNode &verifier, const AdversaryConfig &adversary, uint64_t k,
                             uint64_t seed);

enum class TrialKind { Genuine, Impostor };

struct DecisionRecord {
    uint64_t trial = 0;
    TrialKind kind = TrialKind::Genuine;
    NodeId verifier;
    NodeId claimed;
    std::optional<NodeId> decided;
    NodeId best_candidate;
    double best_score = 0.0;
    uint64_t seed = 0;
};

/// Genuine trials seen by one verifier. rows[i][j] counts claimant
/// `claimants[i]` decided as `columns[j]`; the extra last column is Reject.
struct NodeConfusion {
    NodeId verifier;
    std::vector<NodeId> claimants;
    std::vector<NodeId> columns;
    std::vector<std::vector<uint64_t>> rows;
};

struct ExperimentMetrics {
    uint64_t genuine_trials = 0;
    uint64_t genuine_accepts = 0;  ///< Accept(claimant)
    uint64_t genuine_misidentified = 0;
    uint64_t impostor_trials = 0;
    uint64_t impostor_accepts = 0;  ///< Accept(claimed id)
    /// Claim refused: Reject, or a different enrolled id decided.
    uint64_t impostor_rejects = 0;
    /// The subset of impostor_rejects decided as another enrolled id.
    uint64_t impostor_misidentified = 0;

    double genuine_accept_rate = 0.0;
    double false_reject_rate = 0.0;
    /// Zero when no impostor trials ran.
    double false_accept_rate = 0.0;
    double impostor_reject_rate = 0.0;

    std::vector<NodeConfusion> confusion;
};

/// Pure function of the log, so the summary can be recomputed from a
/// decision log file. Confusion labels are the claimants seen per verifier.
ExperimentMetrics compute_metrics(std::span<const DecisionRecord> log);

struct ExperimentResult {
    std::vector<SatelliteNode> nodes;
    /// k_train shots per device, for histograms and the KL matrix.
    std::vector<Counts> characterization;
    std::vector<NoiseFingerprint> device_references;
    SquareMatrix kl;
    std::vector<DecisionRecord> log;
    ExperimentMetrics metrics;
    std::optional<AdversaryConfig> adversary;
};

/// Training, all-pairs genuine trials and optional adversary trials.
ExperimentResult run_experiment(const ConstellationConfig &config);

}  // namespace qnf
