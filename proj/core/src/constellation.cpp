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

#include "qnf/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qnf/errors.hpp"
#include "qnf/rng.hpp"

namespace qnf {

namespace {

// Stream labels. Renaming one changes every artifact derived from it.
const uint64_t kDeviceStream = label_hash("device");
const uint64_t kTrainStream = label_hash("train");
const uint64_t kValidateStream = label_hash("validate");
const uint64_t kAuthStream = label_hash("auth");
const uint64_t kMitmStream = label_hash("mitm");
const uint64_t kCharacterizeStream = label_hash("characterize");
const uint64_t kAdversaryStream = label_hash("adversary");
const uint64_t kImpostorStream = label_hash("impostor");

struct HoldoutPlan {
    uint64_t train_shots;
    uint64_t batches;
};

HoldoutPlan plan_holdout(const ConstellationConfig &config) {
    const auto held = static_cast<uint64_t>(
        std::floor(config.holdout_fraction * static_cast<double>(config.k_train) + 1e-9));
    const uint64_t batches = held / config.k;
    return {config.k_train - batches * config.k, batches};
}

bool in_range(const ConstellationConfig &config, NodeId id) { return id.value >= 1 && id.value <= config.m; }

void wrap_invalid(const std::string &path, auto &&fn) {
    try {
        fn();
    } catch (const InvalidArgument &e) {
        throw ConfigError(path, e.what());
    }
}

}  // namespace

void ConstellationConfig::validate() const {
    if (m < 2) throw ConfigError("m", "need at least 2 nodes, got " + std::to_string(m));
    if (n < kMinQubits || n > kMaxQubits) {
        throw ConfigError("n", "qubit count must be in [1, 12], got " + std::to_string(n));
    }
    if (classifier.domain == Domain::ErrorStatesOnly && n < 2) {
        throw ConfigError("n", "error-state fingerprints need n >= 2");
    }
    if (k < 1) throw ConfigError("k", "must be >= 1");
    if (k_train < 5 * k) {
        throw ConfigError("k_train", "must be >= 5 * k (" + std::to_string(5 * k) + "), got " + std::to_string(k_train));
    }
    if (trials_per_pair < 1) throw ConfigError("trials_per_pair", "must be >= 1");
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
        throw ConfigError("holdout_fraction", "must be in (0, 1)");
    }
    if (plan_holdout(*this).batches < 1) {
        throw ConfigError("holdout_fraction", "held-out shots do not fit one batch of k shots");
    }
    if (!(classifier.smoothing.alpha >= 0.0) || !std::isfinite(classifier.smoothing.alpha)) {
        throw ConfigError("classifier.alpha", "must be finite and >= 0");
    }
    if (!(classifier.margin >= 1.0) || !std::isfinite(classifier.margin)) {
        throw ConfigError("classifier.gamma", "must be finite and >= 1");
    }
    if (!(classifier.rejection_threshold >= 0.0) || !std::isfinite(classifier.rejection_threshold)) {
        throw ConfigError("classifier.threshold", "must be finite and >= 0");
    }
    wrap_invalid("device_ranges", [&] { device_ranges.validate(); });
    if (!devices.empty()) {
        if (devices.size() != m) {
            throw ConfigError("devices", "expected " + std::to_string(m) + " devices, got " +
                                             std::to_string(devices.size()));
        }
        for (size_t i = 0; i < devices.size(); ++i) {
            const std::string path = "devices[" + std::to_string(i) + "]";
            wrap_invalid(path, [&] { devices[i].validate(); });
            if (devices[i].readout.size() != static_cast<size_t>(n)) {
                throw ConfigError(path + ".readout", "expected " + std::to_string(n) + " qubits");
            }
        }
    }
    if (adjacency) {
        for (size_t i = 0; i < adjacency->size(); ++i) {
            const auto &[a, b] = (*adjacency)[i];
            const std::string path = "adjacency[" + std::to_string(i) + "]";
            if (!in_range(*this, a) || !in_range(*this, b)) throw ConfigError(path, "node id out of range");
            if (a == b) throw ConfigError(path, "self link");
        }
    }
    if (adversary) {
        const auto &adv = *adversary;
        if (!in_range(*this, adv.claimed_id)) throw ConfigError("adversary.claimed_id", "node id out of range");
        if (!in_range(*this, adv.verifier_id)) throw ConfigError("adversary.verifier_id", "node id out of range");
        if (adv.claimed_id == adv.verifier_id) {
            throw ConfigError("adversary.verifier_id", "verifier cannot be the impersonated node");
        }
        if (!are_neighbors(adv.verifier_id, adv.claimed_id)) {
            throw ConfigError("adversary.claimed_id", "verifier never trains on the impersonated node");
        }
        if (!(adv.readout_offset > 0.0 && adv.readout_offset < 0.25)) {
            throw ConfigError("adversary.readout_offset", "must be in (0, 0.25)");
        }
        if (adv.trials < 1) throw ConfigError("adversary.trials", "must be >= 1");
        if (adv.device) {
            wrap_invalid("adversary.device", [&] { adv.device->validate(); });
            if (adv.device->readout.size() != static_cast<size_t>(n)) {
                throw ConfigError("adversary.device.readout", "expected " + std::to_string(n) + " qubits");
            }
        }
    }
}

std::vector<std::string> ConstellationConfig::warnings() const {
    std::vector<std::string> out;
    if (k_train < 10 * k) {
        out.push_back("k_train (" + std::to_string(k_train) + ") is below 10 * k (" + std::to_string(10 * k) +
                      "); fingerprints may be noisy");
    }
    return out;
}

std::vector<NodeId> ConstellationConfig::node_ids() const {
    std::vector<NodeId> ids;
    ids.reserve(m);
    for (uint32_t i = 1; i <= m; ++i) ids.push_back(NodeId{i});
    return ids;
}

bool ConstellationConfig::are_neighbors(NodeId a, NodeId b) const {
    if (a == b) return false;
    if (!adjacency) return true;
    return std::any_of(adjacency->begin(), adjacency->end(), [&](const auto &edge) {
        return (edge.first == a && edge.second == b) || (edge.first == b && edge.second == a);
    });
}

SatelliteNode::SatelliteNode(NodeId id, DeviceNoiseParams device, ClassifierConfig classifier)
    : id_(id), device_(std::move(device)), classifier_(classifier) {
    device_.validate();
    classifier_.validate();
}

const NoiseFingerprint *SatelliteNode::profile_for(NodeId peer) const {
    auto it = std::find_if(profiles_.begin(), profiles_.end(), [peer](const auto &p) { return p.node_id == peer; });
    return it == profiles_.end() ? nullptr : &*it;
}

std::optional<double> SatelliteNode::threshold_for(NodeId peer) const {
    for (size_t i = 0; i < profiles_.size(); ++i) {
        if (profiles_[i].node_id == peer) return thresholds_[i];
    }
    return std::nullopt;
}

void SatelliteNode::enroll(NoiseFingerprint profile, double threshold) {
    if (profile.node_id == id_) {
        throw InvalidArgument("node " + to_string(id_) + " cannot enroll its own fingerprint");
    }
    if (profile_for(profile.node_id) != nullptr) {
        throw InvalidArgument("node " + to_string(profile.node_id) + " is already enrolled");
    }
    if (!(threshold >= 0.0)) {
        throw InvalidArgument("threshold must be >= 0");
    }
    auto pos = std::lower_bound(profiles_.begin(), profiles_.end(), profile.node_id,
                                [](const NoiseFingerprint &p, NodeId id) { return p.node_id < id; });
    const auto offset = pos - profiles_.begin();
    profiles_.insert(pos, std::move(profile));
    thresholds_.insert(thresholds_.begin() + offset, threshold);
}

AuthDecision SatelliteNode::classify(const Counts &observed) const {
    if (!trained_ || profiles_.empty()) {
        throw ProtocolStateError("node " + to_string(id_) + " has not completed training");
    }
    return qnf::classify(observed, profiles_, thresholds_, classifier_);
}

std::vector<DeviceNoiseParams> constellation_devices(const ConstellationConfig &config) {
    if (!config.devices.empty()) {
        return config.devices;
    }
    std::vector<DeviceNoiseParams> devices;
    devices.reserve(config.m);
    for (NodeId id : config.node_ids()) {
        devices.push_back(draw_device(config.n, config.device_ranges,
                                      derive_seed(config.master_seed, {kDeviceStream, id.value})));
    }
    return devices;
}

std::vector<SatelliteNode> run_training_phase(const ConstellationConfig &config) {
    config.validate();
    const auto devices = constellation_devices(config);
    const auto ids = config.node_ids();
    const Circuit ghz = build_ghz_circuit(config.n);
    const HoldoutPlan plan = plan_holdout(config);

    std::vector<SatelliteNode> nodes;
    nodes.reserve(ids.size());
    for (size_t i = 0; i < ids.size(); ++i) {
        nodes.emplace_back(ids[i], devices[i], config.classifier);
    }

    for (auto &verifier : nodes) {
        const uint64_t v = verifier.id().value;
        for (size_t j = 0; j < ids.size(); ++j) {
            const NodeId peer = ids[j];
            if (!config.are_neighbors(verifier.id(), peer)) continue;

            const Counts train = sample_shots(devices[j], ghz, plan.train_shots,
                                              derive_seed(config.master_seed, {kTrainStream, v, peer.value}));
            NoiseFingerprint fp = train_fingerprint(peer, train, config.classifier);

            double threshold = config.classifier.rejection_threshold;
            if (config.classifier.mode == ClassifierMode::MinKL) {
                std::vector<Counts> validation;
                validation.reserve(plan.batches);
                for (uint64_t b = 0; b < plan.batches; ++b) {
                    validation.push_back(sample_shots(
                        devices[j], ghz, config.k,
                        derive_seed(config.master_seed, {kValidateStream, v, peer.value, b})));
                }
                threshold = calibrate_threshold(fp, validation, config.classifier.margin, config.classifier.direction);
            }
            verifier.enroll(std::move(fp), threshold);
        }
        verifier.mark_trained();
    }
    return nodes;
}

AuthDecision authenticate_peer(const SatelliteNode &verifier, const SatelliteNode &claimant, uint64_t k,
                               uint64_t seed) {
    if (!verifier.trained()) {
        throw ProtocolStateError("node " + to_string(verifier.id()) + " has not completed training");
    }
    if (k == 0) {
        throw InvalidArgument("authentication needs k >= 1 shots");
    }
    const int n = static_cast<int>(claimant.device().readout.size());
    const Counts observed = sample_shots(claimant.device(), build_ghz_circuit(n), k, seed);
    AuthDecision decision = verifier.classify(observed);
    if (verifier.profile_for(claimant.id()) == nullptr) {
        decision.accepted.reset();
    }
    return decision;
}

DeviceNoiseParams make_impostor_device(const DeviceNoiseParams &genuine, double offset, uint64_t seed) {
    genuine.validate();
    if (!(offset > 0.0 && offset < 0.25)) {
        throw InvalidArgument("impostor readout offset must be in (0, 0.25)");
    }
    Xoshiro256 rng(derive_seed(seed, {kImpostorStream}));
    auto shift = [&](double e) {
        const bool up = rng.uniform() < 0.5;
        const double raised = e + offset;
        const double lowered = e - offset;
        if (up) return raised < 0.5 ? raised : lowered;
        return lowered >= 0.0 ? lowered : raised;
    };
    DeviceNoiseParams out = genuine;
    out.device_seed = seed;
    for (auto &r : out.readout) {
        r.p01 = shift(r.p01);
        r.p10 = shift(r.p10);
    }
    out.validate();
    return out;
}

AuthDecision run_mitm_attack(const SatelliteNode &verifier, const AdversaryConfig &adversary, uint64_t k,
                             uint64_t seed) {
    if (!verifier.trained()) {
        throw ProtocolStateError("node " + to_string(verifier.id()) + " has not completed training");
    }
    if (verifier.id() != adversary.verifier_id) {
        throw InvalidArgument("adversary targets verifier " + to_string(adversary.verifier_id) + ", not " +
                              to_string(verifier.id()));
    }
    if (k == 0) {
        throw InvalidArgument("authentication needs k >= 1 shots");
    }
    const int n = static_cast<int>(adversary.device.readout.size());
    const Counts observed = sample_shots(adversary.device, build_ghz_circuit(n), k, seed);
    AuthDecision decision = verifier.classify(observed);
    if (verifier.profile_for(adversary.claimed_id) == nullptr) {
        decision.accepted.reset();
    }
    return decision;
}

ExperimentMetrics compute_metrics(std::span<const DecisionRecord> log) {
    ExperimentMetrics m;
    std::map<NodeId, std::pair<std::set<NodeId>, std::set<NodeId>>> seen;  // claimants, columns
    for (const auto &r : log) {
        if (r.kind == TrialKind::Genuine) {
            ++m.genuine_trials;
            if (r.decided == r.claimed) {
                ++m.genuine_accepts;
            } else if (r.decided) {
                ++m.genuine_misidentified;
            }
            auto &[claimants, columns] = seen[r.verifier];
            claimants.insert(r.claimed);
            columns.insert(r.claimed);
            if (r.decided) columns.insert(*r.decided);
        } else {
            ++m.impostor_trials;
            if (r.decided == r.claimed) {
                ++m.impostor_accepts;
            } else {
                ++m.impostor_rejects;
                if (r.decided) ++m.impostor_misidentified;
            }
        }
    }
    auto ratio = [](uint64_t a, uint64_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
    m.genuine_accept_rate = ratio(m.genuine_accepts, m.genuine_trials);
    m.false_reject_rate = ratio(m.genuine_trials - m.genuine_accepts, m.genuine_trials);
    m.false_accept_rate = ratio(m.impostor_accepts, m.impostor_trials);
    m.impostor_reject_rate = ratio(m.impostor_rejects, m.impostor_trials);

    auto position = [](const std::vector<NodeId> &sorted, NodeId id) {
        return static_cast<size_t>(std::lower_bound(sorted.begin(), sorted.end(), id) - sorted.begin());
    };
    for (const auto &[verifier, sets] : seen) {
        NodeConfusion c{verifier, {sets.first.begin(), sets.first.end()}, {sets.second.begin(), sets.second.end()}, {}};
        c.rows.assign(c.claimants.size(), std::vector<uint64_t>(c.columns.size() + 1, 0));
        for (const auto &r : log) {
            if (r.kind != TrialKind::Genuine || r.verifier != verifier) continue;
            const size_t col = r.decided ? position(c.columns, *r.decided) : c.columns.size();
            c.rows[position(c.claimants, r.claimed)][col] += 1;
        }
        m.confusion.push_back(std::move(c));
    }
    return m;
}

ExperimentResult run_experiment(const ConstellationConfig &config) {
    config.validate();
    const Circuit ghz = build_ghz_circuit(config.n);
    auto nodes = run_training_phase(config);

    std::vector<Counts> characterization;
    std::vector<NoiseFingerprint> references;
    std::vector<std::vector<double>> reference_probs;
    for (const auto &node : nodes) {
        characterization.push_back(sample_shots(node.device(), ghz, config.k_train,
                                                derive_seed(config.master_seed, {kCharacterizeStream, node.id().value})));
        references.push_back(train_fingerprint(node.id(), characterization.back(), config.classifier));
        const auto probs = references.back().reference_probs();
        reference_probs.emplace_back(probs.begin(), probs.end());
    }
    SquareMatrix kl = kl_matrix(std::span<const std::vector<double>>(reference_probs));

    std::vector<DecisionRecord> log;
    uint64_t trial = 0;
    for (const auto &verifier : nodes) {
        for (const auto &claimant : nodes) {
            if (verifier.profile_for(claimant.id()) == nullptr) continue;
            for (uint32_t t = 0; t < config.trials_per_pair; ++t) {
                const uint64_t seed =
                    derive_seed(config.master_seed, {kAuthStream, verifier.id().value, claimant.id().value, t});
                const AuthDecision d = authenticate_peer(verifier, claimant, config.k, seed);
                log.push_back({trial++, TrialKind::Genuine, verifier.id(), claimant.id(), d.accepted, d.best_candidate,
                               d.best_score, seed});
            }
        }
    }

    std::optional<AdversaryConfig> adversary;
    if (config.adversary) {
        const auto &settings = *config.adversary;
        const SatelliteNode &impersonated = nodes[settings.claimed_id.value - 1];
        const SatelliteNode &verifier = nodes[settings.verifier_id.value - 1];
        DeviceNoiseParams device;
        if (settings.device) {
            device = *settings.device;
        } else if (settings.kind == AdversaryKind::IdenticalDevice) {
            device = impersonated.device();
        } else {
            const uint64_t device_seed =
                settings.device_seed.value_or(derive_seed(config.master_seed, {kAdversaryStream}));
            device = make_impostor_device(impersonated.device(), settings.readout_offset, device_seed);
        }
        adversary = AdversaryConfig{std::move(device), settings.claimed_id, settings.verifier_id};
        for (uint32_t t = 0; t < settings.trials; ++t) {
            const uint64_t seed = derive_seed(config.master_seed,
                                              {kMitmStream, settings.verifier_id.value, settings.claimed_id.value, t});
            const AuthDecision d = run_mitm_attack(verifier, *adversary, config.k, seed);
            log.push_back({trial++, TrialKind::Impostor, verifier.id(), settings.claimed_id, d.accepted,
                           d.best_candidate, d.best_score, seed});
        }
    }

    ExperimentMetrics metrics = compute_metrics(log);
    return ExperimentResult{std::move(nodes),  std::move(characterization), std::move(references), std::move(kl),
                            std::move(log),    std::move(metrics),          std::move(adversary)};
}

}  // namespace qnf
