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

#include "qnf/harness.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "qnf/errors.hpp"
#include "qnf/formats.hpp"
#include "qnf/rng.hpp"

namespace qnf {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string join(const std::string &path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string index_path(const std::string &path, size_t i) { return path + "[" + std::to_string(i) + "]"; }

// Typed access to one JSON object, reporting errors by dotted field path.
class ObjectReader {
   public:
    ObjectReader(const json &obj, std::string path, std::initializer_list<std::string_view> allowed)
        : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
        for (const auto &[key, value] : obj_.items()) {
            bool known = false;
            for (auto a : allowed) known = known || a == key;
            if (!known) throw ConfigError(join(path_, key), "unknown field");
        }
    }

    bool has(std::string_view key) const { return obj_.contains(std::string(key)); }
    const json &at(std::string_view key) const { return obj_.at(std::string(key)); }
    std::string path(std::string_view key) const { return join(path_, key); }

    std::optional<uint64_t> u64(std::string_view key) const {
        if (!has(key)) return std::nullopt;
        const auto &v = at(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<int64_t>() < 0)) {
            throw ConfigError(path(key), "expected a nonnegative integer");
        }
        return v.get<uint64_t>();
    }

    std::optional<uint32_t> u32(std::string_view key) const {
        auto v = u64(key);
        if (v && *v > 0xFFFFFFFFULL) throw ConfigError(path(key), "value too large");
        return v ? std::optional<uint32_t>(static_cast<uint32_t>(*v)) : std::nullopt;
    }

    std::optional<double> real(std::string_view key) const {
        if (!has(key)) return std::nullopt;
        if (!at(key).is_number()) throw ConfigError(path(key), "expected a number");
        return at(key).get<double>();
    }

    std::optional<std::string> string(std::string_view key) const {
        if (!has(key)) return std::nullopt;
        if (!at(key).is_string()) throw ConfigError(path(key), "expected a string");
        return at(key).get<std::string>();
    }

   private:
    const json &obj_;
    std::string path_;
};

double real_at(const json &v, const std::string &path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
}

std::pair<double, double> read_interval(const json &v, const std::string &path) {
    if (!v.is_array() || v.size() != 2) throw ConfigError(path, "expected [min, max]");
    return {real_at(v[0], index_path(path, 0)), real_at(v[1], index_path(path, 1))};
}

DeviceNoiseParams read_device(const json &v, const std::string &path) {
    ObjectReader r(v, path, {"readout", "p1", "p2", "device_seed"});
    if (!r.has("readout")) throw ConfigError(r.path("readout"), "required field is missing");
    const auto &readout = r.at("readout");
    if (!readout.is_array()) throw ConfigError(r.path("readout"), "expected an array of [p01, p10] pairs");
    DeviceNoiseParams d;
    for (size_t q = 0; q < readout.size(); ++q) {
        const auto [p01, p10] = read_interval(readout[q], index_path(r.path("readout"), q));
        d.readout.push_back({p01, p10});
    }
    d.p1 = r.real("p1").value_or(0.0);
    d.p2 = r.real("p2").value_or(0.0);
    d.device_seed = r.u64("device_seed").value_or(0);
    try {
        d.validate();
    } catch (const InvalidArgument &e) {
        throw ConfigError(path, e.what());
    }
    return d;
}

ordered_json device_json(const DeviceNoiseParams &d) {
    ordered_json j;
    ordered_json readout = ordered_json::array();
    for (const auto &r : d.readout) readout.push_back({round_real(r.p01), round_real(r.p10)});
    j["readout"] = std::move(readout);
    j["p1"] = round_real(d.p1);
    j["p2"] = round_real(d.p2);
    j["device_seed"] = d.device_seed;
    return j;
}

std::string direction_name(KlDirection d) {
    return d == KlDirection::ObservedToReference ? "observed-to-reference" : "reference-to-observed";
}

template <typename T>
T wrap_parse(const std::string &path, T (*parse)(std::string_view), const std::string &value) {
    try {
        return parse(value);
    } catch (const InvalidArgument &e) {
        throw ConfigError(path, e.what());
    }
}

ClassifierConfig read_classifier(const json &v, const std::string &path) {
    ObjectReader r(v, path, {"mode", "domain", "alpha", "gamma", "threshold", "kl_direction"});
    ClassifierConfig c;
    if (auto s = r.string("mode")) c.mode = wrap_parse(r.path("mode"), parse_mode, *s);
    if (auto s = r.string("domain")) c.domain = wrap_parse(r.path("domain"), parse_domain, *s);
    if (auto a = r.real("alpha")) c.smoothing.alpha = *a;
    if (auto g = r.real("gamma")) c.margin = *g;
    if (auto t = r.real("threshold")) c.rejection_threshold = *t;
    if (auto s = r.string("kl_direction")) {
        if (*s == "observed-to-reference") {
            c.direction = KlDirection::ObservedToReference;
        } else if (*s == "reference-to-observed") {
            c.direction = KlDirection::ReferenceToObserved;
        } else {
            throw ConfigError(r.path("kl_direction"), "expected observed-to-reference or reference-to-observed");
        }
    }
    return c;
}

AdversarySettings read_adversary(const json &v, const std::string &path) {
    ObjectReader r(v, path, {"kind", "claimed_id", "verifier_id", "readout_offset", "trials", "device_seed", "device"});
    AdversarySettings a;
    if (auto s = r.string("kind")) {
        if (*s == "regenerate") {
            a.kind = AdversaryKind::Regenerate;
        } else if (*s == "identical") {
            a.kind = AdversaryKind::IdenticalDevice;
        } else {
            throw ConfigError(r.path("kind"), "expected regenerate or identical");
        }
    }
    if (auto id = r.u32("claimed_id")) a.claimed_id = NodeId{*id};
    if (auto id = r.u32("verifier_id")) a.verifier_id = NodeId{*id};
    if (auto o = r.real("readout_offset")) a.readout_offset = *o;
    if (auto t = r.u32("trials")) a.trials = *t;
    a.device_seed = r.u64("device_seed");
    if (r.has("device")) a.device = read_device(r.at("device"), r.path("device"));
    return a;
}

}  // namespace

ConstellationConfig parse_config_json(std::string_view text, std::optional<uint64_t> seed_override) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception &e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }
    ObjectReader r(doc, "",
                   {"m", "n", "k", "k_train", "master_seed", "trials_per_pair", "holdout_fraction", "device_ranges",
                    "devices", "classifier", "adjacency", "adversary"});
    ConstellationConfig c;
    const auto m = r.u32("m");
    if (!m) throw ConfigError("m", "required field is missing");
    c.m = *m;
    if (auto n = r.u32("n")) {
        if (*n > static_cast<uint32_t>(kMaxQubits)) throw ConfigError("n", "qubit count must be in [1, 12]");
        c.n = static_cast<int>(*n);
    }
    if (auto k = r.u64("k")) c.k = *k;
    if (auto kt = r.u64("k_train")) c.k_train = *kt;
    if (auto t = r.u32("trials_per_pair")) c.trials_per_pair = *t;
    if (auto h = r.real("holdout_fraction")) c.holdout_fraction = *h;

    const auto seed = r.u64("master_seed");
    if (seed_override) {
        c.master_seed = *seed_override;
    } else if (seed) {
        c.master_seed = *seed;
    } else {
        throw ConfigError("master_seed", "required field is missing (or pass --seed)");
    }

    if (r.has("device_ranges")) {
        ObjectReader dr(r.at("device_ranges"), "device_ranges", {"readout", "p1", "p2"});
        if (dr.has("readout")) {
            std::tie(c.device_ranges.readout_min, c.device_ranges.readout_max) =
                read_interval(dr.at("readout"), dr.path("readout"));
        }
        if (dr.has("p1")) std::tie(c.device_ranges.p1_min, c.device_ranges.p1_max) = read_interval(dr.at("p1"), dr.path("p1"));
        if (dr.has("p2")) std::tie(c.device_ranges.p2_min, c.device_ranges.p2_max) = read_interval(dr.at("p2"), dr.path("p2"));
    }
    if (r.has("devices")) {
        const auto &devices = r.at("devices");
        if (!devices.is_array()) throw ConfigError("devices", "expected an array");
        for (size_t i = 0; i < devices.size(); ++i) {
            c.devices.push_back(read_device(devices[i], index_path("devices", i)));
        }
    }
    if (r.has("classifier")) c.classifier = read_classifier(r.at("classifier"), "classifier");
    if (r.has("adjacency")) {
        const auto &adj = r.at("adjacency");
        if (!adj.is_array()) throw ConfigError("adjacency", "expected an array of [a, b] pairs");
        std::vector<std::pair<NodeId, NodeId>> edges;
        for (size_t i = 0; i < adj.size(); ++i) {
            const auto &e = adj[i];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
                throw ConfigError(index_path("adjacency", i), "expected [node_id, node_id]");
            }
            edges.emplace_back(NodeId{e[0].get<uint32_t>()}, NodeId{e[1].get<uint32_t>()});
        }
        c.adjacency = std::move(edges);
    }
    if (r.has("adversary")) c.adversary = read_adversary(r.at("adversary"), "adversary");

    c.validate();
    return c;
}

DeviceNoiseParams parse_device_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception &e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }
    return read_device(doc, "device");
}

ConstellationConfig parse_config(const std::filesystem::path &path, std::optional<uint64_t> seed_override) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::runtime_error &e) {
        throw ConfigError("<file>", e.what());
    }
    return parse_config_json(text, seed_override);
}

std::string config_to_json(const ConstellationConfig &c) {
    ordered_json j;
    j["m"] = c.m;
    j["n"] = c.n;
    j["k"] = c.k;
    j["k_train"] = c.k_train;
    j["master_seed"] = c.master_seed;
    j["trials_per_pair"] = c.trials_per_pair;
    j["holdout_fraction"] = round_real(c.holdout_fraction);
    j["device_ranges"] = {
        {"readout", {round_real(c.device_ranges.readout_min), round_real(c.device_ranges.readout_max)}},
        {"p1", {round_real(c.device_ranges.p1_min), round_real(c.device_ranges.p1_max)}},
        {"p2", {round_real(c.device_ranges.p2_min), round_real(c.device_ranges.p2_max)}},
    };
    if (!c.devices.empty()) {
        ordered_json devices = ordered_json::array();
        for (const auto &d : c.devices) devices.push_back(device_json(d));
        j["devices"] = std::move(devices);
    }
    j["classifier"] = {
        {"mode", mode_name(c.classifier.mode)},
        {"domain", domain_name(c.classifier.domain)},
        {"alpha", round_real(c.classifier.smoothing.alpha)},
        {"gamma", round_real(c.classifier.margin)},
        {"threshold", round_real(c.classifier.rejection_threshold)},
        {"kl_direction", direction_name(c.classifier.direction)},
    };
    if (c.adjacency) {
        ordered_json adj = ordered_json::array();
        for (const auto &[a, b] : *c.adjacency) adj.push_back({a.value, b.value});
        j["adjacency"] = std::move(adj);
    }
    if (c.adversary) {
        const auto &a = *c.adversary;
        ordered_json adv;
        adv["kind"] = a.kind == AdversaryKind::Regenerate ? "regenerate" : "identical";
        adv["claimed_id"] = a.claimed_id.value;
        adv["verifier_id"] = a.verifier_id.value;
        adv["readout_offset"] = round_real(a.readout_offset);
        adv["trials"] = a.trials;
        if (a.device_seed) adv["device_seed"] = *a.device_seed;
        if (a.device) adv["device"] = device_json(*a.device);
        j["adversary"] = std::move(adv);
    }
    return j.dump(2) + "\n";
}

std::vector<std::string> preset_names() { return {"table1-analog", "fig4-analog"}; }

ConstellationConfig preset_config(std::string_view name, uint64_t seed) {
    ConstellationConfig c;
    c.m = 4;
    c.n = 5;
    c.k = 1000;
    c.k_train = 10000;
    c.master_seed = seed;
    // Both presets score whole outcome distributions, correct states included.
    c.classifier.domain = Domain::FullSpectrum;
    if (name == "table1-analog") {
        c.trials_per_pair = 100;
        c.adversary = AdversarySettings{};
    } else if (name == "fig4-analog") {
        c.trials_per_pair = 10;
    } else {
        std::string known;
        for (const auto &p : preset_names()) known += (known.empty() ? "" : ", ") + p;
        throw ConfigError("preset", "unknown preset '" + std::string(name) + "' (known: " + known + ")");
    }
    c.validate();
    return c;
}

std::vector<Artifact> render_experiment_artifacts(const ConstellationConfig &config, const ExperimentResult &result) {
    std::vector<Artifact> out;
    out.push_back({"config.json", config_to_json(config)});

    ordered_json devices;
    devices["rng"] = kRngAlgorithm;
    ordered_json nodes = ordered_json::array();
    for (const auto &node : result.nodes) {
        ordered_json entry = device_json(node.device());
        entry["node_id"] = node.id().value;
        nodes.push_back(std::move(entry));
    }
    devices["nodes"] = std::move(nodes);
    if (result.adversary) {
        ordered_json adv = device_json(result.adversary->device);
        adv["claimed_id"] = result.adversary->claimed_id.value;
        adv["verifier_id"] = result.adversary->verifier_id.value;
        devices["adversary"] = std::move(adv);
    }
    out.push_back({"devices.json", devices.dump(2) + "\n"});

    std::vector<NodeId> ids;
    std::vector<std::vector<double>> stored_references;
    for (size_t i = 0; i < result.nodes.size(); ++i) {
        const NodeId id = result.nodes[i].id();
        const std::string stem = "node" + to_string(id);
        ids.push_back(id);
        const Counts &counts = result.characterization[i];
        out.push_back({"histograms/" + stem + ".csv", write_histogram_csv(counts)});
        const auto empirical = empirical_from_counts(counts);
        out.push_back({"distributions/" + stem + ".csv",
                       write_distribution_csv(counts.num_qubits(), empirical.probs(), Domain::FullSpectrum)});
        std::string fp_json = write_fingerprint_json(result.device_references[i]);
        // The matrix is computed from the fingerprints as written, so the
        // `matrix` subcommand reproduces it from these files exactly.
        const StoredFingerprint stored = read_fingerprint_json(fp_json);
        const auto probs = stored.fingerprint.reference_probs();
        stored_references.emplace_back(probs.begin(), probs.end());
        out.push_back({"fingerprints/" + stem + ".json", std::move(fp_json)});
    }
    const SquareMatrix kl = kl_matrix(std::span<const std::vector<double>>(stored_references));
    out.push_back({"kl_matrix.csv", write_kl_matrix_csv(ids, kl)});
    out.push_back({"decisions.jsonl", write_decision_log(result.log)});
    out.push_back({"metrics.json", write_metrics_json(result.metrics)});
    return out;
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
        throw std::runtime_error("SHA-256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[digest[i] >> 4];
        hex += kHex[digest[i] & 0xF];
    }
    return hex;
}

Artifact render_manifest(const ConstellationConfig &config, const std::vector<Artifact> &artifacts) {
    ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["rng"] = kRngAlgorithm;
    j["master_seed"] = config.master_seed;
    j["config"] = ordered_json::parse(config_to_json(config));
    ordered_json list = ordered_json::array();
    for (const auto &a : artifacts) {
        list.push_back({{"path", a.path}, {"sha256", sha256_hex(a.content)}});
    }
    j["artifacts"] = std::move(list);
    return {"manifest.json", j.dump(2) + "\n"};
}

void write_artifacts(const std::filesystem::path &dir, const std::vector<Artifact> &artifacts) {
    for (const auto &a : artifacts) {
        const auto target = dir / std::filesystem::path(a.path);
        std::filesystem::create_directories(target.parent_path());
        std::ofstream f(target, std::ios::binary | std::ios::trunc);
        f.write(a.content.data(), static_cast<std::streamsize>(a.content.size()));
        if (!f) throw std::runtime_error("cannot write " + target.string());
    }
}

std::vector<std::string> verify_manifest(const std::filesystem::path &dir) {
    const auto manifest = json::parse(read_file(dir / "manifest.json"));
    std::vector<std::string> bad;
    for (const auto &entry : manifest.at("artifacts")) {
        const auto path = entry.at("path").get<std::string>();
        const auto file = dir / std::filesystem::path(path);
        if (!std::filesystem::exists(file) || sha256_hex(read_file(file)) != entry.at("sha256").get<std::string>()) {
            bad.push_back(path);
        }
    }
    return bad;
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace qnf
