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

#include "qnf/formats.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <set>

#include <json.hpp>

#include "qnf/errors.hpp"

namespace qnf {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    size_t start = 0;
    while (start < text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::pair<std::string_view, std::string_view> split_row(std::string_view line, size_t line_no) {
    const size_t comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
        throw InvalidArgument("line " + std::to_string(line_no) + ": expected two comma-separated fields");
    }
    return {line.substr(0, comma), line.substr(comma + 1)};
}

uint64_t parse_u64(std::string_view s, size_t line_no) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw InvalidArgument("line " + std::to_string(line_no) + ": '" + std::string(s) + "' is not a count");
    }
    return v;
}

double parse_real(std::string_view s, size_t line_no) {
    // from_chars for double is missing from older libstdc++; strtod on a copy.
    const std::string copy(s);
    char *end = nullptr;
    const double v = std::strtod(copy.c_str(), &end);
    if (copy.empty() || end != copy.c_str() + copy.size()) {
        throw InvalidArgument("line " + std::to_string(line_no) + ": '" + copy + "' is not a number");
    }
    return v;
}

std::optional<NodeId> optional_id(const ordered_json &j) {
    if (j.is_null()) return std::nullopt;
    return NodeId{j.get<uint32_t>()};
}

}  // namespace

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

double round_real(double value) { return std::strtod(format_real(value).c_str(), nullptr); }

std::string to_bitstring(size_t index, int n) {
    check_qubit_count(n);
    std::string out(static_cast<size_t>(n), '0');
    for (int b = 0; b < n; ++b) {
        if ((index >> b) & 1U) out[static_cast<size_t>(n - 1 - b)] = '1';
    }
    return out;
}

size_t parse_bitstring(std::string_view bits) {
    check_qubit_count(static_cast<int>(bits.size()));
    size_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw InvalidArgument("bitstring '" + std::string(bits) + "' has a non-binary digit");
        index = (index << 1) | static_cast<size_t>(c == '1');
    }
    return index;
}

std::string domain_name(Domain domain) { return domain == Domain::ErrorStatesOnly ? "error-only" : "full"; }

Domain parse_domain(std::string_view name) {
    if (name == "error-only") return Domain::ErrorStatesOnly;
    if (name == "full") return Domain::FullSpectrum;
    throw InvalidArgument("unknown domain '" + std::string(name) + "' (expected error-only or full)");
}

std::string mode_name(ClassifierMode mode) { return mode == ClassifierMode::MinKL ? "min-kl" : "multinomial"; }

ClassifierMode parse_mode(std::string_view name) {
    if (name == "min-kl") return ClassifierMode::MinKL;
    if (name == "multinomial") return ClassifierMode::MultinomialLikelihood;
    throw InvalidArgument("unknown mode '" + std::string(name) + "' (expected min-kl or multinomial)");
}

std::string write_histogram_csv(const Counts &counts) {
    std::string out = "bitstring,count\n";
    const auto hist = counts.histogram();
    for (size_t x = 0; x < hist.size(); ++x) {
        out += to_bitstring(x, counts.num_qubits());
        out += ',';
        out += std::to_string(hist[x]);
        out += '\n';
    }
    return out;
}

Counts read_histogram_csv(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0] != "bitstring,count") {
        throw InvalidArgument("histogram CSV must start with 'bitstring,count'");
    }
    if (lines.size() < 2) throw InvalidArgument("histogram CSV has no rows");
    int n = 0;
    std::vector<uint64_t> hist;
    std::set<size_t> seen;
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto [bits, count] = split_row(lines[i], i + 1);
        if (n == 0) {
            n = static_cast<int>(bits.size());
            check_qubit_count(n);
            hist.assign(state_dimension(n), 0);
        } else if (static_cast<int>(bits.size()) != n) {
            throw InvalidArgument("line " + std::to_string(i + 1) + ": bitstring width changes");
        }
        const size_t index = parse_bitstring(bits);
        if (!seen.insert(index).second) {
            throw InvalidArgument("line " + std::to_string(i + 1) + ": duplicate bitstring " + std::string(bits));
        }
        hist[index] = parse_u64(count, i + 1);
    }
    return Counts(n, std::move(hist));
}

std::string write_distribution_csv(int n, std::span<const double> probs, Domain domain) {
    check_qubit_count(n);
    const size_t first = domain == Domain::ErrorStatesOnly ? 1 : 0;
    const size_t expected = domain == Domain::ErrorStatesOnly ? state_dimension(n) - 2 : state_dimension(n);
    if (probs.size() != expected) {
        throw InvalidArgument("distribution has " + std::to_string(probs.size()) + " entries, domain needs " +
                              std::to_string(expected));
    }
    std::string out = "bitstring,probability\n";
    for (size_t i = 0; i < probs.size(); ++i) {
        out += to_bitstring(i + first, n);
        out += ',';
        out += format_real(probs[i]);
        out += '\n';
    }
    return out;
}

ParsedDistribution read_distribution_csv(std::string_view text, Domain domain) {
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0] != "bitstring,probability") {
        throw InvalidArgument("distribution CSV must start with 'bitstring,probability'");
    }
    if (lines.size() < 2) throw InvalidArgument("distribution CSV has no rows");
    ParsedDistribution out;
    const size_t first = domain == Domain::ErrorStatesOnly ? 1 : 0;
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto [bits, prob] = split_row(lines[i], i + 1);
        if (out.n == 0) out.n = static_cast<int>(bits.size());
        if (static_cast<int>(bits.size()) != out.n) {
            throw InvalidArgument("line " + std::to_string(i + 1) + ": bitstring width changes");
        }
        if (parse_bitstring(bits) != out.probs.size() + first) {
            throw InvalidArgument("line " + std::to_string(i + 1) + ": rows must list the domain in ascending order");
        }
        out.probs.push_back(parse_real(prob, i + 1));
    }
    const size_t expected = domain == Domain::ErrorStatesOnly ? state_dimension(out.n) - 2 : state_dimension(out.n);
    if (out.probs.size() != expected) {
        throw InvalidArgument("distribution CSV has " + std::to_string(out.probs.size()) + " rows, domain needs " +
                              std::to_string(expected));
    }
    return out;
}

std::string write_fingerprint_json(const NoiseFingerprint &fingerprint, std::optional<double> threshold) {
    ordered_json j;
    j["format"] = kFingerprintFormat;
    j["version"] = kFingerprintVersion;
    j["node_id"] = fingerprint.node_id.value;
    j["n"] = fingerprint.num_qubits();
    j["domain"] = domain_name(fingerprint.domain());
    j["alpha"] = round_real(fingerprint.alpha);
    j["training_shots"] = fingerprint.training_shots;
    if (threshold) j["threshold"] = round_real(*threshold);
    j["units"] = "nats";
    j["distribution_csv"] =
        write_distribution_csv(fingerprint.num_qubits(), fingerprint.reference_probs(), fingerprint.domain());
    return j.dump(2) + "\n";
}

StoredFingerprint read_fingerprint_json(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw InvalidArgument(std::string("fingerprint is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kFingerprintFormat) {
            throw InvalidArgument("not a fingerprint file (format field)");
        }
        if (j.at("version").get<int>() != kFingerprintVersion) {
            throw InvalidArgument("unsupported fingerprint version");
        }
        const Domain domain = parse_domain(j.at("domain").get<std::string>());
        const int n = j.at("n").get<int>();
        ParsedDistribution dist = read_distribution_csv(j.at("distribution_csv").get<std::string>(), domain);
        if (dist.n != n) throw InvalidArgument("fingerprint n does not match its distribution payload");

        const NodeId id{j.at("node_id").get<uint32_t>()};
        const auto training_shots = j.at("training_shots").get<uint64_t>();
        const auto alpha = j.at("alpha").get<double>();
        if (training_shots < 1) throw InvalidArgument("fingerprint training_shots must be >= 1");
        if (!(alpha >= 0.0)) throw InvalidArgument("fingerprint alpha must be >= 0");

        std::optional<double> threshold;
        if (j.contains("threshold")) {
            threshold = j.at("threshold").get<double>();
            if (!(*threshold >= 0.0)) throw InvalidArgument("fingerprint threshold must be >= 0");
        }
        if (domain == Domain::ErrorStatesOnly) {
            return {NoiseFingerprint{id, ErrorStateDistribution(n, std::move(dist.probs)), training_shots, alpha},
                    threshold};
        }
        return {NoiseFingerprint{id, OutcomeDistribution(n, std::move(dist.probs)), training_shots, alpha},
                threshold};
    } catch (const nlohmann::json::exception &e) {
        throw InvalidArgument(std::string("malformed fingerprint: ") + e.what());
    }
}

std::string write_kl_matrix_csv(std::span<const NodeId> ids, const SquareMatrix &matrix) {
    if (ids.size() != matrix.dim()) throw InvalidArgument("one id per matrix row required");
    std::string out = "node";
    for (NodeId id : ids) out += "," + to_string(id);
    out += '\n';
    for (size_t i = 0; i < ids.size(); ++i) {
        out += to_string(ids[i]);
        for (size_t j = 0; j < ids.size(); ++j) {
            out += ',';
            out += format_real(matrix(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string write_decision_json(const AuthDecision &decision) {
    ordered_json j;
    j["verdict"] = decision.is_accept() ? "accept" : "reject";
    j["decided"] = decision.accepted ? ordered_json(decision.accepted->value) : ordered_json(nullptr);
    j["best_candidate"] = decision.best_candidate.value;
    j["best_score"] = round_real(decision.best_score);
    ordered_json scores = ordered_json::object();
    for (const auto &[id, score] : decision.scores) scores[to_string(id)] = round_real(score);
    j["scores"] = std::move(scores);
    return j.dump(2) + "\n";
}

std::string write_decision_log(std::span<const DecisionRecord> log) {
    std::string out;
    for (const auto &r : log) {
        ordered_json j;
        j["trial"] = r.trial;
        j["kind"] = r.kind == TrialKind::Genuine ? "genuine" : "impostor";
        j["verifier"] = r.verifier.value;
        j["claimed"] = r.claimed.value;
        j["verdict"] = r.decided ? "accept" : "reject";
        j["decided"] = r.decided ? ordered_json(r.decided->value) : ordered_json(nullptr);
        j["best_candidate"] = r.best_candidate.value;
        j["best_score"] = round_real(r.best_score);
        j["seed"] = r.seed;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<DecisionRecord> read_decision_log(std::string_view text) {
    std::vector<DecisionRecord> out;
    const auto lines = split_lines(text);
    for (size_t i = 0; i < lines.size(); ++i) {
        try {
            const auto j = ordered_json::parse(lines[i]);
            DecisionRecord r;
            r.trial = j.at("trial").get<uint64_t>();
            const auto kind = j.at("kind").get<std::string>();
            if (kind != "genuine" && kind != "impostor") throw InvalidArgument("unknown trial kind " + kind);
            r.kind = kind == "genuine" ? TrialKind::Genuine : TrialKind::Impostor;
            r.verifier = NodeId{j.at("verifier").get<uint32_t>()};
            r.claimed = NodeId{j.at("claimed").get<uint32_t>()};
            r.decided = optional_id(j.at("decided"));
            r.best_candidate = NodeId{j.at("best_candidate").get<uint32_t>()};
            r.best_score = j.at("best_score").get<double>();
            r.seed = j.at("seed").get<uint64_t>();
            out.push_back(r);
        } catch (const nlohmann::json::exception &e) {
            throw InvalidArgument("decision log line " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return out;
}

std::string write_metrics_json(const ExperimentMetrics &m) {
    ordered_json j;
    j["units"] = {{"kl", "nats"}};
    j["genuine_trials"] = m.genuine_trials;
    j["genuine_accepts"] = m.genuine_accepts;
    j["genuine_misidentified"] = m.genuine_misidentified;
    j["impostor_trials"] = m.impostor_trials;
    j["impostor_accepts"] = m.impostor_accepts;
    j["impostor_rejects"] = m.impostor_rejects;
    j["impostor_misidentified"] = m.impostor_misidentified;
    j["genuine_accept_rate"] = round_real(m.genuine_accept_rate);
    j["false_accept_rate"] = round_real(m.false_accept_rate);
    j["false_reject_rate"] = round_real(m.false_reject_rate);
    j["impostor_reject_rate"] = round_real(m.impostor_reject_rate);
    ordered_json confusion = ordered_json::array();
    for (const auto &c : m.confusion) {
        ordered_json entry;
        entry["verifier"] = c.verifier.value;
        ordered_json claimants = ordered_json::array();
        for (NodeId id : c.claimants) claimants.push_back(id.value);
        ordered_json columns = ordered_json::array();
        for (NodeId id : c.columns) columns.push_back(to_string(id));
        columns.push_back("reject");
        entry["claimants"] = std::move(claimants);
        entry["columns"] = std::move(columns);
        entry["rows"] = c.rows;
        confusion.push_back(std::move(entry));
    }
    j["confusion"] = std::move(confusion);
    return j.dump(2) + "\n";
}

}  // namespace qnf
