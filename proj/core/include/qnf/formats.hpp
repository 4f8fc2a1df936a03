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

// Text formats for artifacts. Bitstrings print qubit n-1 first; real numbers
// print with 12 significant digits; divergences are in nats.
//
//   histogram CSV      bitstring,count          every index, ascending
//   distribution CSV   bitstring,probability    domain indices, ascending
//   KL matrix CSV      node,<id>...  then one row per id
//   fingerprint JSON   envelope around a distribution CSV payload
//   decision log       one JSON object per line

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qnf/constellation.hpp"
#include "qnf/distributions.hpp"
#include "qnf/fingerprinting.hpp"

namespace qnf {

inline constexpr std::string_view kFingerprintFormat = "qnfauth-fingerprint";
inline constexpr int kFingerprintVersion = 1;

/// "%.12g".
std::string format_real(double value);

/// value rounded to 12 significant digits.
double round_real(double value);

/// Index as n characters, most-significant qubit first.
std::string to_bitstring(size_t index, int n);

/// Inverse of to_bitstring. Throws InvalidArgument on characters other than
/// '0'/'1' or a length outside [1, 12].
size_t parse_bitstring(std::string_view bits);

std::string domain_name(Domain domain);
Domain parse_domain(std::string_view name);
std::string mode_name(ClassifierMode mode);
ClassifierMode parse_mode(std::string_view name);

std::string write_histogram_csv(const Counts &counts);

/// Rows may be sparse and in any order; missing bitstrings count 0. The qubit
/// count comes from the bitstring width. Throws InvalidArgument on malformed
/// input or duplicate rows.
Counts read_histogram_csv(std::string_view text);

/// probs must be in domain order (2^n or 2^n - 2 entries).
std::string write_distribution_csv(int n, std::span<const double> probs, Domain domain);

struct ParsedDistribution {
    int n = 0;
    std::vector<double> probs;
};

/// Expects exactly the rows of `domain`, ascending.
ParsedDistribution read_distribution_csv(std::string_view text, Domain domain);

struct StoredFingerprint {
    NoiseFingerprint fingerprint;
    std::optional<double> threshold;
};

std::string write_fingerprint_json(const NoiseFingerprint &fingerprint, std::optional<double> threshold = {});
StoredFingerprint read_fingerprint_json(std::string_view text);

std::string write_kl_matrix_csv(std::span<const NodeId> ids, const SquareMatrix &matrix);

std::string write_decision_json(const AuthDecision &decision);

std::string write_decision_log(std::span<const DecisionRecord> log);
std::vector<DecisionRecord> read_decision_log(std::string_view text);

std::string write_metrics_json(const ExperimentMetrics &metrics);

}  // namespace qnf
