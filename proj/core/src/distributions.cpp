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

#include "qnf/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qnf/errors.hpp"

namespace qnf {

namespace {

void check_probabilities(std::span<const double> probs, const char *what) {
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw InvalidArgument(std::string(what) + " has a negative or non-finite entry");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kDistributionTolerance) {
        throw InvalidArgument(std::string(what) + " sums to " + std::to_string(total) + ", not 1");
    }
}

void check_same_length(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw InvalidArgument("distribution lengths differ: " + std::to_string(p.size()) + " vs " +
                              std::to_string(q.size()));
    }
}

}  // namespace

OutcomeDistribution::OutcomeDistribution(int n, std::vector<double> probs) : n_(n), probs_(std::move(probs)) {
    check_qubit_count(n);
    if (probs_.size() != state_dimension(n)) {
        throw InvalidArgument("outcome distribution needs 2^n entries");
    }
    check_probabilities(probs_, "outcome distribution");
}

ErrorStateDistribution::ErrorStateDistribution(int n, std::vector<double> probs) : n_(n), probs_(std::move(probs)) {
    check_qubit_count(n);
    if (probs_.size() != state_dimension(n) - 2) {
        throw InvalidArgument("error-state distribution needs 2^n - 2 entries");
    }
    check_probabilities(probs_, "error-state distribution");
}

OutcomeDistribution empirical_from_counts(const Counts &counts) {
    return smooth(counts, SmoothingPolicy{0.0});
}

OutcomeDistribution smooth(const Counts &counts, SmoothingPolicy policy) {
    if (counts.shots() == 0) {
        throw InvalidArgument("counts have zero shots");
    }
    if (!(policy.alpha >= 0.0) || !std::isfinite(policy.alpha)) {
        throw InvalidArgument("smoothing alpha must be finite and >= 0");
    }
    const auto hist = counts.histogram();
    const double denom = static_cast<double>(counts.shots()) + policy.alpha * static_cast<double>(hist.size());
    std::vector<double> probs(hist.size());
    for (size_t x = 0; x < hist.size(); ++x) {
        probs[x] = (static_cast<double>(hist[x]) + policy.alpha) / denom;
    }
    return OutcomeDistribution(counts.num_qubits(), std::move(probs));
}

ErrorStateDistribution restrict_to_error_states(const OutcomeDistribution &dist) {
    const auto probs = dist.probs();
    const auto inner = probs.subspan(1, probs.size() - 2);
    double mass = 0.0;
    for (double p : inner) mass += p;
    if (!(mass > 0.0)) {
        throw NoErrorMass("distribution has no mass on error states");
    }
    std::vector<double> out(inner.size());
    std::transform(inner.begin(), inner.end(), out.begin(), [mass](double p) { return p / mass; });
    return ErrorStateDistribution(dist.num_qubits(), std::move(out));
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    check_same_length(p, q);
    double total = 0.0;
    for (size_t x = 0; x < p.size(); ++x) {
        if (p[x] <= 0.0) continue;
        if (q[x] <= 0.0) {
            throw DivergenceUndefined("q(" + std::to_string(x) + ") = 0 where p > 0");
        }
        total += p[x] * std::log(p[x] / q[x]);
    }
    // Rounding can push a sum of near-cancelling terms slightly below zero.
    return std::max(total, 0.0);
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    check_same_length(p, q);
    double total = 0.0;
    for (size_t x = 0; x < p.size(); ++x) {
        total += std::abs(p[x] - q[x]);
    }
    return 0.5 * total;
}

SquareMatrix kl_matrix(std::span<const std::vector<double>> dists) {
    SquareMatrix out(dists.size());
    for (size_t i = 0; i < dists.size(); ++i) {
        for (size_t j = 0; j < dists.size(); ++j) {
            out(i, j) = (i == j) ? 0.0 : kl_divergence(dists[i], dists[j]);
        }
    }
    return out;
}

}  // namespace qnf
