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

// Probability vectors over measurement outcomes, and the divergences used to
// compare them. All logarithms are natural: divergences are in nats.

#pragma once

#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

#include "qnf/quantum_sim.hpp"

namespace qnf {

inline constexpr double kDistributionTolerance = 1e-9;

/// Probabilities over all 2^n basis states, indexed like Counts.
class OutcomeDistribution {
   public:
    /// Throws InvalidArgument unless probs has 2^n nonnegative entries summing
    /// to 1 within kDistributionTolerance.
    OutcomeDistribution(int n, std::vector<double> probs);

    int num_qubits() const noexcept { return n_; }
    std::span<const double> probs() const noexcept { return probs_; }
    double operator[](size_t index) const { return probs_.at(index); }
    size_t size() const noexcept { return probs_.size(); }

    bool operator==(const OutcomeDistribution &) const = default;

   private:
    int n_;
    std::vector<double> probs_;
};

/// Probabilities over the 2^n - 2 error states. Entry k corresponds to basis
/// index k + 1; the all-zeros and all-ones outcomes are excluded.
class ErrorStateDistribution {
   public:
    ErrorStateDistribution(int n, std::vector<double> probs);

    int num_qubits() const noexcept { return n_; }
    std::span<const double> probs() const noexcept { return probs_; }
    double operator[](size_t index) const { return probs_.at(index); }
    size_t size() const noexcept { return probs_.size(); }

    static constexpr size_t basis_index(size_t error_index) noexcept { return error_index + 1; }

    bool operator==(const ErrorStateDistribution &) const = default;

   private:
    int n_;
    std::vector<double> probs_;
};

template <typename D>
concept ProbabilityVector = requires(const D &d) {
    { d.probs() } -> std::convertible_to<std::span<const double>>;
};

/// Additive (Jeffreys by default) pseudocount per bin.
struct SmoothingPolicy {
    double alpha = 0.5;
    bool operator==(const SmoothingPolicy &) const = default;
};

/// histogram / shots. Throws InvalidArgument on zero shots.
OutcomeDistribution empirical_from_counts(const Counts &counts);

/// (histogram + alpha) / (shots + alpha 2^n). Throws InvalidArgument on zero
/// shots or a negative alpha.
OutcomeDistribution smooth(const Counts &counts, SmoothingPolicy policy);

/// Drops indices 0 and 2^n - 1 and renormalizes. Throws NoErrorMass when
/// nothing is left to renormalize.
ErrorStateDistribution restrict_to_error_states(const OutcomeDistribution &dist);

/// D(p || q) = sum_{p(x) > 0} p(x) ln(p(x) / q(x)).
/// Throws InvalidArgument on a length mismatch and DivergenceUndefined when
/// q(x) = 0 < p(x).
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// Half the L1 distance. Throws InvalidArgument on a length mismatch.
double total_variation(std::span<const double> p, std::span<const double> q);

template <ProbabilityVector P, ProbabilityVector Q>
double kl_divergence(const P &p, const Q &q) {
    return kl_divergence(std::span<const double>(p.probs()), std::span<const double>(q.probs()));
}

template <ProbabilityVector P, ProbabilityVector Q>
double total_variation(const P &p, const Q &q) {
    return total_variation(std::span<const double>(p.probs()), std::span<const double>(q.probs()));
}

/// Dense row-major square matrix.
class SquareMatrix {
   public:
    explicit SquareMatrix(size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

    size_t dim() const noexcept { return dim_; }
    double &operator()(size_t row, size_t col) { return data_.at(row * dim_ + col); }
    double operator()(size_t row, size_t col) const { return data_.at(row * dim_ + col); }

    bool operator==(const SquareMatrix &) const = default;

   private:
    size_t dim_;
    std::vector<double> data_;
};

/// Entry (i, j) = D(dists[i] || dists[j]); the diagonal is exactly zero.
SquareMatrix kl_matrix(std::span<const std::vector<double>> dists);

template <ProbabilityVector D>
SquareMatrix kl_matrix(std::span<const D> dists) {
    std::vector<std::vector<double>> raw;
    raw.reserve(dists.size());
    for (const auto &d : dists) {
        raw.emplace_back(d.probs().begin(), d.probs().end());
    }
    return kl_matrix(std::span<const std::vector<double>>(raw));
}

}  // namespace qnf
