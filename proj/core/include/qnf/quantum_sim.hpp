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

// Noisy GHZ preparation and measurement.
//
// Qubit b is bit b of a basis-state index (bit 0 least significant). Noise is
// injected as Monte-Carlo Pauli trajectories after each gate followed by
// independent per-qubit readout flips.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace qnf {

class OutcomeDistribution;  // distributions.hpp

inline constexpr int kMinQubits = 1;
inline constexpr int kMaxQubits = 12;

/// Throws InvalidArgument unless 1 <= n <= 12.
void check_qubit_count(int n);

constexpr size_t state_dimension(int n) noexcept { return size_t{1} << n; }

class StateVector {
   public:
    using Amplitude = std::complex<double>;

    /// |0...0> on n qubits.
    static StateVector zeros(int n);

    /// Validates length 2^n and unit norm (within 1e-10).
    static StateVector from_amplitudes(int n, std::vector<Amplitude> amplitudes);

    int num_qubits() const noexcept { return n_; }
    std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
    std::span<Amplitude> mutable_amplitudes() noexcept { return amplitudes_; }

    double norm_squared() const noexcept;

    void apply_hadamard(int target);
    void apply_cnot(int control, int target);
    void apply_pauli_x(int target);
    void apply_pauli_y(int target);
    void apply_pauli_z(int target);

   private:
    StateVector(int n, std::vector<Amplitude> amplitudes) : n_(n), amplitudes_(std::move(amplitudes)) {}

    void check_qubit(int q) const;

    int n_;
    std::vector<Amplitude> amplitudes_;
};

struct Hadamard {
    int target;
    bool operator==(const Hadamard &) const = default;
};

struct ControlledNot {
    int control;
    int target;
    bool operator==(const ControlledNot &) const = default;
};

using Gate = std::variant<Hadamard, ControlledNot>;

class Circuit {
   public:
    /// Validates qubit indices against n and rejects control == target.
    Circuit(int n, std::vector<Gate> gates);

    int num_qubits() const noexcept { return n_; }
    std::span<const Gate> gates() const noexcept { return gates_; }

    bool operator==(const Circuit &) const = default;

   private:
    int n_;
    std::vector<Gate> gates_;
};

/// H(0) then CNOT(i, i+1) for i = 0..n-2.
Circuit build_ghz_circuit(int n);

/// Noiseless evolution. Throws InvalidArgument on qubit-count mismatch.
StateVector apply_circuit(const StateVector &state, const Circuit &circuit);

/// Readout confusion of one qubit.
struct ReadoutError {
    double p01 = 0.0;  ///< Pr(read 1 | true 0)
    double p10 = 0.0;  ///< Pr(read 0 | true 1)
    bool operator==(const ReadoutError &) const = default;
};

/// Frozen per-device noise. Two devices with equal fields produce identical
/// statistics; device_seed only labels the realization.
struct DeviceNoiseParams {
    std::vector<ReadoutError> readout;  ///< one entry per qubit
    double p1 = 0.0;                    ///< depolarizing prob. after single-qubit gates
    double p2 = 0.0;                    ///< depolarizing prob. after two-qubit gates
    uint64_t device_seed = 0;

    static DeviceNoiseParams noiseless(int n, uint64_t device_seed = 0);

    /// Range checks: readout in [0, 0.5), p1 and p2 in [0, 0.2].
    void validate() const;

    bool operator==(const DeviceNoiseParams &) const = default;
};

/// Closed intervals from which per-device parameters are drawn.
struct DeviceParamRanges {
    double readout_min = 0.01;
    double readout_max = 0.08;
    double p1_min = 0.0005;
    double p1_max = 0.005;
    double p2_min = 0.005;
    double p2_max = 0.03;

    void validate() const;
    bool operator==(const DeviceParamRanges &) const = default;
};

/// Draws a device deterministically from `device_seed`.
DeviceNoiseParams draw_device(int n, const DeviceParamRanges &ranges, uint64_t device_seed);

/// Measurement histogram. Dense storage over all 2^n indices.
class Counts {
   public:
    /// Zero histogram.
    explicit Counts(int n);

    /// Takes a dense histogram of length 2^n; shots is its sum.
    Counts(int n, std::vector<uint64_t> histogram);

    int num_qubits() const noexcept { return n_; }
    uint64_t shots() const noexcept { return shots_; }
    uint64_t operator[](size_t index) const { return histogram_.at(index); }
    std::span<const uint64_t> histogram() const noexcept { return histogram_; }

    void add(size_t index, uint64_t count = 1);

    bool operator==(const Counts &) const = default;

   private:
    int n_;
    uint64_t shots_ = 0;
    std::vector<uint64_t> histogram_;
};

/// Monte-Carlo sampling of `shots` noisy executions. A pure function of its
/// arguments: shot s draws from its own stream derive_seed(seed, {s}), so the
/// histogram does not depend on evaluation order. Throws InvalidArgument on
/// shots == 0, a device/circuit qubit mismatch, or invalid device parameters.
Counts sample_shots(const DeviceNoiseParams &device, const Circuit &circuit, uint64_t shots, uint64_t seed);

/// Exact outcome probabilities of the ideal GHZ state under readout-only
/// noise: P(x) = 1/2 prod_b Pr(x_b | 0) + 1/2 prod_b Pr(x_b | 1).
/// Throws InvalidArgument unless readout has n entries.
OutcomeDistribution readout_oracle_distribution(int n, std::span<const ReadoutError> readout);

}  // namespace qnf
