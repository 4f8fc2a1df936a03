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

#include "qnf/quantum_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qnf/distributions.hpp"
#include "qnf/errors.hpp"
#include "qnf/rng.hpp"

namespace qnf {

namespace {

constexpr double kNormTolerance = 1e-10;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

void apply_pauli(StateVector &state, Pauli p, int q) {
    switch (p) {
        case Pauli::I:
            break;
        case Pauli::X:
            state.apply_pauli_x(q);
            break;
        case Pauli::Y:
            state.apply_pauli_y(q);
            break;
        case Pauli::Z:
            state.apply_pauli_z(q);
            break;
    }
}

void apply_gate(StateVector &state, const Gate &gate) {
    if (const auto *h = std::get_if<Hadamard>(&gate)) {
        state.apply_hadamard(h->target);
    } else {
        const auto &cx = std::get<ControlledNot>(gate);
        state.apply_cnot(cx.control, cx.target);
    }
}

void check_probability(double p, double lo, double hi, bool hi_inclusive, const std::string &what) {
    const bool ok = std::isfinite(p) && p >= lo && (hi_inclusive ? p <= hi : p < hi);
    if (!ok) {
        throw InvalidArgument(what + " = " + std::to_string(p) + " is outside [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + (hi_inclusive ? "]" : ")"));
    }
}

std::vector<double> cumulative_probabilities(const StateVector &state) {
    std::vector<double> cdf(state.amplitudes().size());
    double acc = 0.0;
    for (size_t i = 0; i < cdf.size(); ++i) {
        acc += std::norm(state.amplitudes()[i]);
        cdf[i] = acc;
    }
    return cdf;
}

// Index of the first cdf entry exceeding u. Rounding can leave the final
// entry a hair below 1, so a u past it falls back to the last outcome with
// nonzero probability rather than to an impossible one.
size_t sample_index(std::span<const double> cdf, double u) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it != cdf.end()) {
        return static_cast<size_t>(it - cdf.begin());
    }
    size_t i = cdf.size() - 1;
    while (i > 0 && cdf[i] == cdf[i - 1]) {
        --i;
    }
    return i;
}

struct Fault {
    size_t gate;
    Pauli first;
    Pauli second;
};

}  // namespace

void check_qubit_count(int n) {
    if (n < kMinQubits || n > kMaxQubits) {
        throw InvalidArgument("qubit count " + std::to_string(n) + " outside [" + std::to_string(kMinQubits) + ", " +
                              std::to_string(kMaxQubits) + "]");
    }
}

StateVector StateVector::zeros(int n) {
    check_qubit_count(n);
    std::vector<Amplitude> amps(state_dimension(n));
    amps[0] = 1.0;
    return StateVector(n, std::move(amps));
}

StateVector StateVector::from_amplitudes(int n, std::vector<Amplitude> amplitudes) {
    check_qubit_count(n);
    if (amplitudes.size() != state_dimension(n)) {
        throw InvalidArgument("expected " + std::to_string(state_dimension(n)) + " amplitudes, got " +
                              std::to_string(amplitudes.size()));
    }
    StateVector sv(n, std::move(amplitudes));
    if (std::abs(sv.norm_squared() - 1.0) > kNormTolerance) {
        throw InvalidArgument("state vector is not normalized");
    }
    return sv;
}

double StateVector::norm_squared() const noexcept {
    double total = 0.0;
    for (const auto &a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

void StateVector::check_qubit(int q) const {
    if (q < 0 || q >= n_) {
        throw InvalidArgument("qubit " + std::to_string(q) + " out of range for " + std::to_string(n_) + " qubits");
    }
}

void StateVector::apply_hadamard(int target) {
    check_qubit(target);
    const size_t mask = size_t{1} << target;
    for (size_t i = 0; i < amplitudes_.size(); ++i) {
        if (i & mask) continue;
        const Amplitude a0 = amplitudes_[i];
        const Amplitude a1 = amplitudes_[i | mask];
        amplitudes_[i] = (a0 + a1) * kInvSqrt2;
        amplitudes_[i | mask] = (a0 - a1) * kInvSqrt2;
    }
}

void StateVector::apply_cnot(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw InvalidArgument("CNOT control equals target");
    }
    const size_t cmask = size_t{1} << control;
    const size_t tmask = size_t{1} << target;
    for (size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & cmask) && !(i & tmask)) {
            std::swap(amplitudes_[i], amplitudes_[i | tmask]);
        }
    }
}

void StateVector::apply_pauli_x(int target) {
    check_qubit(target);
    const size_t mask = size_t{1} << target;
    for (size_t i = 0; i < amplitudes_.size(); ++i) {
        if (!(i & mask)) std::swap(amplitudes_[i], amplitudes_[i | mask]);
    }
}

void StateVector::apply_pauli_y(int target) {
    check_qubit(target);
    const size_t mask = size_t{1} << target;
    const Amplitude i_unit{0.0, 1.0};
    for (size_t i = 0; i < amplitudes_.size(); ++i) {
        if (i & mask) continue;
        const Amplitude a0 = amplitudes_[i];
        const Amplitude a1 = amplitudes_[i | mask];
        amplitudes_[i] = -i_unit * a1;
        amplitudes_[i | mask] = i_unit * a0;
    }
}

void StateVector::apply_pauli_z(int target) {
    check_qubit(target);
    const size_t mask = size_t{1} << target;
    for (size_t i = 0; i < amplitudes_.size(); ++i) {
        if (i & mask) amplitudes_[i] = -amplitudes_[i];
    }
}

Circuit::Circuit(int n, std::vector<Gate> gates) : n_(n), gates_(std::move(gates)) {
    check_qubit_count(n);
    auto in_range = [n](int q) { return q >= 0 && q < n; };
    for (const auto &g : gates_) {
        if (const auto *h = std::get_if<Hadamard>(&g)) {
            if (!in_range(h->target)) throw InvalidArgument("Hadamard target out of range");
        } else {
            const auto &cx = std::get<ControlledNot>(g);
            if (!in_range(cx.control) || !in_range(cx.target)) {
                throw InvalidArgument("ControlledNot qubit out of range");
            }
            if (cx.control == cx.target) throw InvalidArgument("ControlledNot control equals target");
        }
    }
}

Circuit build_ghz_circuit(int n) {
    check_qubit_count(n);
    std::vector<Gate> gates;
    gates.reserve(static_cast<size_t>(n));
    gates.emplace_back(Hadamard{0});
    for (int i = 0; i + 1 < n; ++i) {
        gates.emplace_back(ControlledNot{i, i + 1});
    }
    return Circuit(n, std::move(gates));
}

StateVector apply_circuit(const StateVector &state, const Circuit &circuit) {
    if (state.num_qubits() != circuit.num_qubits()) {
        throw InvalidArgument("state has " + std::to_string(state.num_qubits()) + " qubits, circuit has " +
                              std::to_string(circuit.num_qubits()));
    }
    StateVector out = state;
    for (const auto &g : circuit.gates()) {
        apply_gate(out, g);
    }
    return out;
}

DeviceNoiseParams DeviceNoiseParams::noiseless(int n, uint64_t device_seed) {
    check_qubit_count(n);
    return DeviceNoiseParams{std::vector<ReadoutError>(static_cast<size_t>(n)), 0.0, 0.0, device_seed};
}

void DeviceNoiseParams::validate() const {
    check_qubit_count(static_cast<int>(readout.size()));
    for (size_t q = 0; q < readout.size(); ++q) {
        check_probability(readout[q].p01, 0.0, 0.5, false, "readout[" + std::to_string(q) + "].p01");
        check_probability(readout[q].p10, 0.0, 0.5, false, "readout[" + std::to_string(q) + "].p10");
    }
    check_probability(p1, 0.0, 0.2, true, "p1");
    check_probability(p2, 0.0, 0.2, true, "p2");
}

void DeviceParamRanges::validate() const {
    check_probability(readout_min, 0.0, 0.5, false, "readout_min");
    check_probability(readout_max, 0.0, 0.5, false, "readout_max");
    check_probability(p1_min, 0.0, 0.2, true, "p1_min");
    check_probability(p1_max, 0.0, 0.2, true, "p1_max");
    check_probability(p2_min, 0.0, 0.2, true, "p2_min");
    check_probability(p2_max, 0.0, 0.2, true, "p2_max");
    if (readout_min > readout_max || p1_min > p1_max || p2_min > p2_max) {
        throw InvalidArgument("device parameter range has min > max");
    }
}

DeviceNoiseParams draw_device(int n, const DeviceParamRanges &ranges, uint64_t device_seed) {
    check_qubit_count(n);
    ranges.validate();
    Xoshiro256 rng(derive_seed(device_seed, {label_hash("device-params")}));
    auto draw = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };

    DeviceNoiseParams device;
    device.device_seed = device_seed;
    device.readout.resize(static_cast<size_t>(n));
    for (auto &r : device.readout) {
        r.p01 = draw(ranges.readout_min, ranges.readout_max);
        r.p10 = draw(ranges.readout_min, ranges.readout_max);
    }
    device.p1 = draw(ranges.p1_min, ranges.p1_max);
    device.p2 = draw(ranges.p2_min, ranges.p2_max);
    return device;
}

Counts::Counts(int n) : n_(n) {
    check_qubit_count(n);
    histogram_.assign(state_dimension(n), 0);
}

Counts::Counts(int n, std::vector<uint64_t> histogram) : n_(n), histogram_(std::move(histogram)) {
    check_qubit_count(n);
    if (histogram_.size() != state_dimension(n)) {
        throw InvalidArgument("histogram length " + std::to_string(histogram_.size()) + " != 2^" + std::to_string(n));
    }
    shots_ = std::accumulate(histogram_.begin(), histogram_.end(), uint64_t{0});
}

void Counts::add(size_t index, uint64_t count) {
    if (index >= histogram_.size()) {
        throw InvalidArgument("outcome index " + std::to_string(index) + " out of range for " + std::to_string(n_) +
                              " qubits");
    }
    histogram_[index] += count;
    shots_ += count;
}

Counts sample_shots(const DeviceNoiseParams &device, const Circuit &circuit, uint64_t shots, uint64_t seed) {
    if (shots == 0) {
        throw InvalidArgument("shots must be >= 1");
    }
    device.validate();
    const int n = circuit.num_qubits();
    if (static_cast<int>(device.readout.size()) != n) {
        throw InvalidArgument("device has " + std::to_string(device.readout.size()) + " qubits, circuit has " +
                              std::to_string(n));
    }

    const auto gates = circuit.gates();
    const std::vector<double> ideal_cdf = cumulative_probabilities(apply_circuit(StateVector::zeros(n), circuit));

    Counts counts(n);
    std::vector<Fault> faults;
    std::vector<double> noisy_cdf;
    for (uint64_t s = 0; s < shots; ++s) {
        Xoshiro256 rng(derive_seed(seed, {s}));

        // Stream layout per shot: one uniform per gate (plus one Pauli draw on
        // a fault), one uniform for the basis sample, one per qubit readout.
        faults.clear();
        for (size_t g = 0; g < gates.size(); ++g) {
            const bool two_qubit = std::holds_alternative<ControlledNot>(gates[g]);
            const double p = two_qubit ? device.p2 : device.p1;
            if (rng.uniform() < p) {
                if (two_qubit) {
                    const auto pair = 1 + rng.below(15);
                    faults.push_back({g, static_cast<Pauli>(pair / 4), static_cast<Pauli>(pair % 4)});
                } else {
                    faults.push_back({g, static_cast<Pauli>(1 + rng.below(3)), Pauli::I});
                }
            }
        }

        std::span<const double> cdf = ideal_cdf;
        if (!faults.empty()) {
            StateVector state = StateVector::zeros(n);
            auto next = faults.begin();
            for (size_t g = 0; g < gates.size(); ++g) {
                apply_gate(state, gates[g]);
                if (next != faults.end() && next->gate == g) {
                    if (const auto *h = std::get_if<Hadamard>(&gates[g])) {
                        apply_pauli(state, next->first, h->target);
                    } else {
                        const auto &cx = std::get<ControlledNot>(gates[g]);
                        apply_pauli(state, next->first, cx.control);
                        apply_pauli(state, next->second, cx.target);
                    }
                    ++next;
                }
            }
            noisy_cdf = cumulative_probabilities(state);
            cdf = noisy_cdf;
        }

        size_t outcome = sample_index(cdf, rng.uniform());
        for (int b = 0; b < n; ++b) {
            const size_t mask = size_t{1} << b;
            const auto &r = device.readout[static_cast<size_t>(b)];
            const double flip = (outcome & mask) ? r.p10 : r.p01;
            if (rng.uniform() < flip) {
                outcome ^= mask;
            }
        }
        counts.add(outcome);
    }
    return counts;
}

OutcomeDistribution readout_oracle_distribution(int n, std::span<const ReadoutError> readout) {
    check_qubit_count(n);
    if (readout.size() != static_cast<size_t>(n)) {
        throw InvalidArgument("readout has " + std::to_string(readout.size()) + " entries, expected " +
                              std::to_string(n));
    }
    for (size_t q = 0; q < readout.size(); ++q) {
        check_probability(readout[q].p01, 0.0, 0.5, false, "readout[" + std::to_string(q) + "].p01");
        check_probability(readout[q].p10, 0.0, 0.5, false, "readout[" + std::to_string(q) + "].p10");
    }
    std::vector<double> probs(state_dimension(n));
    for (size_t x = 0; x < probs.size(); ++x) {
        double from_zeros = 0.5;
        double from_ones = 0.5;
        for (int b = 0; b < n; ++b) {
            const bool bit = (x >> b) & 1U;
            const auto &r = readout[static_cast<size_t>(b)];
            from_zeros *= bit ? r.p01 : 1.0 - r.p01;
            from_ones *= bit ? 1.0 - r.p10 : r.p10;
        }
        probs[x] = from_zeros + from_ones;
    }
    return OutcomeDistribution(n, std::move(probs));
}

}  // namespace qnf
