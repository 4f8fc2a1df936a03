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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qnf/distributions.hpp"
#include "qnf/errors.hpp"
#include "qnf/quantum_sim.hpp"

namespace qnf {
namespace {

using cd = std::complex<double>;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Dense matrices for the brute-force oracle. Qubit b is bit b of the basis
// index, so the Kronecker factors run from qubit n-1 down to qubit 0.
using Matrix = std::vector<std::vector<cd>>;

Matrix kron(const Matrix &a, const Matrix &b) {
    const size_t ra = a.size(), rb = b.size();
    Matrix out(ra * rb, std::vector<cd>(ra * rb));
    for (size_t i = 0; i < ra; ++i)
        for (size_t j = 0; j < ra; ++j)
            for (size_t k = 0; k < rb; ++k)
                for (size_t l = 0; l < rb; ++l) out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
    return out;
}

Matrix add(const Matrix &a, const Matrix &b) {
    Matrix out = a;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a.size(); ++j) out[i][j] += b[i][j];
    return out;
}

std::vector<cd> mul(const Matrix &m, const std::vector<cd> &v) {
    std::vector<cd> out(v.size());
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    return out;
}

const Matrix kI = {{1, 0}, {0, 1}};
const Matrix kH = {{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
const Matrix kX = {{0, 1}, {1, 0}};
const Matrix kP0 = {{1, 0}, {0, 0}};
const Matrix kP1 = {{0, 0}, {0, 1}};

// Operator acting as `op[q]` on each listed qubit and identity elsewhere.
Matrix embed(int n, const std::vector<std::pair<int, Matrix>> &ops) {
    Matrix out = {{1}};
    for (int q = n - 1; q >= 0; --q) {
        Matrix factor = kI;
        for (const auto &[target, m] : ops)
            if (target == q) factor = m;
        out = kron(out, factor);
    }
    return out;
}

Matrix cnot_matrix(int n, int control, int target) {
    return add(embed(n, {{control, kP0}}), embed(n, {{control, kP1}, {target, kX}}));
}

TEST(GhzCircuit, MatchesDocumentedGateLists) {
    EXPECT_EQ(build_ghz_circuit(1).gates().size(), 1u);
    EXPECT_EQ(build_ghz_circuit(1).gates()[0], Gate(Hadamard{0}));

    const Circuit bell = build_ghz_circuit(2);
    ASSERT_EQ(bell.gates().size(), 2u);
    EXPECT_EQ(bell.gates()[0], Gate(Hadamard{0}));
    EXPECT_EQ(bell.gates()[1], Gate(ControlledNot{0, 1}));

    const Circuit ghz5 = build_ghz_circuit(5);
    const std::vector<Gate> expected = {Hadamard{0}, ControlledNot{0, 1}, ControlledNot{1, 2}, ControlledNot{2, 3},
                                        ControlledNot{3, 4}};
    ASSERT_EQ(ghz5.gates().size(), expected.size());
    for (size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(ghz5.gates()[i], expected[i]);
}

TEST(GhzCircuit, RejectsQubitCountsOutOfRange) {
    EXPECT_THROW(build_ghz_circuit(0), InvalidArgument);
    EXPECT_THROW(build_ghz_circuit(13), InvalidArgument);
}

TEST(ApplyCircuit, HadamardOnZero) {
    const StateVector s = apply_circuit(StateVector::zeros(1), build_ghz_circuit(1));
    EXPECT_NEAR(std::abs(s.amplitudes()[0] - cd(kInvSqrt2)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.amplitudes()[1] - cd(kInvSqrt2)), 0.0, 1e-15);
}

TEST(ApplyCircuit, BellPreparation) {
    const StateVector s = apply_circuit(StateVector::zeros(2), build_ghz_circuit(2));
    const std::vector<cd> expected = {kInvSqrt2, 0.0, 0.0, kInvSqrt2};
    for (size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(s.amplitudes()[i] - expected[i]), 0.0, 1e-15) << i;
}

TEST(ApplyCircuit, Ghz5AgreesWithKroneckerOracle) {
    const int n = 5;
    std::vector<cd> v(32);
    v[0] = 1.0;
    v = mul(embed(n, {{0, kH}}), v);
    for (int q = 0; q + 1 < n; ++q) v = mul(cnot_matrix(n, q, q + 1), v);

    const StateVector s = apply_circuit(StateVector::zeros(n), build_ghz_circuit(n));
    ASSERT_EQ(s.amplitudes().size(), 32u);
    for (size_t i = 0; i < 32; ++i) {
        EXPECT_NEAR(std::abs(s.amplitudes()[i] - v[i]), 0.0, 1e-12) << i;
        const double expected = (i == 0 || i == 31) ? kInvSqrt2 : 0.0;
        EXPECT_NEAR(std::abs(s.amplitudes()[i]), expected, 1e-12) << i;
    }
}

TEST(ApplyCircuit, DimensionMismatchIsRejected) {
    EXPECT_THROW(apply_circuit(StateVector::zeros(3), build_ghz_circuit(2)), InvalidArgument);
}

TEST(ApplyCircuit, GatesPreserveNorm) {
    StateVector s = apply_circuit(StateVector::zeros(4), build_ghz_circuit(4));
    s.apply_pauli_y(2);
    s.apply_hadamard(3);
    s.apply_pauli_z(1);
    s.apply_cnot(3, 0);
    s.apply_pauli_x(0);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
}

TEST(StateVector, FromAmplitudesValidates) {
    EXPECT_THROW(StateVector::from_amplitudes(1, {1.0, 1.0}), InvalidArgument);
    EXPECT_THROW(StateVector::from_amplitudes(2, {1.0, 0.0}), InvalidArgument);
    EXPECT_NO_THROW(StateVector::from_amplitudes(1, {0.6, cd(0.0, 0.8)}));
}

TEST(Circuit, RejectsBadGates) {
    EXPECT_THROW(Circuit(2, {ControlledNot{1, 1}}), InvalidArgument);
    EXPECT_THROW(Circuit(2, {Hadamard{2}}), InvalidArgument);
}

TEST(SampleShots, NoiselessGhzSupportsOnlyAllZerosAndAllOnes) {
    const Counts c = sample_shots(DeviceNoiseParams::noiseless(5), build_ghz_circuit(5), 10000, 7);
    EXPECT_EQ(c.shots(), 10000u);
    EXPECT_EQ(c[0] + c[31], 10000u);
}

TEST(SampleShots, ReadoutOnlyDeviceMatchesOracle) {
    DeviceNoiseParams d;
    d.readout = {{0.1, 0.1}, {0.1, 0.1}};
    const Counts c = sample_shots(d, build_ghz_circuit(2), 100000, 11);
    const auto empirical = empirical_from_counts(c);
    const std::vector<double> expected = {0.41, 0.09, 0.09, 0.41};
    EXPECT_LE(total_variation(std::span<const double>(empirical.probs()), std::span<const double>(expected)), 0.01);
}

TEST(SampleShots, SameSeedSameCounts) {
    const DeviceNoiseParams d = draw_device(5, DeviceParamRanges{}, 3);
    const Circuit ghz = build_ghz_circuit(5);
    EXPECT_EQ(sample_shots(d, ghz, 2000, 99), sample_shots(d, ghz, 2000, 99));
    EXPECT_NE(sample_shots(d, ghz, 2000, 99), sample_shots(d, ghz, 2000, 100));
}

TEST(SampleShots, ZeroShotsIsAnError) {
    EXPECT_THROW(sample_shots(DeviceNoiseParams::noiseless(2), build_ghz_circuit(2), 0, 1), InvalidArgument);
}

TEST(SampleShots, DeviceWidthMustMatchCircuit) {
    EXPECT_THROW(sample_shots(DeviceNoiseParams::noiseless(3), build_ghz_circuit(2), 10, 1), InvalidArgument);
}

TEST(ReadoutOracle, TwoQubitsSymmetricTenPercent) {
    const std::vector<ReadoutError> r = {{0.1, 0.1}, {0.1, 0.1}};
    const auto d = readout_oracle_distribution(2, r);
    const std::vector<double> expected = {0.41, 0.09, 0.09, 0.41};
    for (size_t i = 0; i < 4; ++i) EXPECT_NEAR(d.probs()[i], expected[i], 1e-12);
}

TEST(ReadoutOracle, NoiselessIsHalfAndHalf) {
    for (int n = 1; n <= 6; ++n) {
        const std::vector<ReadoutError> r(n);
        const auto d = readout_oracle_distribution(n, r);
        for (size_t i = 0; i < d.probs().size(); ++i) {
            const double expected = (i == 0 || i + 1 == d.probs().size()) ? 0.5 : 0.0;
            EXPECT_DOUBLE_EQ(d.probs()[i], expected);
        }
    }
}

TEST(ReadoutOracle, SingleQubitIsBalanced) {
    const std::vector<ReadoutError> r = {{0.1, 0.1}};
    const auto d = readout_oracle_distribution(1, r);
    EXPECT_NEAR(d.probs()[0], 0.5, 1e-12);
    EXPECT_NEAR(d.probs()[1], 0.5, 1e-12);
}

TEST(ReadoutOracle, AsymmetricErrorsFollowTheFlipModel) {
    // Qubit 0: p01 = 0.2, p10 = 0.05. Qubit 1 is perfect.
    const std::vector<ReadoutError> r = {{0.2, 0.05}, {0.0, 0.0}};
    const auto d = readout_oracle_distribution(2, r);
    EXPECT_NEAR(d.probs()[0], 0.5 * 0.8, 1e-12);
    EXPECT_NEAR(d.probs()[1], 0.5 * 0.2, 1e-12);
    EXPECT_NEAR(d.probs()[2], 0.5 * 0.05, 1e-12);
    EXPECT_NEAR(d.probs()[3], 0.5 * 0.95, 1e-12);
}

TEST(Device, ValidateRejectsOutOfRangeRates) {
    DeviceNoiseParams d = DeviceNoiseParams::noiseless(2);
    d.readout[0].p01 = 0.5;
    EXPECT_THROW(d.validate(), InvalidArgument);
    d = DeviceNoiseParams::noiseless(2);
    d.p2 = -0.1;
    EXPECT_THROW(d.validate(), InvalidArgument);
}

TEST(Device, DrawIsDeterministicAndWithinRanges) {
    const DeviceParamRanges ranges;
    const DeviceNoiseParams a = draw_device(5, ranges, 17);
    EXPECT_EQ(a, draw_device(5, ranges, 17));
    EXPECT_NE(a, draw_device(5, ranges, 18));
    for (const auto &r : a.readout) {
        EXPECT_GE(r.p01, ranges.readout_min);
        EXPECT_LE(r.p01, ranges.readout_max);
        EXPECT_GE(r.p10, ranges.readout_min);
        EXPECT_LE(r.p10, ranges.readout_max);
    }
    EXPECT_GE(a.p1, ranges.p1_min);
    EXPECT_LE(a.p1, ranges.p1_max);
    EXPECT_GE(a.p2, ranges.p2_min);
    EXPECT_LE(a.p2, ranges.p2_max);
}

TEST(Counts, AddAndShots) {
    Counts c(2);
    c.add(1);
    c.add(3, 4);
    EXPECT_EQ(c.shots(), 5u);
    EXPECT_EQ(c[3], 4u);
    EXPECT_THROW(c.add(4), InvalidArgument);
    EXPECT_THROW(Counts(2, {1, 2, 3}), InvalidArgument);
}

}  // namespace
}  // namespace qnf
