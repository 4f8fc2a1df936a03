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
#include <random>
#include <vector>

#include "qnf/distributions.hpp"
#include "qnf/errors.hpp"
#include "test_support.hpp"

namespace qnf {
namespace {

using Vec = std::vector<double>;

double kl(const Vec &p, const Vec &q) { return kl_divergence(std::span<const double>(p), std::span<const double>(q)); }
double tv(const Vec &p, const Vec &q) { return total_variation(std::span<const double>(p), std::span<const double>(q)); }

// Counts of the two-photon example histogram: 0.48 / 0.02 / 0.03 / 0.47.
Counts bell_example_counts() { return Counts(2, {480, 20, 30, 470}); }

TEST(Empirical, BellExampleFrequencies) {
    const auto d = empirical_from_counts(bell_example_counts());
    const Vec expected = {0.48, 0.02, 0.03, 0.47};
    for (size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(d.probs()[i], expected[i]);
}

TEST(Empirical, SingleBinIsIndicator) {
    const auto d = empirical_from_counts(Counts(2, {0, 0, 1000, 0}));
    EXPECT_EQ(d.probs()[2], 1.0);
    EXPECT_EQ(d.probs()[0] + d.probs()[1] + d.probs()[3], 0.0);
}

TEST(Empirical, ZeroShotsIsAnError) { EXPECT_THROW(empirical_from_counts(Counts(2)), InvalidArgument); }

TEST(Smooth, ZeroAlphaIsEmpirical) {
    const Counts c = bell_example_counts();
    EXPECT_EQ(smooth(c, {0.0}), empirical_from_counts(c));
}

TEST(Smooth, JeffreysPseudocount) {
    const auto d = smooth(bell_example_counts(), {0.5});
    const Vec expected = {480.5 / 1002, 20.5 / 1002, 30.5 / 1002, 470.5 / 1002};
    for (size_t i = 0; i < 4; ++i) EXPECT_NEAR(d.probs()[i], expected[i], 1e-15);
    EXPECT_NEAR(d.probs()[0], 0.4796, 1e-4);
    EXPECT_NEAR(d.probs()[1], 0.0205, 1e-4);
    EXPECT_NEAR(d.probs()[2], 0.0304, 1e-4);
    EXPECT_NEAR(d.probs()[3], 0.4696, 1e-4);
}

TEST(Smooth, EmptyBinsGetPositiveMass) {
    const auto d = smooth(Counts(3, {100, 0, 0, 0, 0, 0, 0, 0}), {0.5});
    for (size_t i = 1; i < 8; ++i) EXPECT_DOUBLE_EQ(d.probs()[i], 0.5 / (100 + 0.5 * 8));
}

TEST(Smooth, ConvergesToEmpiricalAsAlphaVanishes) {
    const Counts c(3, {400, 3, 0, 17, 9, 0, 1, 570});
    EXPECT_LE(total_variation(smooth(c, {1e-9}), empirical_from_counts(c)), 1e-6);
}

TEST(Smooth, NegativeAlphaIsAnError) { EXPECT_THROW(smooth(bell_example_counts(), {-0.1}), InvalidArgument); }

TEST(Restrict, BellExampleRenormalizes) {
    const auto r = restrict_to_error_states(OutcomeDistribution(2, {0.48, 0.02, 0.03, 0.47}));
    ASSERT_EQ(r.probs().size(), 2u);
    EXPECT_NEAR(r.probs()[0], 0.4, 1e-12);
    EXPECT_NEAR(r.probs()[1], 0.6, 1e-12);
}

TEST(Restrict, IdealGhzHasNoErrorMass) {
    Vec p(8, 0.0);
    p[0] = p[7] = 0.5;
    EXPECT_THROW(restrict_to_error_states(OutcomeDistribution(3, p)), NoErrorMass);
}

TEST(Restrict, UniformIsUniform) {
    const auto r = restrict_to_error_states(OutcomeDistribution(2, {0.25, 0.25, 0.25, 0.25}));
    EXPECT_DOUBLE_EQ(r.probs()[0], 0.5);
    EXPECT_DOUBLE_EQ(r.probs()[1], 0.5);
}

TEST(Restrict, BasisIndexSkipsAllZeros) {
    EXPECT_EQ(ErrorStateDistribution::basis_index(0), 1u);
    EXPECT_EQ(ErrorStateDistribution::basis_index(29), 30u);
}

TEST(Restrict, IndependentOfCorrectStateMass) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 4;
        Vec p = testing::random_positive_distribution(rng, size_t{1} << n);
        const auto base = restrict_to_error_states(OutcomeDistribution(n, p));
        double sum = 0.0;
        for (double x : base.probs()) sum += x;
        EXPECT_NEAR(sum, 1.0, 1e-9);

        p.front() *= scale(rng);
        p.back() *= scale(rng);
        double total = 0.0;
        for (double x : p) total += x;
        for (double &x : p) x /= total;
        const auto moved = restrict_to_error_states(OutcomeDistribution(n, p));
        for (size_t i = 0; i < base.probs().size(); ++i) EXPECT_NEAR(moved.probs()[i], base.probs()[i], 1e-9);
    }
}

TEST(Distribution, ConstructorValidates) {
    EXPECT_THROW(OutcomeDistribution(2, {0.5, 0.5, 0.1, 0.0}), InvalidArgument);
    EXPECT_THROW(OutcomeDistribution(2, {0.5, 0.5}), InvalidArgument);
    EXPECT_THROW(OutcomeDistribution(1, {1.5, -0.5}), InvalidArgument);
    EXPECT_THROW(ErrorStateDistribution(2, {0.5, 0.25}), InvalidArgument);
}

TEST(Kl, IdenticalIsExactlyZero) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const Vec p = testing::random_positive_distribution(rng, 32);
        EXPECT_EQ(kl(p, p), 0.0);
    }
}

TEST(Kl, HandValue) {
    const double expected = 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0);
    EXPECT_NEAR(kl({0.5, 0.5}, {0.25, 0.75}), expected, 1e-15);
    EXPECT_NEAR(kl({0.5, 0.5}, {0.25, 0.75}), 0.14384, 1e-5);
}

TEST(Kl, ZeroReferenceMassIsUndefined) { EXPECT_THROW(kl({1.0, 0.0}, {0.0, 1.0}), DivergenceUndefined); }

TEST(Kl, ZeroObservedMassIsSkipped) { EXPECT_NEAR(kl({1.0, 0.0}, {0.5, 0.5}), std::log(2.0), 1e-15); }

TEST(Kl, LengthMismatch) { EXPECT_THROW(kl({1.0}, {0.5, 0.5}), InvalidArgument); }

TEST(Kl, GibbsAndPinskerOnRandomPairs) {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 1000; ++i) {
        const size_t size = size_t{1} << (1 + i % 5);
        const Vec p = testing::random_positive_distribution(rng, size);
        const Vec q = testing::random_positive_distribution(rng, size);
        const double d = kl(p, q);
        EXPECT_GE(d, 0.0);
        EXPECT_GT(d, 0.0);  // distinct continuous draws
        EXPECT_LE(tv(p, q), std::sqrt(d / 2.0) + 1e-12);
    }
}

TEST(Kl, AsymmetryWitnessExists) {
    std::mt19937_64 rng(77);
    bool found = false;
    for (int i = 0; i < 1000 && !found; ++i) {
        const Vec p = testing::random_positive_distribution(rng, 8);
        const Vec q = testing::random_positive_distribution(rng, 8);
        found = std::abs(kl(p, q) - kl(q, p)) > 0.1;
    }
    EXPECT_TRUE(found);
}

TEST(TotalVariation, Examples) {
    EXPECT_EQ(tv({0.3, 0.7}, {0.3, 0.7}), 0.0);
    EXPECT_EQ(tv({1.0, 0.0}, {0.0, 1.0}), 1.0);
    EXPECT_NEAR(tv({0.48, 0.02, 0.03, 0.47}, {0.5, 0.0, 0.0, 0.5}), 0.05, 1e-15);
    EXPECT_THROW(tv({1.0}, {0.5, 0.5}), InvalidArgument);
}

TEST(KlMatrix, SingleAndDuplicate) {
    const std::vector<Vec> one = {{0.2, 0.8}};
    const SquareMatrix m1 = kl_matrix(std::span<const Vec>(one));
    ASSERT_EQ(m1.dim(), 1u);
    EXPECT_EQ(m1(0, 0), 0.0);

    const std::vector<Vec> two = {{0.2, 0.8}, {0.2, 0.8}};
    const SquareMatrix m2 = kl_matrix(std::span<const Vec>(two));
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) EXPECT_EQ(m2(i, j), 0.0);
}

TEST(KlMatrix, EntryOrderIsRowToColumn) {
    const std::vector<Vec> d = {{0.5, 0.5}, {0.25, 0.75}};
    const SquareMatrix m = kl_matrix(std::span<const Vec>(d));
    EXPECT_DOUBLE_EQ(m(0, 1), kl(d[0], d[1]));
    EXPECT_DOUBLE_EQ(m(1, 0), kl(d[1], d[0]));
}

TEST(KlMatrix, TypedOverload) {
    const std::vector<OutcomeDistribution> d = {OutcomeDistribution(1, {0.5, 0.5}),
                                                OutcomeDistribution(1, {0.25, 0.75})};
    const SquareMatrix m = kl_matrix(std::span<const OutcomeDistribution>(d));
    EXPECT_NEAR(m(0, 1), 0.14384, 1e-5);
}

}  // namespace
}  // namespace qnf
