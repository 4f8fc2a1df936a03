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

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace qnf {

/// Name recorded in run manifests. Changing any function in this header
/// changes every simulated artifact, so bump this string with it.
inline constexpr std::string_view kRngAlgorithm = "splitmix64-derive/xoshiro256starstar/u53";

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr uint64_t mix64(uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives a child seed from a parent seed and a path of counters. The
/// result depends only on the arguments, so streams can be created in any
/// order (or in parallel) and still reproduce bit-for-bit.
constexpr uint64_t derive_seed(uint64_t parent, std::initializer_list<uint64_t> path) noexcept {
    uint64_t s = mix64(parent);
    for (uint64_t step : path) {
        s = mix64(s ^ mix64(step + 0x632BE59BD9B4E019ULL));
    }
    return s;
}

/// FNV-1a of a label, for mixing human-readable stream names into a seed path.
constexpr uint64_t label_hash(std::string_view label) noexcept {
    uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// xoshiro256** generator with SplitMix64 state expansion. Satisfies
/// UniformRandomBitGenerator, but callers inside this library only use
/// `uniform()`, whose output is fixed across platforms (std distributions
/// are not).
class Xoshiro256 {
   public:
    using result_type = uint64_t;

    explicit constexpr Xoshiro256(uint64_t seed) noexcept {
        uint64_t z = seed;
        for (auto &word : state_) {
            z += 0x9E3779B97F4A7C15ULL;
            uint64_t w = z;
            w = (w ^ (w >> 30)) * 0xBF58476D1CE4E5B9ULL;
            w = (w ^ (w >> 27)) * 0x94D049BB133111EBULL;
            word = w ^ (w >> 31);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~uint64_t{0}; }

    constexpr result_type operator()() noexcept {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). Plain modulo reduction: bias is below
    /// 2^-56 for the bounds used here (≤ 15).
    constexpr uint64_t below(uint64_t bound) noexcept { return ((*this)() >> 4) % bound; }

   private:
    static constexpr uint64_t rotl(uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<uint64_t, 4> state_{};
};

}  // namespace qnf
