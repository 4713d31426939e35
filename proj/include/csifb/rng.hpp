// SPDX-License-Identifier: Apache-2.0
//
// csifb - CSI feedback simulator for wideband FDD massive MIMO
// Copyright (C) 2026 The csifb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CSIFB_RNG_HPP
#define CSIFB_RNG_HPP

#include "csifb/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace csifb
{
    // SplitMix64 finalizer. Used to derive independent stream seeds from a
    // base seed and a list of stream keys.
    constexpr std::uint64_t mix64(std::uint64_t x) noexcept
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Stream labels. Keeping them in one place avoids accidental stream reuse
    // between unrelated consumers of the same base seed.
    enum class Stream : std::uint64_t
    {
        statistics = 1,
        training = 2,
        channel = 3,
        pilot_noise = 4,
        dither = 5,
        test_channel = 6,
        uplink_noise = 7,
        spreading = 8,
        user = 9,
    };

    /// Seedable, splittable random generator.
    ///
    /// A stream is identified by a base seed plus an ordered key path; the same
    /// (seed, keys) pair always reproduces the same sequence, and `split`
    /// derives child streams without consuming state from the parent.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : seed_(mix64(seed)), engine_(seed_) {}

        Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) : Rng(seed)
        {
            for (auto k : keys)
                seed_ = mix64(seed_ ^ mix64(k + 0x632BE59BD9B4E019ULL));
            engine_.seed(seed_);
        }

        Rng split(std::uint64_t key) const { return Rng(seed_, {key}); }
        Rng split(Stream s) const { return split(static_cast<std::uint64_t>(s)); }
        Rng split(Stream s, std::uint64_t key) const { return Rng(seed_, {static_cast<std::uint64_t>(s), key}); }

        std::uint64_t seed() const noexcept { return seed_; }

        double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

        double normal(double stddev = 1.0)
        {
            return std::normal_distribution<double>(0.0, stddev)(engine_);
        }

        // Circularly symmetric complex Gaussian with E|x|^2 = variance.
        cplx complex_normal(double variance = 1.0)
        {
            if (!(variance > 0.0))
                return {0.0, 0.0};
            const double s = std::sqrt(0.5 * variance);
            const double re = normal(s);
            const double im = normal(s);
            return {re, im};
        }

        CVec complex_normal_vector(Eigen::Index n, double variance = 1.0)
        {
            CVec v(n);
            for (Eigen::Index i = 0; i < n; ++i)
                v(i) = complex_normal(variance);
            return v;
        }

        CMat complex_normal_matrix(Eigen::Index rows, Eigen::Index cols, double variance = 1.0)
        {
            CMat m(rows, cols);
            for (Eigen::Index j = 0; j < cols; ++j)
                for (Eigen::Index i = 0; i < rows; ++i)
                    m(i, j) = complex_normal(variance);
            return m;
        }

        std::mt19937_64 &engine() noexcept { return engine_; }

    private:
        std::uint64_t seed_;
        std::mt19937_64 engine_;
    };
} // namespace csifb

#endif
