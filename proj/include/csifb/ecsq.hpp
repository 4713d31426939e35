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

#ifndef CSIFB_ECSQ_HPP
#define CSIFB_ECSQ_HPP

#include "csifb/feedback.hpp"
#include "csifb/training.hpp"

#include <cstdint>
#include <vector>

namespace csifb
{
    // Excess rate of entropy-coded dithered scalar quantization over the
    // rate-distortion function, in bits per complex coefficient.
    inline constexpr double ecsq_overhead_bits = 1.508;

    struct EcsqConfig
    {
        double delta = 1.0;            // quantizer step
        std::uint64_t dither_seed = 0; // shared randomness between UE and BS

        void validate() const;
    };

    /// KL coefficients of u on the support of Sigma_u: w = F^H (u - mu).
    /// Coefficients off the support have zero variance and are not stored.
    struct KlCoefficients
    {
        CVec w;

        int r_tilde() const noexcept { return static_cast<int>(w.size()); }
    };

    KlCoefficients kl_analyze(const PosteriorStats &ps, const CVec &mu, const CVec &u);

    /// Dithered quantizer output. `symbols` holds the lattice indices, real and
    /// imaginary parts interleaved (2 r~ entries); that is the entropy-coded payload.
    struct EcsqCode
    {
        std::vector<std::int64_t> symbols;
        CVec w_hat;
    };

    /// The shared scalar dither Z_q ~ U[-delta/2, delta/2] for a frame.
    double ecsq_dither(const EcsqConfig &cfg);

    EcsqCode ecsq_encode(const KlCoefficients &w, const EcsqConfig &cfg);

    /// Rebuilds w_hat from lattice indices by removing the dither.
    CVec ecsq_dequantize(const std::vector<std::int64_t> &symbols, const EcsqConfig &cfg);

    /// BS reconstruction h_hat = mu + F w_hat. A dither seed that differs from
    /// the encoder's is not detected here; it only shows up as extra distortion.
    CVec ecsq_decode(const std::vector<std::int64_t> &symbols, const EcsqConfig &cfg, const PosteriorStats &ps,
                     const CVec &mu);

    /// R_ecsq(D) = R(D) + 1.508 r~. Requires D > d_mmse.
    double ecsq_rate(const PosteriorStats &ps, double D);

    /// Solves R_ecsq(D) = total bits for D, sets delta = sqrt(6 (D - d_mmse) / r~)
    /// and runs encode/decode. Budgets at or below 1.508 r~ bits cannot carry
    /// a description; the BS then falls back to mu.
    FeedbackResult ecsq_feedback(const PosteriorStats &ps, const CVec &mu, const CVec &u,
                                 const FeedbackBudget &budget, std::uint64_t dither_seed);
} // namespace csifb

#endif
