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

#ifndef CSIFB_CS_FB_HPP
#define CSIFB_CS_FB_HPP

#include "csifb/feedback.hpp"
#include "csifb/training.hpp"

#include <cstdint>
#include <vector>

namespace csifb
{
    /// Angle-delay dictionary. Atom c = j + G_a * i is b(tau_i) (x) a(theta_j),
    /// so the atom index runs angle-fastest like the channel vectorization.
    struct Dictionary
    {
        int M = 0;
        int N = 0;
        int G_a = 0;
        int G_d = 0;
        CMat A;                         // M x G_a steering codebook
        CMat B;                         // N x G_d delay codebook
        std::vector<double> sin_grid;   // sin(theta_j), uniform on [-1, 1)
        std::vector<double> delay_grid; // tau_i, uniform on [0, tau_max)

        int size() const noexcept { return G_a * G_d; }
        int angle_index(int c) const noexcept { return c % G_a; }
        int delay_index(int c) const noexcept { return c / G_a; }
        int atom_index(int delay_idx, int angle_idx) const noexcept { return angle_idx + G_a * delay_idx; }

        /// Column c of B (x) A, materialized on demand.
        CVec atom(int c) const;
    };

    Dictionary build_dictionary(int M, int N, int G_a, int G_d, double f_s, double tau_max);

    struct CsConfig
    {
        int s0 = 1;                   // sparsity level
        int b = 4;                    // bits per amplitude and per phase
        double amplitude_range = 4.0; // magnitude codebook range for the strongest coefficient

        void validate() const;
    };

    /// Phi = X^H (B (x) A), beta_tr x (G_a G_d), so that y_tr^H = Phi w + z^H for
    /// channels on the grid.
    CMat sensing_matrix(const Dictionary &dict, const TrainingMatrix &x);

    /// Column c of the sensing matrix computed straight from X and the atom.
    CVec sensing_column(const Dictionary &dict, const TrainingMatrix &x, int c);

    struct SparseCoefficients
    {
        std::vector<int> support;
        CVec values;

        int nonzeros() const noexcept { return static_cast<int>(support.size()); }
    };

    /// Orthogonal matching pursuit on y_tr^H = Phi w. Runs until s0 atoms are
    /// selected or the residual vanishes. An atom that makes the support
    /// least-squares problem rank deficient is discarded and the search continues.
    SparseCoefficients omp(const CRow &y_tr, const CMat &phi, int s0);

    /// ceil(log2(x)) for x >= 1.
    int ceil_log2(std::int64_t x);

    /// 2b(s0 - 1) + ceil(log2 s0) + s0 ceil(log2(G_a G_d)).
    std::int64_t cs_feedback_bits(int s0, int b, std::int64_t G_a, std::int64_t G_d);

    /// Quantized CS report. The strongest coefficient is sent first with its
    /// magnitude on {range * 2^-b l} and absolute phase, both with b bits; the
    /// others are sent relative to it on the amplitude and phase codebooks
    /// {2^-b l} and {2 pi 2^-b l}, l = 1..2^b.
    struct CsFeedbackMessage
    {
        std::vector<int> support;
        int ref_amp_index = 0;
        int ref_phase_index = 0;
        std::vector<int> amp_index;   // one per non-reference coefficient
        std::vector<int> phase_index;
        std::int64_t bits_formula = 0; // count per the standard formula
        std::int64_t bits_total = 0;   // formula plus the 2b reference bits
    };

    CsFeedbackMessage quantize_message(const SparseCoefficients &w, const CsConfig &cfg, const Dictionary &dict);
    SparseCoefficients dequantize_message(const CsFeedbackMessage &msg, const CsConfig &cfg);

    /// h_hat = sum over the support of w_c * atom(c).
    CVec reconstruct(const Dictionary &dict, const SparseCoefficients &w);

    /// Largest sparsity <= cfg.s0 (and <= beta_tr) whose report fits the budget,
    /// 0 if nothing fits.
    int cs_feasible_sparsity(const CsConfig &cfg, const Dictionary &dict, int beta_tr, const FeedbackBudget &budget);

    /// UE: OMP -> quantize. BS: dequantize -> reconstruct. No channel statistics
    /// are used on either side; an empty report reconstructs to zero.
    FeedbackResult cs_feedback(const CRow &y_tr, const Dictionary &dict, const CMat &phi, const CsConfig &cfg,
                               const FeedbackBudget &budget);

    FeedbackResult cs_feedback(const CRow &y_tr, const Dictionary &dict, const TrainingMatrix &x,
                               const CsConfig &cfg, const FeedbackBudget &budget);
} // namespace csifb

#endif
