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

#ifndef CSIFB_TRAINING_HPP
#define CSIFB_TRAINING_HPP

#include "csifb/channel.hpp"

#include <vector>

namespace csifb
{
    /// Pilot grid: T_p pilot symbols on each of N_p subcarriers, beta_tr = N_p * T_p.
    /// Subcarrier indices are 0-based here.
    struct TrainingConfig
    {
        int N_p = 1;
        int T_p = 1;
        std::vector<int> pilot_set;

        int beta_tr() const noexcept { return N_p * T_p; }

        /// Uniformly spaced comb: pilot_set[i] = floor(i * N / N_p).
        static TrainingConfig uniform(const SystemConfig &cfg, int N_p, int T_p);

        /// Grid for a requested pilot count: the largest N_p <= N dividing
        /// beta_tr with beta_tr / N_p <= T.
        static TrainingConfig for_beta(const SystemConfig &cfg, int beta_tr);

        void validate(const SystemConfig &cfg) const;
        bool is_pilot(int n) const;
    };

    /// MN x beta_tr block pilot matrix. Column l*T_p + t carries the t-th pilot
    /// vector of pilot subcarrier pilot_set[l]; all other rows are zero.
    struct TrainingMatrix
    {
        CMat x_tr;
        double snr_dl = 0.0;
        TrainingConfig config;

        int beta_tr() const noexcept { return static_cast<int>(x_tr.cols()); }

        /// Same SNR-independent pilots at another SNR (X = sqrt(snr) X0).
        TrainingMatrix rescaled(double snr) const;
    };

    /// Pilot entries i.i.d. CN(0, snr_dl / M) on the pilot blocks.
    TrainingMatrix build_training_matrix(const SystemConfig &cfg, const TrainingConfig &tcfg, Rng &rng);

    /// y = h^H X + z, z ~ CN(0, I). Pass `noiseless` for oracle checks.
    CRow observe_pilots(const CVec &h, const TrainingMatrix &x, Rng &rng, bool noiseless = false);

    /// Second-order statistics of the UE-side LMMSE estimate u = E[h | y].
    struct PosteriorStats
    {
        CMat sigma_u;     // MN x MN
        RVec eig_vals_u;  // lambda^u_1 >= ... >= lambda^u_r~ > 0
        CMat eig_vecs_u;  // F restricted to the support: MN x r~
        double d_mmse = 0.0;
        CMat gain;        // Sigma_h X (X^H Sigma_h X + I)^-1, MN x beta_tr

        int r_tilde() const noexcept { return static_cast<int>(eig_vals_u.size()); }
        double excess_trace() const { return eig_vals_u.sum(); }
    };

    PosteriorStats posterior_stats(const ChannelStatistics &stats, const TrainingMatrix &x);

    /// u = gain (y - mu^H X)^H + mu.
    CVec mmse_estimate(const PosteriorStats &ps, const CVec &mu, const CRow &y, const TrainingMatrix &x);
} // namespace csifb

#endif
