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

#ifndef CSIFB_RD_BOUNDS_HPP
#define CSIFB_RD_BOUNDS_HPP

#include "csifb/feedback.hpp"
#include "csifb/rng.hpp"
#include "csifb/training.hpp"

#include <span>

namespace csifb
{
    /// Reverse water-filling solution. Modes 0..active-1 (eigenvalues sorted
    /// descending) lie strictly above the water level.
    struct WaterLevel
    {
        double gamma = 0.0;
        int active = 0;
    };

    // Eigenvalues must be positive and sorted in descending order.
    WaterLevel water_level_for_distortion(std::span<const double> eig, double excess);
    WaterLevel water_level_for_rate(std::span<const double> eig, double rate_bits);

    /// sum_l [log2(lambda_l / gamma)]_+
    double water_fill_rate(std::span<const double> eig, const WaterLevel &level);
    /// sum_l min(gamma, lambda_l)
    double water_fill_distortion(std::span<const double> eig, const WaterLevel &level);

    /// Remote rate-distortion function in bits. Throws InfeasibleError for D < d_mmse;
    /// returns +inf at D == d_mmse when the posterior has positive rank.
    double remote_rate_distortion(const PosteriorStats &ps, double D);

    /// Remote distortion-rate function, R in bits.
    double remote_distortion_rate(const PosteriorStats &ps, double R);

    /// Quality scaling exponent of rate-distortion feedback:
    /// min(beta_fb / r, 1) if beta_tr >= r, else 0.
    double qse_rd(int r, int beta_tr, int beta_fb);

    /// Forward Gaussian test channel at rate budget.total_bits(): each KL mode
    /// above the water level gamma' is scaled by (1 - gamma'/lambda) and
    /// perturbed by CN(0, gamma'(1 - gamma'/lambda)); the rest are dropped.
    FeedbackResult rd_feedback_simulate(const PosteriorStats &ps, const CVec &mu, const CVec &u,
                                        const FeedbackBudget &budget, Rng &rng);
} // namespace csifb

#endif
