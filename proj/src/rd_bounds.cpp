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

#include "csifb/rd_bounds.hpp"

#include <cmath>
#include <limits>

namespace csifb
{
    double uplink_capacity(int M, double kappa, double snr_dl)
    {
        return std::log2(1.0 + M * kappa * snr_dl);
    }

    FeedbackBudget FeedbackBudget::for_link(int beta_fb, int M, double kappa, double snr_dl)
    {
        if (beta_fb < 0)
            throw ConfigError("FeedbackBudget: beta_fb must be >= 0");
        return {beta_fb, uplink_capacity(M, kappa, snr_dl)};
    }

    namespace
    {
        std::span<const double> eig_span(const PosteriorStats &ps)
        {
            return {ps.eig_vals_u.data(), static_cast<size_t>(ps.eig_vals_u.size())};
        }
    } // namespace

    WaterLevel water_level_for_distortion(std::span<const double> eig, double excess)
    {
        const int n = static_cast<int>(eig.size());
        if (n == 0)
            return {0.0, 0};

        double total = 0.0;
        for (double v : eig)
            total += v;
        if (excess >= total)
            return {eig[0], 0};
        if (excess <= 0.0)
            return {0.0, n};

        // With the k largest modes active: k * gamma + sum_{i >= k} lambda_i = excess.
        double tail = total;
        for (int k = 1; k <= n; ++k)
        {
            tail -= eig[static_cast<size_t>(k - 1)];
            const double gamma = (excess - tail) / k;
            const bool below_top = gamma <= eig[static_cast<size_t>(k - 1)];
            const bool above_next = k == n || gamma >= eig[static_cast<size_t>(k)];
            if (below_top && above_next)
                return {gamma, k};
        }
        // Round-off at a breakpoint; the last segment always brackets the root.
        return {excess / n, n};
    }

    WaterLevel water_level_for_rate(std::span<const double> eig, double rate_bits)
    {
        const int n = static_cast<int>(eig.size());
        if (n == 0)
            return {0.0, 0};
        if (!(rate_bits > 0.0))
            return {eig[0], 0};
        if (std::isinf(rate_bits))
            return {0.0, n};

        // With k active modes: sum_{i<k} log2 lambda_i - k log2 gamma = R.
        double log_sum = 0.0;
        for (int k = 1; k <= n; ++k)
        {
            log_sum += std::log2(eig[static_cast<size_t>(k - 1)]);
            const double gamma = std::exp2((log_sum - rate_bits) / k);
            const bool below_top = gamma <= eig[static_cast<size_t>(k - 1)];
            const bool above_next = k == n || gamma >= eig[static_cast<size_t>(k)];
            if (below_top && above_next)
                return {gamma, k};
        }
        return {std::exp2((log_sum - rate_bits) / n), n};
    }

    double water_fill_rate(std::span<const double> eig, const WaterLevel &level)
    {
        if (level.active > 0 && level.gamma <= 0.0)
            return std::numeric_limits<double>::infinity();
        double r = 0.0;
        for (int i = 0; i < level.active; ++i)
            r += std::log2(eig[static_cast<size_t>(i)] / level.gamma);
        return r;
    }

    double water_fill_distortion(std::span<const double> eig, const WaterLevel &level)
    {
        double d = level.active * level.gamma;
        for (size_t i = static_cast<size_t>(level.active); i < eig.size(); ++i)
            d += eig[i];
        return d;
    }

    double remote_rate_distortion(const PosteriorStats &ps, double D)
    {
        if (D < ps.d_mmse)
            throw InfeasibleError("remote_rate_distortion: D = " + std::to_string(D) +
                                  " is below the MMSE floor " + std::to_string(ps.d_mmse));
        const auto eig = eig_span(ps);
        return water_fill_rate(eig, water_level_for_distortion(eig, D - ps.d_mmse));
    }

    double remote_distortion_rate(const PosteriorStats &ps, double R)
    {
        if (R < 0.0)
            throw ConfigError("remote_distortion_rate: rate must be >= 0");
        const auto eig = eig_span(ps);
        return ps.d_mmse + water_fill_distortion(eig, water_level_for_rate(eig, R));
    }

    double qse_rd(int r, int beta_tr, int beta_fb)
    {
        if (r < 1)
            throw ConfigError("qse_rd: r must be >= 1");
        if (beta_tr < r)
            return 0.0;
        return std::min(static_cast<double>(beta_fb) / r, 1.0);
    }

    FeedbackResult rd_feedback_simulate(const PosteriorStats &ps, const CVec &mu, const CVec &u,
                                        const FeedbackBudget &budget, Rng &rng)
    {
        const double bits = budget.total_bits();
        if (bits < 0.0)
            throw ConfigError("rd_feedback_simulate: negative budget");

        const auto eig = eig_span(ps);
        const WaterLevel level = water_level_for_rate(eig, bits);
        const CVec w = ps.eig_vecs_u.adjoint() * (u - mu);

        CVec w_hat = CVec::Zero(w.size());
        FeedbackResult out;
        for (int l = 0; l < level.active; ++l)
        {
            const double shrink = 1.0 - level.gamma / eig[static_cast<size_t>(l)];
            w_hat(l) = shrink * w(l) + rng.complex_normal(level.gamma * shrink);
            out.support.push_back(l);
        }
        out.h_hat = mu + ps.eig_vecs_u * w_hat;
        out.bits = bits;
        out.symbols = budget.beta_fb;
        return out;
    }
} // namespace csifb
