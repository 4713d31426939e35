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

#include "csifb/ecsq.hpp"

#include "csifb/rd_bounds.hpp"
#include "csifb/rng.hpp"

#include <algorithm>
#include <cmath>
#include <span>

namespace csifb
{
    void EcsqConfig::validate() const
    {
        if (!(delta > 0.0) || !std::isfinite(delta))
            throw ConfigError("EcsqConfig: delta must be positive and finite");
    }

    KlCoefficients kl_analyze(const PosteriorStats &ps, const CVec &mu, const CVec &u)
    {
        if (u.size() != ps.eig_vecs_u.rows() || mu.size() != u.size())
            throw ConfigError("kl_analyze: dimension mismatch");
        return {ps.eig_vecs_u.adjoint() * (u - mu)};
    }

    double ecsq_dither(const EcsqConfig &cfg)
    {
        Rng rng = Rng(cfg.dither_seed).split(Stream::dither);
        return rng.uniform(-0.5 * cfg.delta, 0.5 * cfg.delta);
    }

    namespace
    {
        std::int64_t lattice_index(double x, double delta)
        {
            return static_cast<std::int64_t>(std::floor(x / delta + 0.5));
        }
    } // namespace

    EcsqCode ecsq_encode(const KlCoefficients &w, const EcsqConfig &cfg)
    {
        cfg.validate();
        const double z = ecsq_dither(cfg);

        EcsqCode code;
        code.symbols.reserve(static_cast<size_t>(2 * w.w.size()));
        for (Eigen::Index i = 0; i < w.w.size(); ++i)
        {
            code.symbols.push_back(lattice_index(w.w(i).real() + z, cfg.delta));
            code.symbols.push_back(lattice_index(w.w(i).imag() + z, cfg.delta));
        }
        code.w_hat = ecsq_dequantize(code.symbols, cfg);
        return code;
    }

    CVec ecsq_dequantize(const std::vector<std::int64_t> &symbols, const EcsqConfig &cfg)
    {
        cfg.validate();
        if (symbols.size() % 2 != 0)
            throw ConfigError("ecsq_dequantize: symbol stream must hold (re, im) pairs");
        const double z = ecsq_dither(cfg);
        CVec w_hat(static_cast<Eigen::Index>(symbols.size() / 2));
        for (Eigen::Index i = 0; i < w_hat.size(); ++i)
        {
            const double re = static_cast<double>(symbols[static_cast<size_t>(2 * i)]) * cfg.delta - z;
            const double im = static_cast<double>(symbols[static_cast<size_t>(2 * i + 1)]) * cfg.delta - z;
            w_hat(i) = {re, im};
        }
        return w_hat;
    }

    CVec ecsq_decode(const std::vector<std::int64_t> &symbols, const EcsqConfig &cfg, const PosteriorStats &ps,
                     const CVec &mu)
    {
        if (static_cast<Eigen::Index>(symbols.size()) != 2 * ps.eig_vecs_u.cols())
            throw ConfigError("ecsq_decode: symbol count does not match posterior rank");
        return mu + ps.eig_vecs_u * ecsq_dequantize(symbols, cfg);
    }

    double ecsq_rate(const PosteriorStats &ps, double D)
    {
        if (!(D > ps.d_mmse))
            throw InfeasibleError("ecsq_rate: target distortion must exceed the MMSE floor");
        return remote_rate_distortion(ps, D) + ecsq_overhead_bits * ps.r_tilde();
    }

    FeedbackResult ecsq_feedback(const PosteriorStats &ps, const CVec &mu, const CVec &u,
                                 const FeedbackBudget &budget, std::uint64_t dither_seed)
    {
        FeedbackResult out;
        const int r = ps.r_tilde();
        const double overhead = ecsq_overhead_bits * r;
        const double bits = budget.total_bits();
        if (r == 0 || !(bits > overhead))
        {
            out.h_hat = mu;
            out.feasible = r == 0;
            return out;
        }

        // Excess over d_mmse straight from water-filling; D - d_mmse cancels at high rate.
        const std::span<const double> eig(ps.eig_vals_u.data(), static_cast<size_t>(r));
        const double excess = water_fill_distortion(eig, water_level_for_rate(eig, bits - overhead));
        // Beyond ~40 bits per dimension the lattice index would outgrow the
        // double mantissa of the coefficients; clamp there.
        const double min_delta = std::ldexp(std::sqrt(ps.eig_vals_u(0)), -40);
        EcsqConfig cfg{std::max(std::sqrt(6.0 * excess / r), min_delta), dither_seed};
        const EcsqCode code = ecsq_encode(kl_analyze(ps, mu, u), cfg);

        out.h_hat = mu + ps.eig_vecs_u * code.w_hat;
        out.bits = bits;
        out.symbols = budget.beta_fb;
        for (int l = 0; l < r; ++l)
            out.support.push_back(l);
        return out;
    }
} // namespace csifb
