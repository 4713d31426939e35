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

#include "csifb/cs_fb.hpp"

#include "csifb/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace csifb
{
    CVec Dictionary::atom(int c) const
    {
        if (c < 0 || c >= size())
            throw ConfigError("Dictionary::atom: index out of range");
        const int i = delay_index(c);
        const int j = angle_index(c);
        CVec v(static_cast<Eigen::Index>(M) * N);
        for (int n = 0; n < N; ++n)
            v.segment(static_cast<Eigen::Index>(n) * M, M) = B(n, i) * A.col(j);
        return v;
    }

    Dictionary build_dictionary(int M, int N, int G_a, int G_d, double f_s, double tau_max)
    {
        if (M < 1 || N < 1)
            throw ConfigError("build_dictionary: M and N must be >= 1");
        if (G_a < M || G_d < N)
            throw ConfigError("build_dictionary: grid sizes must be at least the ambient dimensions");
        if (!(f_s > 0.0) || !(tau_max > 0.0))
            throw ConfigError("build_dictionary: f_s and tau_max must be positive");

        Dictionary d;
        d.M = M;
        d.N = N;
        d.G_a = G_a;
        d.G_d = G_d;
        d.A.resize(M, G_a);
        d.B.resize(N, G_d);
        for (int j = 0; j < G_a; ++j)
        {
            const double s = -1.0 + 2.0 * j / G_a;
            d.sin_grid.push_back(s);
            d.A.col(j) = steering_vector(std::asin(s), M);
        }
        for (int i = 0; i < G_d; ++i)
        {
            const double tau = tau_max * i / G_d;
            d.delay_grid.push_back(tau);
            d.B.col(i) = delay_vector(tau, N, f_s);
        }
        return d;
    }

    void CsConfig::validate() const
    {
        if (s0 < 1)
            throw ConfigError("CsConfig: s0 must be >= 1");
        if (b < 1 || b > 30)
            throw ConfigError("CsConfig: b must lie in [1, 30]");
        if (!(amplitude_range > 0.0))
            throw ConfigError("CsConfig: amplitude_range must be positive");
    }

    CMat sensing_matrix(const Dictionary &dict, const TrainingMatrix &x)
    {
        const TrainingConfig &tc = x.config;
        if (x.x_tr.rows() != static_cast<Eigen::Index>(dict.M) * dict.N)
            throw ConfigError("sensing_matrix: training matrix does not match dictionary dimensions");
        if (static_cast<int>(tc.pilot_set.size()) * tc.T_p != x.beta_tr())
            throw ConfigError("sensing_matrix: training matrix lacks pilot-grid bookkeeping");

        // Only the M rows of the pilot subcarrier are nonzero in each column, so
        // Phi(col, (i, j)) = B(n, i) * (x_n^H a_j).
        CMat phi(x.beta_tr(), dict.size());
        for (int l = 0; l < tc.N_p; ++l)
        {
            const int n = tc.pilot_set[static_cast<size_t>(l)];
            for (int t = 0; t < tc.T_p; ++t)
            {
                const int col = l * tc.T_p + t;
                const Eigen::RowVectorXcd xa =
                    x.x_tr.col(col).segment(static_cast<Eigen::Index>(n) * dict.M, dict.M).adjoint() * dict.A;
                for (int i = 0; i < dict.G_d; ++i)
                    phi.row(col).segment(static_cast<Eigen::Index>(i) * dict.G_a, dict.G_a) = dict.B(n, i) * xa;
            }
        }
        return phi;
    }

    CVec sensing_column(const Dictionary &dict, const TrainingMatrix &x, int c)
    {
        return x.x_tr.adjoint() * dict.atom(c);
    }

    SparseCoefficients omp(const CRow &y_tr, const CMat &phi, int s0)
    {
        if (y_tr.size() != phi.rows())
            throw ConfigError("omp: measurement length does not match sensing matrix");
        if (s0 < 0 || s0 > phi.rows())
            throw ConfigError("omp: s0 must lie in [0, beta_tr]");

        const CVec y = y_tr.adjoint();
        const Eigen::Index G = phi.cols();
        const RVec norms = phi.colwise().norm().transpose();
        const double y_norm = y.norm();

        std::vector<char> blocked(static_cast<size_t>(G), 0);
        for (Eigen::Index c = 0; c < G; ++c)
            blocked[static_cast<size_t>(c)] = norms(c) <= 0.0;

        SparseCoefficients out;
        CVec residual = y;
        CVec coeffs;
        while (out.nonzeros() < s0)
        {
            if (residual.norm() <= 1e-12 * y_norm || y_norm == 0.0)
                break;

            const CVec corr = phi.adjoint() * residual;
            Eigen::Index best = -1;
            double best_score = 0.0;
            for (Eigen::Index c = 0; c < G; ++c)
            {
                if (blocked[static_cast<size_t>(c)])
                    continue;
                const double score = std::abs(corr(c)) / norms(c);
                if (score > best_score)
                {
                    best_score = score;
                    best = c;
                }
            }
            if (best < 0)
                break;

            out.support.push_back(static_cast<int>(best));
            blocked[static_cast<size_t>(best)] = 1;

            CMat sub(phi.rows(), out.nonzeros());
            for (int k = 0; k < out.nonzeros(); ++k)
                sub.col(k) = phi.col(out.support[static_cast<size_t>(k)]);
            Eigen::ColPivHouseholderQR<CMat> qr(sub);
            qr.setThreshold(1e-10);
            if (qr.rank() < out.nonzeros())
            {
                out.support.pop_back();
                continue;
            }
            coeffs = qr.solve(y);
            residual = y - sub * coeffs;
        }
        out.values = out.support.empty() ? CVec() : coeffs;
        return out;
    }

    int ceil_log2(std::int64_t x)
    {
        if (x < 1)
            throw ConfigError("ceil_log2: argument must be >= 1");
        int k = 0;
        while ((std::int64_t{1} << k) < x)
            ++k;
        return k;
    }

    std::int64_t cs_feedback_bits(int s0, int b, std::int64_t G_a, std::int64_t G_d)
    {
        if (s0 < 1 || b < 1 || G_a < 1 || G_d < 1)
            throw ConfigError("cs_feedback_bits: arguments must be positive");
        return 2LL * b * (s0 - 1) + ceil_log2(s0) + static_cast<std::int64_t>(s0) * ceil_log2(G_a * G_d);
    }

    namespace
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;

        // Nearest of {2^-b l : l = 1..2^b} for x in [0, 1].
        int amplitude_index(double x, int b)
        {
            const int levels = 1 << b;
            const auto l = static_cast<int>(std::lround(x * levels));
            return std::clamp(l, 1, levels);
        }

        // Nearest of {2 pi 2^-b l : l = 1..2^b}; l = 2^b is the zero phase.
        int phase_index(double phase, int b)
        {
            const int levels = 1 << b;
            double p = std::fmod(phase, two_pi);
            if (p < 0.0)
                p += two_pi;
            auto l = static_cast<int>(std::lround(p / two_pi * levels));
            if (l <= 0)
                l = levels;
            return std::min(l, levels);
        }

        cplx codepoint(double magnitude, int phase_idx, int b)
        {
            return std::polar(magnitude, two_pi * phase_idx / (1 << b));
        }
    } // namespace

    CsFeedbackMessage quantize_message(const SparseCoefficients &w, const CsConfig &cfg, const Dictionary &dict)
    {
        cfg.validate();
        if (w.values.size() != w.nonzeros())
            throw ConfigError("quantize_message: support and values differ in length");

        std::vector<int> order;
        for (int k = 0; k < w.nonzeros(); ++k)
            if (std::abs(w.values(k)) > 0.0)
                order.push_back(k);

        CsFeedbackMessage msg;
        if (order.empty())
        {
            msg.bits_formula = ceil_log2(cfg.s0);
            msg.bits_total = msg.bits_formula;
            return msg;
        }

        const auto ref_it = std::max_element(order.begin(), order.end(), [&](int a, int c) {
            return std::abs(w.values(a)) < std::abs(w.values(c));
        });
        std::rotate(order.begin(), ref_it, ref_it + 1);

        const cplx ref = w.values(order.front());
        const int levels = 1 << cfg.b;
        msg.support.push_back(w.support[static_cast<size_t>(order.front())]);
        msg.ref_amp_index = std::clamp(static_cast<int>(std::lround(std::abs(ref) / cfg.amplitude_range * levels)), 1,
                                       levels);
        msg.ref_phase_index = phase_index(std::arg(ref), cfg.b);

        for (size_t k = 1; k < order.size(); ++k)
        {
            const cplx rel = w.values(order[k]) / ref;
            msg.support.push_back(w.support[static_cast<size_t>(order[k])]);
            msg.amp_index.push_back(amplitude_index(std::abs(rel), cfg.b));
            msg.phase_index.push_back(phase_index(std::arg(rel), cfg.b));
        }

        const int s = static_cast<int>(msg.support.size());
        msg.bits_formula = cs_feedback_bits(s, cfg.b, dict.G_a, dict.G_d);
        msg.bits_total = msg.bits_formula + 2LL * cfg.b;
        return msg;
    }

    SparseCoefficients dequantize_message(const CsFeedbackMessage &msg, const CsConfig &cfg)
    {
        cfg.validate();
        SparseCoefficients w;
        w.support = msg.support;
        w.values.resize(static_cast<Eigen::Index>(msg.support.size()));
        if (msg.support.empty())
            return w;
        if (msg.amp_index.size() + 1 != msg.support.size() || msg.phase_index.size() != msg.amp_index.size())
            throw ConfigError("dequantize_message: malformed message");

        const double step = 1.0 / (1 << cfg.b);
        const cplx ref = codepoint(cfg.amplitude_range * msg.ref_amp_index * step, msg.ref_phase_index, cfg.b);
        w.values(0) = ref;
        for (size_t k = 0; k < msg.amp_index.size(); ++k)
            w.values(static_cast<Eigen::Index>(k + 1)) =
                ref * codepoint(msg.amp_index[k] * step, msg.phase_index[k], cfg.b);
        return w;
    }

    CVec reconstruct(const Dictionary &dict, const SparseCoefficients &w)
    {
        CVec h = CVec::Zero(static_cast<Eigen::Index>(dict.M) * dict.N);
        for (int k = 0; k < w.nonzeros(); ++k)
            h += w.values(k) * dict.atom(w.support[static_cast<size_t>(k)]);
        return h;
    }

    int cs_feasible_sparsity(const CsConfig &cfg, const Dictionary &dict, int beta_tr, const FeedbackBudget &budget)
    {
        cfg.validate();
        if (!(budget.c_ul > 0.0))
            return 0;
        for (int s = std::min(cfg.s0, beta_tr); s >= 1; --s)
        {
            const double bits = static_cast<double>(cs_feedback_bits(s, cfg.b, dict.G_a, dict.G_d) + 2LL * cfg.b);
            if (std::ceil(bits / budget.c_ul) <= budget.beta_fb)
                return s;
        }
        return 0;
    }

    FeedbackResult cs_feedback(const CRow &y_tr, const Dictionary &dict, const CMat &phi, const CsConfig &cfg,
                               const FeedbackBudget &budget)
    {
        FeedbackResult out;
        const int s = cs_feasible_sparsity(cfg, dict, static_cast<int>(phi.rows()), budget);
        if (s == 0)
        {
            out.h_hat = CVec::Zero(static_cast<Eigen::Index>(dict.M) * dict.N);
            out.feasible = false;
            return out;
        }

        CsConfig used = cfg;
        used.s0 = s;
        const CsFeedbackMessage msg = quantize_message(omp(y_tr, phi, s), used, dict);
        out.h_hat = reconstruct(dict, dequantize_message(msg, used));
        out.bits = static_cast<double>(msg.bits_total);
        out.symbols = static_cast<int>(std::ceil(out.bits / budget.c_ul));
        out.support = msg.support;
        return out;
    }

    FeedbackResult cs_feedback(const CRow &y_tr, const Dictionary &dict, const TrainingMatrix &x,
                               const CsConfig &cfg, const FeedbackBudget &budget)
    {
        return cs_feedback(y_tr, dict, sensing_matrix(dict, x), cfg, budget);
    }
} // namespace csifb
