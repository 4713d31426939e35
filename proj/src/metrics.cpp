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

#include "csifb/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace csifb
{
    double normalized_mse(const CVec &h, const CVec &h_hat)
    {
        if (h.size() != h_hat.size() || h.size() == 0)
            throw ConfigError("normalized_mse: vectors must be nonempty and of equal length");
        return (h - h_hat).squaredNorm() / static_cast<double>(h.size());
    }

    void MseAccumulator::add(const CVec &h, const CVec &h_hat) { add_value(normalized_mse(h, h_hat)); }

    void MseAccumulator::add_value(double normalized_error)
    {
        sum_ += normalized_error;
        ++count_;
    }

    void MseAccumulator::merge(const MseAccumulator &other)
    {
        sum_ += other.sum_;
        count_ += other.count_;
    }

    double MseAccumulator::mean() const
    {
        if (count_ == 0)
            throw ConfigError("MseAccumulator: no samples");
        return sum_ / static_cast<double>(count_);
    }

    CMat zf_precoder(const CMat &h_hat, bool *regularized)
    {
        const Eigen::Index M = h_hat.rows();
        const Eigen::Index K = h_hat.cols();
        if (K > M)
            throw ConfigError("zf_precoder: more users than antennas");
        if (regularized)
            *regularized = false;

        CMat gram = h_hat.adjoint() * h_hat;
        const double tr = gram.trace().real();
        if (!(tr > 0.0))
            return CMat::Zero(M, K);

        Eigen::FullPivLU<CMat> lu(gram);
        lu.setThreshold(1e-12);
        if (lu.rank() < K)
        {
            gram.diagonal().array() += 1e-12 * tr;
            if (regularized)
                *regularized = true;
        }
        CMat v = h_hat * gram.ldlt().solve(CMat::Identity(K, K));
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const double n = v.col(k).norm();
            if (n > 0.0 && std::isfinite(n))
                v.col(k) /= n;
            else
                v.col(k).setZero();
        }
        return v;
    }

    CMat subcarrier_matrix(const std::vector<CVec> &h, int M, int n)
    {
        CMat out(M, static_cast<Eigen::Index>(h.size()));
        for (size_t k = 0; k < h.size(); ++k)
            out.col(static_cast<Eigen::Index>(k)) = h[k].segment(static_cast<Eigen::Index>(n) * M, M);
        return out;
    }

    PrecoderSet zf_precoders(const std::vector<CVec> &h_hat, int M, int N)
    {
        PrecoderSet out;
        out.v.reserve(static_cast<size_t>(N));
        for (int n = 0; n < N; ++n)
        {
            bool reg = false;
            out.v.push_back(zf_precoder(subcarrier_matrix(h_hat, M, n), &reg));
            out.regularized = out.regularized || reg;
        }
        return out;
    }

    double rate_weight(const SystemConfig &cfg, const TrainingConfig &tcfg, int n)
    {
        const double beta = static_cast<double>(cfg.T) * cfg.N;
        return (tcfg.is_pilot(n) ? cfg.T - tcfg.T_p : cfg.T) / beta;
    }

    RateAccumulator::RateAccumulator(int K, int N) : sum_(RMat::Zero(K, N)) {}

    void RateAccumulator::add(const std::vector<CVec> &h, const PrecoderSet &pre, int M, double snr_dl)
    {
        const auto K = static_cast<Eigen::Index>(h.size());
        const auto N = static_cast<Eigen::Index>(pre.v.size());
        if (sum_.rows() != K || sum_.cols() != N)
            throw ConfigError("RateAccumulator: shape mismatch");
        const double power = snr_dl / static_cast<double>(K);
        for (Eigen::Index n = 0; n < N; ++n)
        {
            // g(k, k') = h_k^H v_k'
            const CMat g = subcarrier_matrix(h, M, static_cast<int>(n)).adjoint() * pre.v[static_cast<size_t>(n)];
            for (Eigen::Index k = 0; k < K; ++k)
            {
                const double signal = power * std::norm(g(k, k));
                const double interference = power * (g.row(k).squaredNorm() - std::norm(g(k, k)));
                sum_(k, n) += std::log2(1.0 + signal / (1.0 + interference));
            }
        }
        ++count_;
    }

    void RateAccumulator::merge(const RateAccumulator &other)
    {
        if (other.count_ == 0)
            return;
        if (count_ == 0)
        {
            *this = other;
            return;
        }
        sum_ += other.sum_;
        count_ += other.count_;
    }

    RateReport RateAccumulator::report(const SystemConfig &cfg, const TrainingConfig &tcfg) const
    {
        if (count_ == 0)
            throw ConfigError("RateAccumulator: no samples");
        RateReport r;
        r.draws = count_;
        r.per_user = sum_ / static_cast<double>(count_);
        for (Eigen::Index n = 0; n < r.per_user.cols(); ++n)
            r.r_avg += rate_weight(cfg, tcfg, static_cast<int>(n)) * r.per_user.col(n).sum();
        return r;
    }

    QseFit fit_qse(std::span<const double> snr, std::span<const double> mse)
    {
        if (snr.size() != mse.size())
            throw ConfigError("fit_qse: snr and mse lengths differ");
        if (snr.size() < 3)
            throw ConfigError("fit_qse: need at least 3 points");

        std::vector<double> x, y;
        for (size_t i = 0; i < snr.size(); ++i)
        {
            if (!(snr[i] > 0.0) || !(mse[i] > 0.0))
                throw ConfigError("fit_qse: snr and mse must be positive");
            x.push_back(std::log2(snr[i]));
            y.push_back(std::log2(mse[i]));
        }
        const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
        if (10.0 * std::log10(2.0) * (*hi - *lo) < 20.0 - 1e-9)
            throw ConfigError("fit_qse: SNR points must span at least 20 dB");

        const double n = static_cast<double>(x.size());
        double mx = 0.0, my = 0.0;
        for (size_t i = 0; i < x.size(); ++i)
        {
            mx += x[i];
            my += y[i];
        }
        mx /= n;
        my /= n;
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (size_t i = 0; i < x.size(); ++i)
        {
            sxx += (x[i] - mx) * (x[i] - mx);
            sxy += (x[i] - mx) * (y[i] - my);
            syy += (y[i] - my) * (y[i] - my);
        }
        const double slope = sxy / sxx;

        QseFit fit;
        fit.alpha = -slope;
        fit.intercept = my - slope * mx;
        double ss_res = 0.0;
        for (size_t i = 0; i < x.size(); ++i)
        {
            const double e = y[i] - (fit.intercept + slope * x[i]);
            fit.residuals.push_back(e);
            ss_res += e * e;
        }
        fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
        return fit;
    }

    double log_slope(double snr_lo, double mse_lo, double snr_hi, double mse_hi)
    {
        if (!(snr_lo > 0.0) || !(snr_hi > 0.0) || !(mse_lo > 0.0) || !(mse_hi > 0.0) || snr_lo == snr_hi)
            throw ConfigError("log_slope: arguments must be positive with distinct SNRs");
        return std::log2(mse_hi / mse_lo) / std::log2(snr_hi / snr_lo);
    }
} // namespace csifb
