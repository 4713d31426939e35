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

#ifndef CSIFB_METRICS_HPP
#define CSIFB_METRICS_HPP

#include "csifb/training.hpp"

#include <span>
#include <vector>

namespace csifb
{
    /// ||h - h_hat||^2 / MN for one pair.
    double normalized_mse(const CVec &h, const CVec &h_hat);

    /// Running mean of normalized squared errors.
    class MseAccumulator
    {
    public:
        void add(const CVec &h, const CVec &h_hat);
        void add_value(double normalized_error);
        void merge(const MseAccumulator &other);

        long long count() const noexcept { return count_; }
        double sum() const noexcept { return sum_; }
        /// Throws when empty.
        double mean() const;

    private:
        double sum_ = 0.0;
        long long count_ = 0;
    };

    /// Per-subcarrier ZF precoders, columns unit norm (or zero).
    struct PrecoderSet
    {
        std::vector<CMat> v;      // N matrices, M x K
        bool regularized = false; // set when any subcarrier needed diagonal loading
    };

    /// V = H_hat (H_hat^H H_hat)^-1 with unit-norm columns. A rank-deficient
    /// H_hat is loaded with 1e-12 * trace on the diagonal and flagged; an
    /// all-zero estimate gives all-zero precoders.
    CMat zf_precoder(const CMat &h_hat, bool *regularized = nullptr);

    /// Builds V[n] for every subcarrier from per-user estimates (each MN long).
    PrecoderSet zf_precoders(const std::vector<CVec> &h_hat, int M, int N);

    /// Stacks user n-th subcarrier blocks into an M x K matrix.
    CMat subcarrier_matrix(const std::vector<CVec> &h, int M, int n);

    /// Weight of subcarrier n in the frame-average rate: T / beta on data
    /// subcarriers, (T - T_p) / beta on pilot subcarriers, beta = T N.
    double rate_weight(const SystemConfig &cfg, const TrainingConfig &tcfg, int n);

    struct RateReport
    {
        RMat per_user;       // K x N ergodic rates, bits/s/Hz
        double r_avg = 0.0;  // overhead-weighted sum-rate
        long long draws = 0;
    };

    /// Accumulates log2(1 + SINR_k[n]) with P_k = snr_dl / K over draws.
    class RateAccumulator
    {
    public:
        RateAccumulator() = default;
        RateAccumulator(int K, int N);

        /// h and precoders are per-user and per-subcarrier respectively.
        void add(const std::vector<CVec> &h, const PrecoderSet &pre, int M, double snr_dl);
        void merge(const RateAccumulator &other);

        long long count() const noexcept { return count_; }
        RateReport report(const SystemConfig &cfg, const TrainingConfig &tcfg) const;

    private:
        RMat sum_;
        long long count_ = 0;
    };

    struct QseFit
    {
        double alpha = 0.0;      // negated slope of log2(mse) against log2(snr)
        double intercept = 0.0;  // log2(mse) at snr = 1
        double r_squared = 1.0;
        std::vector<double> residuals;
    };

    /// Least-squares fit of log2(mse) = intercept - alpha log2(snr). Needs
    /// at least 3 points spanning at least 20 dB. SNRs are linear.
    QseFit fit_qse(std::span<const double> snr, std::span<const double> mse);

    /// log2(mse_hi / mse_lo) / log2(snr_hi / snr_lo); near 0 on a plateau.
    double log_slope(double snr_lo, double mse_lo, double snr_hi, double mse_hi);
} // namespace csifb

#endif
