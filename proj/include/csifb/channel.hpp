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

#ifndef CSIFB_CHANNEL_HPP
#define CSIFB_CHANNEL_HPP

#include "csifb/rng.hpp"
#include "csifb/types.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace csifb
{
    /// System dimensions and link parameters shared by every module.
    struct SystemConfig
    {
        int M = 8;               // BS antennas
        int N = 8;               // OFDM subcarriers
        int K = 1;               // users
        int T = 25;              // OFDM symbols per coherence frame
        double f_s = 30e3;       // subcarrier spacing [Hz]
        double tau_max = 7e-6;   // maximum delay spread [s]
        double snr_dl = 100.0;   // downlink SNR (linear)
        double kappa = 0.1;      // UL/DL SNR ratio

        int dim() const noexcept { return M * N; }
        int frame_size() const noexcept { return T * N; }
        double snr_ul() const noexcept { return kappa * snr_dl; }

        // Throws ConfigError when an invariant is violated.
        void validate() const;
    };

    struct MultipathParams
    {
        std::vector<double> angles; // [rad], in [-pi/2, pi/2]
        std::vector<double> delays; // [s], in [0, tau_max]

        int paths() const noexcept { return static_cast<int>(angles.size()); }
    };

    /// Mean and covariance of h ~ CN(mu, Sigma_h) together with the thinned
    /// eigendecomposition Sigma_h = U diag(lambda) U^H. Immutable once built.
    class ChannelStatistics
    {
    public:
        // Eigenvalues below rank_threshold * lambda_max are treated as zero.
        static constexpr double rank_threshold = 1e-10;

        ChannelStatistics() = default;

        /// Statistics from an explicit Hermitian PSD covariance (full eigendecomposition).
        static ChannelStatistics from_covariance(int M, int N, CVec mu, const CMat &sigma_h);

        /// Statistics with Sigma_h = Q Q^H, decomposed through a thin SVD of Q.
        static ChannelStatistics from_factor(int M, int N, CVec mu, const CMat &q);

        /// Raw constructor for deserialization; no recomputation.
        static ChannelStatistics from_parts(int M, int N, CVec mu, CMat sigma_h, CMat eig_u, RVec eig_vals);

        int M() const noexcept { return M_; }
        int N() const noexcept { return N_; }
        int dim() const noexcept { return M_ * N_; }
        int rank() const noexcept { return static_cast<int>(eig_vals_.size()); }

        const CVec &mu() const noexcept { return mu_; }
        const CMat &sigma_h() const noexcept { return sigma_h_; }
        const CMat &eig_u() const noexcept { return eig_u_; }
        const RVec &eig_vals() const noexcept { return eig_vals_; }
        double trace() const noexcept { return sigma_h_.trace().real(); }

    private:
        int M_ = 0;
        int N_ = 0;
        CVec mu_;
        CMat sigma_h_;
        CMat eig_u_;
        RVec eig_vals_;
    };

    /// Wideband channel h = [h[0]^T, ..., h[N-1]^T]^T, antenna index fastest.
    struct ChannelRealization
    {
        CVec h;
        int M = 0;

        // Length-M slice for subcarrier n (0-based).
        auto subcarrier(int n) const { return h.segment(static_cast<Eigen::Index>(n) * M, M); }
    };

    /// ULA steering vector with half-wavelength spacing: exp(j pi m sin(theta)).
    CVec steering_vector(double theta, int M);

    /// Delay phase ramp: exp(-j 2 pi n f_s tau), n = 0..N-1.
    CVec delay_vector(double tau, int N, double f_s);

    /// b (x) a, matching the antenna-fastest vectorization.
    CVec multipath_atom(double theta, double tau, const SystemConfig &cfg);

    struct MultipathChannel
    {
        MultipathParams params;
        ChannelStatistics stats;
    };

    /// Random L-path channel law: angles ~ U[-pi/2, pi/2], delays ~ U[0, tau_max],
    /// unit-variance path gains, mu = 0, Sigma_h = sum_l (b b^H) (x) (a a^H).
    MultipathChannel gen_multipath_stats(const SystemConfig &cfg, int L, std::uint64_t seed);

    /// h = mu + U diag(sqrt(lambda)) g, g ~ CN(0, I_r).
    ChannelRealization sample_channel(const ChannelStatistics &stats, Rng &rng);

    /// Binary statistics container: one JSON header line followed by raw
    /// little-endian doubles (mu, eigenvalues, eigenvectors, Sigma_h).
    struct StatisticsFileHeader
    {
        int M = 0;
        int N = 0;
        int r = 0;
        std::uint64_t seed = 0;
        MultipathParams params;
    };

    void save_statistics(const std::filesystem::path &path, const ChannelStatistics &stats,
                         const StatisticsFileHeader &header);
    ChannelStatistics load_statistics(const std::filesystem::path &path, StatisticsFileHeader *header = nullptr);
} // namespace csifb

#endif
