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

#ifndef CSIFB_ANALOG_FB_HPP
#define CSIFB_ANALOG_FB_HPP

#include "csifb/feedback.hpp"
#include "csifb/training.hpp"

namespace csifb
{
    /// beta_tr x beta_fb spreading matrix Psi with columns psi_i = sqrt(a_i) phi_i.
    struct SpreadingMatrix
    {
        CMat psi;
        CMat phi;     // unit-norm base directions
        RVec scales;  // a_i

        int beta_fb() const noexcept { return static_cast<int>(psi.cols()); }
    };

    /// Per-symbol UL transmit power target M * snr_ul.
    inline double uplink_power(int M, double kappa, double snr_dl) { return M * kappa * snr_dl; }

    /// Builds Psi on the BS side. Directions are the columns of a random
    /// orthonormal basis of C^beta_tr, reused cyclically when beta_fb > beta_tr;
    /// each column is scaled so that psi^H R_y psi = power with
    /// R_y = X^H (Sigma_h + mu mu^H) X + I.
    SpreadingMatrix build_spreading(const ChannelStatistics &stats, const TrainingMatrix &x, double power,
                                    int beta_fb, Rng &rng);

    /// y_af = y_tr Psi + z_ul. Uses nothing but the received pilots and Psi.
    CRow af_transmit(const CRow &y_tr, const SpreadingMatrix &psi, Rng &rng, bool noiseless = false);

    /// BS-side LMMSE estimator of h from y_af. The filter
    /// Sigma_h X Psi Sigma_yaf^-1 and the closed-form distortion are computed once.
    class AnalogEstimator
    {
    public:
        AnalogEstimator(const ChannelStatistics &stats, const TrainingMatrix &x, const SpreadingMatrix &psi);

        CVec estimate(const CRow &y_af) const;

        /// tr(Sigma_h - Sigma_h X Psi Sigma_yaf^-1 Psi^H X^H Sigma_h)
        double distortion() const noexcept { return distortion_; }

        const CMat &filter() const noexcept { return filter_; }

    private:
        CMat filter_;
        CRow mean_;
        CVec mu_;
        double distortion_ = 0.0;
    };

    struct AnalogEstimate
    {
        CVec h_hat;
        double distortion = 0.0;
    };

    AnalogEstimate af_estimate(const ChannelStatistics &stats, const TrainingMatrix &x, const SpreadingMatrix &psi,
                               const CRow &y_af);

    /// 1 if min(beta_tr, beta_fb) >= r, else 0.
    double qse_af(int r, int beta_tr, int beta_fb);
} // namespace csifb

#endif
