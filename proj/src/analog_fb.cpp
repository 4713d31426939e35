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

#include "csifb/analog_fb.hpp"

#include <cmath>

namespace csifb
{
    namespace
    {
        // Sigma_h X through the eigen-factor of Sigma_h.
        CMat sigma_times(const ChannelStatistics &stats, const CMat &x)
        {
            const CMat ux = stats.eig_u().adjoint() * x;
            return stats.eig_u() * (stats.eig_vals().cast<cplx>().asDiagonal() * ux);
        }
    } // namespace

    SpreadingMatrix build_spreading(const ChannelStatistics &stats, const TrainingMatrix &x, double power,
                                    int beta_fb, Rng &rng)
    {
        if (beta_fb < 1)
            throw ConfigError("build_spreading: beta_fb must be >= 1");
        if (!(power > 0.0))
            throw ConfigError("build_spreading: UL power must be positive");

        const Eigen::Index beta_tr = x.x_tr.cols();
        const CMat &X = x.x_tr;
        const CVec mx = X.adjoint() * stats.mu();
        CMat r_y = X.adjoint() * sigma_times(stats, X) + mx * mx.adjoint();
        r_y = 0.5 * (r_y + r_y.adjoint()).eval();
        r_y += CMat::Identity(beta_tr, beta_tr);

        // Random unitary basis: Q factor of a Gaussian matrix.
        const CMat g = rng.complex_normal_matrix(beta_tr, beta_tr);
        const CMat basis = Eigen::HouseholderQR<CMat>(g).householderQ() * CMat::Identity(beta_tr, beta_tr);

        SpreadingMatrix s;
        s.phi.resize(beta_tr, beta_fb);
        s.psi.resize(beta_tr, beta_fb);
        s.scales.resize(beta_fb);
        for (int i = 0; i < beta_fb; ++i)
        {
            s.phi.col(i) = basis.col(i % beta_tr);
            const double quad = (s.phi.col(i).adjoint() * r_y * s.phi.col(i)).value().real();
            s.scales(i) = power / quad;
            s.psi.col(i) = std::sqrt(s.scales(i)) * s.phi.col(i);
        }
        return s;
    }

    CRow af_transmit(const CRow &y_tr, const SpreadingMatrix &psi, Rng &rng, bool noiseless)
    {
        if (y_tr.size() != psi.psi.rows())
            throw ConfigError("af_transmit: pilot vector length does not match Psi");
        CRow y = y_tr * psi.psi;
        if (!noiseless)
            for (Eigen::Index i = 0; i < y.size(); ++i)
                y(i) += rng.complex_normal();
        return y;
    }

    AnalogEstimator::AnalogEstimator(const ChannelStatistics &stats, const TrainingMatrix &x,
                                     const SpreadingMatrix &psi)
        : mu_(stats.mu())
    {
        if (x.x_tr.rows() != stats.dim() || psi.psi.rows() != x.x_tr.cols())
            throw ConfigError("AnalogEstimator: dimension mismatch");

        const CMat xpsi = x.x_tr * psi.psi;          // MN x beta_fb
        const CMat cross = sigma_times(stats, xpsi); // Sigma_h X Psi
        const Eigen::Index nfb = psi.psi.cols();

        CMat cov = xpsi.adjoint() * cross + psi.psi.adjoint() * psi.psi;
        cov = 0.5 * (cov + cov.adjoint()).eval();
        cov += CMat::Identity(nfb, nfb);

        Eigen::LLT<CMat> llt(cov);
        if (llt.info() != Eigen::Success)
        {
            Eigen::SelfAdjointEigenSolver<CMat> es(cov, Eigen::EigenvaluesOnly);
            throw NumericalError("AnalogEstimator: feedback covariance is not positive definite",
                                 es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff());
        }
        filter_ = llt.solve(cross.adjoint()).adjoint();
        mean_ = stats.mu().adjoint() * xpsi;
        distortion_ = stats.trace() - (filter_ * cross.adjoint()).trace().real();
    }

    CVec AnalogEstimator::estimate(const CRow &y_af) const
    {
        if (y_af.size() != filter_.cols())
            throw ConfigError("AnalogEstimator: feedback length mismatch");
        const CRow innovation = y_af - mean_;
        return filter_ * innovation.adjoint() + mu_;
    }

    AnalogEstimate af_estimate(const ChannelStatistics &stats, const TrainingMatrix &x, const SpreadingMatrix &psi,
                               const CRow &y_af)
    {
        AnalogEstimator est(stats, x, psi);
        return {est.estimate(y_af), est.distortion()};
    }

    double qse_af(int r, int beta_tr, int beta_fb)
    {
        if (r < 1)
            throw ConfigError("qse_af: r must be >= 1");
        return std::min(beta_tr, beta_fb) >= r ? 1.0 : 0.0;
    }
} // namespace csifb
