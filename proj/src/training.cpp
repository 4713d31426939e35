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

#include "csifb/training.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace csifb
{
    TrainingConfig TrainingConfig::uniform(const SystemConfig &cfg, int N_p, int T_p)
    {
        TrainingConfig t;
        t.N_p = N_p;
        t.T_p = T_p;
        if (N_p >= 1 && N_p <= cfg.N)
            for (int i = 0; i < N_p; ++i)
                t.pilot_set.push_back(static_cast<int>((static_cast<long long>(i) * cfg.N) / N_p));
        t.validate(cfg);
        return t;
    }

    TrainingConfig TrainingConfig::for_beta(const SystemConfig &cfg, int beta_tr)
    {
        if (beta_tr < 1 || beta_tr > cfg.T * cfg.N)
            throw ConfigError("TrainingConfig: beta_tr = " + std::to_string(beta_tr) + " outside [1, T*N]");
        for (int n_p = std::min(cfg.N, beta_tr); n_p >= 1; --n_p)
            if (beta_tr % n_p == 0 && beta_tr / n_p <= cfg.T)
                return uniform(cfg, n_p, beta_tr / n_p);
        throw ConfigError("TrainingConfig: no N_p x T_p grid realizes beta_tr = " + std::to_string(beta_tr));
    }

    void TrainingConfig::validate(const SystemConfig &cfg) const
    {
        if (N_p < 1 || N_p > cfg.N)
            throw ConfigError("TrainingConfig: N_p must satisfy 1 <= N_p <= N");
        if (T_p < 1 || T_p > cfg.T)
            throw ConfigError("TrainingConfig: T_p must satisfy 1 <= T_p <= T");
        if (static_cast<int>(pilot_set.size()) != N_p)
            throw ConfigError("TrainingConfig: |pilot_set| must equal N_p");
        for (size_t i = 0; i < pilot_set.size(); ++i)
        {
            if (pilot_set[i] < 0 || pilot_set[i] >= cfg.N)
                throw ConfigError("TrainingConfig: pilot index out of range");
            if (i > 0 && pilot_set[i] <= pilot_set[i - 1])
                throw ConfigError("TrainingConfig: pilot_set must be strictly increasing");
        }
    }

    bool TrainingConfig::is_pilot(int n) const { return std::binary_search(pilot_set.begin(), pilot_set.end(), n); }

    TrainingMatrix TrainingMatrix::rescaled(double snr) const
    {
        if (!(snr > 0.0) || !(snr_dl > 0.0))
            throw ConfigError("TrainingMatrix::rescaled: SNR must be positive");
        TrainingMatrix out = *this;
        out.x_tr *= std::sqrt(snr / snr_dl);
        out.snr_dl = snr;
        return out;
    }

    TrainingMatrix build_training_matrix(const SystemConfig &cfg, const TrainingConfig &tcfg, Rng &rng)
    {
        cfg.validate();
        tcfg.validate(cfg);

        TrainingMatrix x;
        x.snr_dl = cfg.snr_dl;
        x.config = tcfg;
        x.x_tr = CMat::Zero(cfg.dim(), tcfg.beta_tr());

        // Unit-power X0 first, then a single sqrt(snr) scale.
        const double var0 = 1.0 / cfg.M;
        for (int l = 0; l < tcfg.N_p; ++l)
        {
            const Eigen::Index row0 = static_cast<Eigen::Index>(tcfg.pilot_set[static_cast<size_t>(l)]) * cfg.M;
            for (int t = 0; t < tcfg.T_p; ++t)
                x.x_tr.col(l * tcfg.T_p + t).segment(row0, cfg.M) = rng.complex_normal_vector(cfg.M, var0);
        }
        x.x_tr *= std::sqrt(cfg.snr_dl);
        return x;
    }

    CRow observe_pilots(const CVec &h, const TrainingMatrix &x, Rng &rng, bool noiseless)
    {
        if (h.size() != x.x_tr.rows())
            throw ConfigError("observe_pilots: channel length does not match training matrix");
        CRow y = h.adjoint() * x.x_tr;
        if (!noiseless)
            for (Eigen::Index i = 0; i < y.size(); ++i)
                y(i) += rng.complex_normal();
        return y;
    }

    PosteriorStats posterior_stats(const ChannelStatistics &stats, const TrainingMatrix &x)
    {
        const CMat &X = x.x_tr;
        if (X.rows() != stats.dim())
            throw ConfigError("posterior_stats: training matrix has wrong row count");

        const Eigen::Index beta = X.cols();
        const CMat &U = stats.eig_u();
        const auto lambda = stats.eig_vals().cast<cplx>().asDiagonal();

        // Sigma_h = U diag(lambda) U^H, so everything lives in the r-dim range of U.
        const CMat ux = U.adjoint() * X;        // r x beta
        const CMat w = lambda * ux;             // r x beta
        const CMat sx = U * w;                  // Sigma_h X, MN x beta

        CMat gram = ux.adjoint() * w;           // X^H Sigma_h X
        gram = 0.5 * (gram + gram.adjoint()).eval();
        gram += CMat::Identity(beta, beta);

        Eigen::LLT<CMat> llt(gram);
        if (llt.info() != Eigen::Success)
        {
            Eigen::SelfAdjointEigenSolver<CMat> es(gram, Eigen::EigenvaluesOnly);
            const auto &ev = es.eigenvalues();
            throw NumericalError("posterior_stats: Gram system X^H Sigma_h X + I is not positive definite",
                                 ev.size() ? ev.maxCoeff() / ev.minCoeff() : std::nan(""));
        }

        PosteriorStats ps;
        ps.gain = llt.solve(sx.adjoint()).adjoint();   // Sigma_h X G^-1, G Hermitian
        ps.sigma_u = ps.gain * sx.adjoint();
        ps.sigma_u = 0.5 * (ps.sigma_u + ps.sigma_u.adjoint()).eval();

        // U^H Sigma_u U = W G^-1 W^H (r x r); its eigenvectors lift through U.
        CMat core = w * llt.solve(w.adjoint());
        core = 0.5 * (core + core.adjoint()).eval();

        ps.eig_vecs_u.resize(stats.dim(), 0);
        if (core.rows() > 0)
        {
            Eigen::SelfAdjointEigenSolver<CMat> es(core);
            if (es.info() != Eigen::Success)
                throw NumericalError("posterior_stats: eigendecomposition of Sigma_u failed", std::nan(""));
            const RVec &ev = es.eigenvalues(); // ascending
            const double top = ev(ev.size() - 1);
            Eigen::Index keep = 0;
            if (top > 0.0)
                while (keep < ev.size() && ev(ev.size() - 1 - keep) > ChannelStatistics::rank_threshold * top)
                    ++keep;
            ps.eig_vals_u.resize(keep);
            ps.eig_vecs_u.resize(stats.dim(), keep);
            for (Eigen::Index i = 0; i < keep; ++i)
            {
                const Eigen::Index src = ev.size() - 1 - i;
                ps.eig_vals_u(i) = ev(src);
                ps.eig_vecs_u.col(i) = U * es.eigenvectors().col(src);
            }
        }

        ps.d_mmse = std::max(0.0, stats.trace() - ps.sigma_u.trace().real());
        return ps;
    }

    CVec mmse_estimate(const PosteriorStats &ps, const CVec &mu, const CRow &y, const TrainingMatrix &x)
    {
        if (y.size() != x.x_tr.cols() || ps.gain.cols() != y.size() || mu.size() != ps.gain.rows())
            throw ConfigError("mmse_estimate: dimension mismatch");
        const CRow innovation = y - mu.adjoint() * x.x_tr;
        return ps.gain * innovation.adjoint() + mu;
    }
} // namespace csifb
