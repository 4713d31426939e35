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

#include "csifb/channel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

namespace csifb
{
    void SystemConfig::validate() const
    {
        if (M < 1 || N < 1)
            throw ConfigError("SystemConfig: M and N must be >= 1");
        if (K < 1 || K > M)
            throw ConfigError("SystemConfig: K must satisfy 1 <= K <= M");
        if (T < 1)
            throw ConfigError("SystemConfig: T must be >= 1");
        if (!(f_s > 0.0) || !(tau_max > 0.0))
            throw ConfigError("SystemConfig: f_s and tau_max must be positive");
        if (!(snr_dl > 0.0))
            throw ConfigError("SystemConfig: snr_dl must be positive");
        if (!(kappa > 0.0) || kappa > 1.0)
            throw ConfigError("SystemConfig: kappa must lie in (0, 1]");
    }

    namespace
    {
        // Keeps eigenpairs above the rank threshold, sorted descending.
        void select_eigenpairs(const RVec &vals, const CMat &vecs, RVec &out_vals, CMat &out_vecs)
        {
            std::vector<Eigen::Index> order(static_cast<size_t>(vals.size()));
            for (Eigen::Index i = 0; i < vals.size(); ++i)
                order[static_cast<size_t>(i)] = i;
            std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vals(a) > vals(b); });

            const double top = vals.size() > 0 ? vals(order.front()) : 0.0;
            Eigen::Index keep = 0;
            if (top > 0.0)
                while (keep < vals.size() && vals(order[static_cast<size_t>(keep)]) > ChannelStatistics::rank_threshold * top)
                    ++keep;

            out_vals.resize(keep);
            out_vecs.resize(vecs.rows(), keep);
            for (Eigen::Index i = 0; i < keep; ++i)
            {
                out_vals(i) = vals(order[static_cast<size_t>(i)]);
                out_vecs.col(i) = vecs.col(order[static_cast<size_t>(i)]);
            }
        }

        void check_dims(int M, int N, const CVec &mu)
        {
            if (M < 1 || N < 1)
                throw ConfigError("ChannelStatistics: M and N must be >= 1");
            if (mu.size() != static_cast<Eigen::Index>(M) * N)
                throw ConfigError("ChannelStatistics: mean length must equal M*N");
        }
    } // namespace

    ChannelStatistics ChannelStatistics::from_covariance(int M, int N, CVec mu, const CMat &sigma_h)
    {
        check_dims(M, N, mu);
        if (sigma_h.rows() != mu.size() || sigma_h.cols() != mu.size())
            throw ConfigError("ChannelStatistics: covariance must be MN x MN");

        ChannelStatistics s;
        s.M_ = M;
        s.N_ = N;
        s.mu_ = std::move(mu);
        s.sigma_h_ = 0.5 * (sigma_h + sigma_h.adjoint());

        Eigen::SelfAdjointEigenSolver<CMat> es(s.sigma_h_);
        if (es.info() != Eigen::Success)
            throw NumericalError("ChannelStatistics: eigendecomposition failed", std::nan(""));
        select_eigenpairs(es.eigenvalues(), es.eigenvectors(), s.eig_vals_, s.eig_u_);
        return s;
    }

    ChannelStatistics ChannelStatistics::from_factor(int M, int N, CVec mu, const CMat &q)
    {
        check_dims(M, N, mu);
        if (q.rows() != mu.size())
            throw ConfigError("ChannelStatistics: factor must have M*N rows");

        ChannelStatistics s;
        s.M_ = M;
        s.N_ = N;
        s.mu_ = std::move(mu);
        s.sigma_h_ = q * q.adjoint();

        if (q.cols() == 0)
        {
            s.eig_u_.resize(q.rows(), 0);
            return s;
        }
        Eigen::JacobiSVD<CMat> svd(q, Eigen::ComputeThinU);
        RVec vals = svd.singularValues().array().square();
        select_eigenpairs(vals, svd.matrixU(), s.eig_vals_, s.eig_u_);
        return s;
    }

    ChannelStatistics ChannelStatistics::from_parts(int M, int N, CVec mu, CMat sigma_h, CMat eig_u, RVec eig_vals)
    {
        check_dims(M, N, mu);
        if (sigma_h.rows() != mu.size() || sigma_h.cols() != mu.size() || eig_u.rows() != mu.size() ||
            eig_u.cols() != eig_vals.size())
            throw ConfigError("ChannelStatistics: inconsistent part dimensions");
        ChannelStatistics s;
        s.M_ = M;
        s.N_ = N;
        s.mu_ = std::move(mu);
        s.sigma_h_ = std::move(sigma_h);
        s.eig_u_ = std::move(eig_u);
        s.eig_vals_ = std::move(eig_vals);
        return s;
    }

    CVec steering_vector(double theta, int M)
    {
        if (M < 1)
            throw ConfigError("steering_vector: M must be >= 1");
        const double phase = std::numbers::pi * std::sin(theta);
        CVec a(M);
        for (int m = 0; m < M; ++m)
            a(m) = std::polar(1.0, phase * m);
        return a;
    }

    CVec delay_vector(double tau, int N, double f_s)
    {
        if (N < 1)
            throw ConfigError("delay_vector: N must be >= 1");
        const double phase = -2.0 * std::numbers::pi * f_s * tau;
        CVec b(N);
        for (int n = 0; n < N; ++n)
            b(n) = std::polar(1.0, phase * n);
        return b;
    }

    CVec multipath_atom(double theta, double tau, const SystemConfig &cfg)
    {
        const CVec a = steering_vector(theta, cfg.M);
        const CVec b = delay_vector(tau, cfg.N, cfg.f_s);
        CVec atom(static_cast<Eigen::Index>(cfg.M) * cfg.N);
        for (int n = 0; n < cfg.N; ++n)
            atom.segment(static_cast<Eigen::Index>(n) * cfg.M, cfg.M) = b(n) * a;
        return atom;
    }

    MultipathChannel gen_multipath_stats(const SystemConfig &cfg, int L, std::uint64_t seed)
    {
        cfg.validate();
        if (L < 1)
            throw ConfigError("gen_multipath_stats: L must be >= 1");

        Rng rng = Rng(seed).split(Stream::statistics);
        const double half_pi = 0.5 * std::numbers::pi;
        MultipathParams params;
        for (;;)
        {
            params.angles.assign(static_cast<size_t>(L), 0.0);
            params.delays.assign(static_cast<size_t>(L), 0.0);
            for (int l = 0; l < L; ++l)
            {
                params.angles[static_cast<size_t>(l)] = rng.uniform(-half_pi, half_pi);
                params.delays[static_cast<size_t>(l)] = rng.uniform(0.0, cfg.tau_max);
            }
            bool duplicate = false;
            for (int i = 0; i < L && !duplicate; ++i)
                for (int j = i + 1; j < L && !duplicate; ++j)
                    duplicate = params.angles[static_cast<size_t>(i)] == params.angles[static_cast<size_t>(j)] &&
                                params.delays[static_cast<size_t>(i)] == params.delays[static_cast<size_t>(j)];
            if (!duplicate)
                break;
        }

        CMat q(cfg.dim(), L);
        for (int l = 0; l < L; ++l)
            q.col(l) = multipath_atom(params.angles[static_cast<size_t>(l)], params.delays[static_cast<size_t>(l)], cfg);

        return {std::move(params), ChannelStatistics::from_factor(cfg.M, cfg.N, CVec::Zero(cfg.dim()), q)};
    }

    ChannelRealization sample_channel(const ChannelStatistics &stats, Rng &rng)
    {
        const CVec g = rng.complex_normal_vector(stats.rank());
        ChannelRealization out;
        out.M = stats.M();
        out.h = stats.mu();
        if (stats.rank() > 0)
            out.h.noalias() += stats.eig_u() * (stats.eig_vals().array().sqrt().matrix().cast<cplx>().asDiagonal() * g);
        return out;
    }

    // ---------------------------------------------------------------------
    // Statistics file container

    namespace
    {
        constexpr const char *stats_magic = "csifb-statistics";

        void write_doubles(std::ofstream &os, const double *p, size_t n)
        {
            os.write(reinterpret_cast<const char *>(p), static_cast<std::streamsize>(n * sizeof(double)));
        }

        void read_doubles(std::ifstream &is, double *p, size_t n, const std::filesystem::path &path)
        {
            is.read(reinterpret_cast<char *>(p), static_cast<std::streamsize>(n * sizeof(double)));
            if (!is)
                throw std::runtime_error("load_statistics: truncated payload in " + path.string());
        }
    } // namespace

    void save_statistics(const std::filesystem::path &path, const ChannelStatistics &stats,
                         const StatisticsFileHeader &header)
    {
        nlohmann::json j;
        j["format"] = stats_magic;
        j["version"] = 1;
        j["M"] = stats.M();
        j["N"] = stats.N();
        j["r"] = stats.rank();
        j["seed"] = header.seed;
        if (header.params.paths() > 0)
        {
            j["angles"] = header.params.angles;
            j["delays"] = header.params.delays;
        }

        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("save_statistics: cannot open " + path.string());
        os << j.dump() << '\n';

        const auto n = static_cast<size_t>(stats.dim());
        const auto r = static_cast<size_t>(stats.rank());
        write_doubles(os, reinterpret_cast<const double *>(stats.mu().data()), 2 * n);
        write_doubles(os, stats.eig_vals().data(), r);
        write_doubles(os, reinterpret_cast<const double *>(stats.eig_u().data()), 2 * n * r);
        write_doubles(os, reinterpret_cast<const double *>(stats.sigma_h().data()), 2 * n * n);
        if (!os)
            throw std::runtime_error("save_statistics: write failed for " + path.string());
    }

    ChannelStatistics load_statistics(const std::filesystem::path &path, StatisticsFileHeader *header)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw std::runtime_error("load_statistics: cannot open " + path.string());
        std::string line;
        if (!std::getline(is, line))
            throw std::runtime_error("load_statistics: missing header in " + path.string());

        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(line);
        }
        catch (const nlohmann::json::exception &e)
        {
            throw std::runtime_error("load_statistics: bad header in " + path.string() + ": " + e.what());
        }
        if (j.value("format", "") != stats_magic || j.value("version", 0) != 1)
            throw std::runtime_error("load_statistics: unsupported format in " + path.string());

        const int M = j.at("M").get<int>();
        const int N = j.at("N").get<int>();
        const int r = j.at("r").get<int>();
        if (M < 1 || N < 1 || r < 0 || r > M * N)
            throw std::runtime_error("load_statistics: invalid dimensions in " + path.string());

        const Eigen::Index n = static_cast<Eigen::Index>(M) * N;
        CVec mu(n);
        RVec vals(r);
        CMat u(n, r);
        CMat sigma(n, n);
        read_doubles(is, reinterpret_cast<double *>(mu.data()), static_cast<size_t>(2 * n), path);
        read_doubles(is, vals.data(), static_cast<size_t>(r), path);
        read_doubles(is, reinterpret_cast<double *>(u.data()), static_cast<size_t>(2 * n * r), path);
        read_doubles(is, reinterpret_cast<double *>(sigma.data()), static_cast<size_t>(2 * n * n), path);

        if (header)
        {
            header->M = M;
            header->N = N;
            header->r = r;
            header->seed = j.value("seed", std::uint64_t{0});
            header->params = {};
            if (j.contains("angles"))
            {
                header->params.angles = j.at("angles").get<std::vector<double>>();
                header->params.delays = j.at("delays").get<std::vector<double>>();
            }
        }
        return ChannelStatistics::from_parts(M, N, std::move(mu), std::move(sigma), std::move(u), std::move(vals));
    }
} // namespace csifb
