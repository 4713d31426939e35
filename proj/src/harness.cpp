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

#include "csifb/harness.hpp"

#include "csifb/analog_fb.hpp"
#include "csifb/cs_fb.hpp"
#include "csifb/ecsq.hpp"
#include "csifb/metrics.hpp"
#include "csifb/rd_bounds.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

namespace csifb
{
    using nlohmann::json;

    std::string_view scheme_name(Scheme s) noexcept
    {
        switch (s)
        {
        case Scheme::rd: return "rd";
        case Scheme::ecsq: return "ecsq";
        case Scheme::af: return "af";
        case Scheme::cs: return "cs";
        }
        return "?";
    }

    Scheme parse_scheme(std::string_view name)
    {
        for (Scheme s : {Scheme::rd, Scheme::ecsq, Scheme::af, Scheme::cs})
            if (scheme_name(s) == name)
                return s;
        throw ConfigError("unknown scheme '" + std::string(name) + "'");
    }

    void ExperimentSpec::validate() const
    {
        system.validate();
        if (snr_db.empty())
            throw ConfigError("spec: snr_db must be nonempty");
        if (dims.empty())
            throw ConfigError("spec: dims must be nonempty");
        if (schemes.empty())
            throw ConfigError("spec: schemes must be nonempty");
        for (double s : snr_db)
            if (!std::isfinite(s))
                throw ConfigError("spec: snr_db entries must be finite");
        for (const DimPair &d : dims)
        {
            if (d.beta_tr < 1 || d.beta_tr > system.frame_size())
                throw ConfigError("spec: beta_tr must lie in [1, T*N]");
            if (d.beta_fb < 1)
                throw ConfigError("spec: beta_fb must be >= 1");
        }
        if (system.K > system.M)
            throw ConfigError("spec: K must not exceed M");
        if (statistics_files.empty() && paths < 1)
            throw ConfigError("spec: paths must be >= 1");
        if (statistics_draws < 1 || training_draws < 1)
            throw ConfigError("spec: statistics_draws and training_draws must be >= 1");
        if (!statistics_files.empty() &&
            statistics_files.size() != static_cast<size_t>(statistics_draws) * static_cast<size_t>(system.K))
            throw ConfigError("spec: statistics_files must hold statistics_draws * K entries");
        if (channel_draws < 1 || chunk_size < 1)
            throw ConfigError("spec: channel_draws and chunk_size must be >= 1");
        if (cs.s0 < 0 || cs.b < 1 || cs.b > 30 || cs.G_a < 0 || cs.G_d < 0 || !(cs.amplitude_range > 0.0))
            throw ConfigError("spec: invalid cs options");
        if ((cs.G_a != 0 && cs.G_a < system.M) || (cs.G_d != 0 && cs.G_d < system.N))
            throw ConfigError("spec: cs grid sizes must be at least M and N");
    }

    namespace
    {
        template <class T>
        void read_opt(const json &j, const char *key, T &out)
        {
            if (j.contains(key))
                out = j.at(key).get<T>();
        }

        void reject_unknown(const json &j, std::initializer_list<std::string_view> known, const char *where)
        {
            for (auto it = j.begin(); it != j.end(); ++it)
                if (std::find(known.begin(), known.end(), it.key()) == known.end())
                    throw ConfigError(std::string("spec: unknown key '") + it.key() + "' in " + where);
        }
    } // namespace

    ExperimentSpec parse_spec(std::string_view json_text)
    {
        json j;
        try
        {
            j = json::parse(json_text);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(std::string("spec: malformed JSON: ") + e.what());
        }
        if (!j.is_object())
            throw ConfigError("spec: top level must be an object");

        ExperimentSpec s;
        try
        {
            reject_unknown(j,
                           {"system", "channel", "seed", "snr_db", "dims", "schemes", "monte_carlo",
                            "compute_rates", "cs", "output", "qse_min_snr_db"},
                           "top level");
            if (j.contains("system"))
            {
                const json &sj = j.at("system");
                reject_unknown(sj, {"M", "N", "K", "T", "f_s", "tau_max", "kappa"}, "system");
                read_opt(sj, "M", s.system.M);
                read_opt(sj, "N", s.system.N);
                read_opt(sj, "K", s.system.K);
                read_opt(sj, "T", s.system.T);
                read_opt(sj, "f_s", s.system.f_s);
                read_opt(sj, "tau_max", s.system.tau_max);
                read_opt(sj, "kappa", s.system.kappa);
            }
            if (j.contains("channel"))
            {
                const json &cj = j.at("channel");
                reject_unknown(cj, {"paths", "statistics_draws", "training_draws", "statistics_files"}, "channel");
                read_opt(cj, "paths", s.paths);
                read_opt(cj, "statistics_draws", s.statistics_draws);
                read_opt(cj, "training_draws", s.training_draws);
                read_opt(cj, "statistics_files", s.statistics_files);
            }
            if (!j.contains("seed"))
                throw ConfigError("spec: seed must be given explicitly");
            s.seed = j.at("seed").get<std::uint64_t>();
            read_opt(j, "snr_db", s.snr_db);
            if (j.contains("dims"))
                for (const json &d : j.at("dims"))
                {
                    DimPair p;
                    if (d.is_array())
                    {
                        if (d.size() != 2)
                            throw ConfigError("spec: dims entries must be [beta_tr, beta_fb]");
                        p.beta_tr = d.at(0).get<int>();
                        p.beta_fb = d.at(1).get<int>();
                    }
                    else
                    {
                        p.beta_tr = d.at("beta_tr").get<int>();
                        p.beta_fb = d.at("beta_fb").get<int>();
                    }
                    s.dims.push_back(p);
                }
            if (j.contains("schemes"))
                for (const json &n : j.at("schemes"))
                    s.schemes.push_back(parse_scheme(n.get<std::string>()));
            if (j.contains("monte_carlo"))
            {
                const json &mj = j.at("monte_carlo");
                reject_unknown(mj, {"channel_draws", "chunk_size"}, "monte_carlo");
                read_opt(mj, "channel_draws", s.channel_draws);
                read_opt(mj, "chunk_size", s.chunk_size);
            }
            read_opt(j, "compute_rates", s.compute_rates);
            if (j.contains("cs"))
            {
                const json &cj = j.at("cs");
                reject_unknown(cj, {"s0", "b", "G_a", "G_d", "amplitude_range"}, "cs");
                read_opt(cj, "s0", s.cs.s0);
                read_opt(cj, "b", s.cs.b);
                read_opt(cj, "G_a", s.cs.G_a);
                read_opt(cj, "G_d", s.cs.G_d);
                read_opt(cj, "amplitude_range", s.cs.amplitude_range);
            }
            if (j.contains("output"))
            {
                const json &oj = j.at("output");
                reject_unknown(oj, {"csv", "summary"}, "output");
                read_opt(oj, "csv", s.csv);
                read_opt(oj, "summary", s.summary);
            }
            read_opt(j, "qse_min_snr_db", s.qse_min_snr_db);
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("spec: ") + e.what());
        }
        s.validate();
        return s;
    }

    ExperimentSpec load_spec(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open spec file " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_spec(buf.str());
    }

    bool ExperimentResult::ok() const noexcept
    {
        return std::all_of(records.begin(), records.end(), [](const SweepRecord &r) { return r.error.empty(); });
    }

    std::vector<std::string> ExperimentResult::errors() const
    {
        std::vector<std::string> out;
        for (const SweepRecord &r : records)
            if (!r.error.empty())
            {
                std::ostringstream os;
                os << scheme_name(r.scheme) << " snr_db=" << r.snr_db << " beta_tr=" << r.beta_tr
                   << " beta_fb=" << r.beta_fb << ": " << r.error;
                out.push_back(os.str());
            }
        return out;
    }

    namespace
    {
        constexpr auto key(Stream s) { return static_cast<std::uint64_t>(s); }

        template <class F>
        void parallel_for(size_t n, int threads, F &&body)
        {
            const size_t workers = std::min(n, static_cast<size_t>(std::max(threads, 1)));
            if (workers <= 1)
            {
                for (size_t i = 0; i < n; ++i)
                    body(i);
                return;
            }
            std::atomic<size_t> next{0};
            std::vector<std::thread> pool;
            for (size_t w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (size_t i = next++; i < n; i = next++)
                        body(i);
                });
            for (auto &t : pool)
                t.join();
        }

        struct UserContext
        {
            const ChannelStatistics *stats = nullptr;
            PosteriorStats ps;
            std::optional<SpreadingMatrix> spreading;
            std::optional<AnalogEstimator> analog;
        };

        struct Partial
        {
            MseAccumulator mse;
            RateAccumulator rate;
            double bits = 0.0;
            long long reports = 0;
            long long infeasible = 0;
            std::string error;

            void merge(const Partial &o)
            {
                if (error.empty() && !o.error.empty())
                    error = o.error;
                mse.merge(o.mse);
                rate.merge(o.rate);
                bits += o.bits;
                reports += o.reports;
                infeasible += o.infeasible;
            }
        };

        std::string describe(const std::exception &e)
        {
            if (const auto *ne = dynamic_cast<const NumericalError *>(&e))
            {
                std::ostringstream os;
                os << e.what() << " (condition " << ne->condition() << ")";
                return os.str();
            }
            return e.what();
        }
    } // namespace

    ExperimentResult run_experiment(const ExperimentSpec &spec, int threads)
    {
        spec.validate();
        if (threads <= 0)
            threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

        const SystemConfig &sys = spec.system;
        const int K = sys.K;
        const Rng base(spec.seed);

        ExperimentResult result;
        result.spec = spec;

        // Channel statistics: statistics_draws x K.
        std::vector<ChannelStatistics> stats;
        for (int d = 0; d < spec.statistics_draws; ++d)
            for (int k = 0; k < K; ++k)
            {
                const size_t idx = static_cast<size_t>(d) * static_cast<size_t>(K) + static_cast<size_t>(k);
                if (!spec.statistics_files.empty())
                {
                    ChannelStatistics s = load_statistics(spec.statistics_files[idx]);
                    if (s.M() != sys.M || s.N() != sys.N)
                        throw ConfigError("statistics file " + spec.statistics_files[idx] +
                                          " does not match M and N");
                    stats.push_back(std::move(s));
                }
                else
                {
                    const std::uint64_t seed = base.split(Stream::statistics, idx).seed();
                    stats.push_back(gen_multipath_stats(sys, spec.paths, seed).stats);
                }
            }
        result.rank = stats.front().rank();

        const bool want_cs = std::find(spec.schemes.begin(), spec.schemes.end(), Scheme::cs) != spec.schemes.end();
        CsConfig cs_cfg;
        std::optional<Dictionary> dict;
        if (want_cs)
        {
            cs_cfg.s0 = spec.cs.s0 > 0 ? spec.cs.s0 : std::max(1, spec.statistics_files.empty() ? spec.paths
                                                                                                 : result.rank);
            cs_cfg.b = spec.cs.b;
            cs_cfg.amplitude_range = spec.cs.amplitude_range;
            dict = build_dictionary(sys.M, sys.N, spec.cs.G_a > 0 ? spec.cs.G_a : 2 * sys.M,
                                    spec.cs.G_d > 0 ? spec.cs.G_d : 2 * sys.N, sys.f_s, sys.tau_max);
        }

        const size_t n_schemes = spec.schemes.size();
        const int replicas = spec.statistics_draws * spec.training_draws;
        const int chunks = (spec.channel_draws + spec.chunk_size - 1) / spec.chunk_size;

        for (const DimPair &dim : spec.dims)
        {
            std::string dim_error;
            TrainingConfig tcfg;
            std::vector<TrainingMatrix> pilots; // SNR-independent, per replica
            try
            {
                tcfg = TrainingConfig::for_beta(sys, dim.beta_tr);
                SystemConfig unit = sys;
                unit.snr_dl = 1.0;
                for (int d = 0; d < spec.statistics_draws; ++d)
                    for (int t = 0; t < spec.training_draws; ++t)
                    {
                        Rng rng(spec.seed, {key(Stream::training), static_cast<std::uint64_t>(d),
                                            static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(dim.beta_tr)});
                        pilots.push_back(build_training_matrix(unit, tcfg, rng));
                    }
            }
            catch (const std::exception &e)
            {
                dim_error = describe(e);
            }

            for (double snr_db : spec.snr_db)
            {
                const double snr = db_to_linear(snr_db);
                std::vector<Partial> total(n_schemes);
                for (auto &p : total)
                    p.rate = RateAccumulator(K, sys.N);
                if (!dim_error.empty())
                    for (auto &p : total)
                        p.error = dim_error;

                for (int rep = 0; rep < replicas && dim_error.empty(); ++rep)
                {
                    const int d = rep / spec.training_draws;
                    const int t = rep % spec.training_draws;
                    const TrainingMatrix x = pilots[static_cast<size_t>(rep)].rescaled(snr);
                    const FeedbackBudget budget = FeedbackBudget::for_link(dim.beta_fb, sys.M, sys.kappa, snr);

                    // Per-user contexts; a failure disables the affected schemes.
                    std::vector<UserContext> users(static_cast<size_t>(K));
                    std::vector<std::string> ctx_error(n_schemes);
                    std::optional<CMat> phi;
                    for (int k = 0; k < K; ++k)
                    {
                        UserContext &u = users[static_cast<size_t>(k)];
                        u.stats = &stats[static_cast<size_t>(d) * static_cast<size_t>(K) + static_cast<size_t>(k)];
                        try
                        {
                            u.ps = posterior_stats(*u.stats, x);
                        }
                        catch (const std::exception &e)
                        {
                            for (auto &err : ctx_error)
                                if (err.empty())
                                    err = describe(e);
                        }
                        for (size_t si = 0; si < n_schemes; ++si)
                        {
                            if (spec.schemes[si] != Scheme::af || !ctx_error[si].empty())
                                continue;
                            try
                            {
                                Rng rng(spec.seed,
                                        {key(Stream::spreading), static_cast<std::uint64_t>(d),
                                         static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(k),
                                         static_cast<std::uint64_t>(dim.beta_tr),
                                         static_cast<std::uint64_t>(dim.beta_fb)});
                                u.spreading = build_spreading(*u.stats, x,
                                                              uplink_power(sys.M, sys.kappa, snr), dim.beta_fb, rng);
                                u.analog.emplace(*u.stats, x, *u.spreading);
                            }
                            catch (const std::exception &e)
                            {
                                ctx_error[si] = describe(e);
                            }
                        }
                    }
                    if (want_cs)
                        phi = sensing_matrix(*dict, x);

                    std::vector<std::vector<Partial>> parts(static_cast<size_t>(chunks));
                    parallel_for(static_cast<size_t>(chunks), threads, [&](size_t c) {
                        std::vector<Partial> part(n_schemes);
                        for (size_t si = 0; si < n_schemes; ++si)
                        {
                            part[si].rate = RateAccumulator(K, sys.N);
                            part[si].error = ctx_error[si];
                        }
                        const int g0 = static_cast<int>(c) * spec.chunk_size;
                        const int g1 = std::min(spec.channel_draws, g0 + spec.chunk_size);
                        std::vector<CVec> h(static_cast<size_t>(K)), u_hat(static_cast<size_t>(K)),
                            h_hat(static_cast<size_t>(K));
                        std::vector<CRow> y(static_cast<size_t>(K));
                        for (int g = g0; g < g1; ++g)
                        {
                            auto draw_rng = [&](Stream s, int k) {
                                return Rng(spec.seed, {key(s), static_cast<std::uint64_t>(d),
                                                       static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(g),
                                                       static_cast<std::uint64_t>(k)});
                            };
                            for (int k = 0; k < K; ++k)
                            {
                                const auto ks = static_cast<size_t>(k);
                                Rng ch = draw_rng(Stream::channel, k);
                                h[ks] = sample_channel(*users[ks].stats, ch).h;
                                Rng pn = draw_rng(Stream::pilot_noise, k);
                                y[ks] = observe_pilots(h[ks], x, pn);
                                if (users[ks].ps.gain.size() > 0)
                                    u_hat[ks] = mmse_estimate(users[ks].ps, users[ks].stats->mu(), y[ks], x);
                            }
                            for (size_t si = 0; si < n_schemes; ++si)
                            {
                                Partial &p = part[si];
                                if (!p.error.empty())
                                    continue;
                                try
                                {
                                    for (int k = 0; k < K; ++k)
                                    {
                                        const auto ks = static_cast<size_t>(k);
                                        const UserContext &uc = users[ks];
                                        FeedbackResult fb;
                                        switch (spec.schemes[si])
                                        {
                                        case Scheme::rd: {
                                            Rng rng = draw_rng(Stream::test_channel, k);
                                            fb = rd_feedback_simulate(uc.ps, uc.stats->mu(), u_hat[ks], budget, rng);
                                            break;
                                        }
                                        case Scheme::ecsq:
                                            fb = ecsq_feedback(uc.ps, uc.stats->mu(), u_hat[ks], budget,
                                                               draw_rng(Stream::dither, k).seed());
                                            break;
                                        case Scheme::af: {
                                            Rng rng = draw_rng(Stream::uplink_noise, k);
                                            fb.h_hat = uc.analog->estimate(af_transmit(y[ks], *uc.spreading, rng));
                                            fb.symbols = dim.beta_fb;
                                            break;
                                        }
                                        case Scheme::cs:
                                            fb = cs_feedback(y[ks], *dict, *phi, cs_cfg, budget);
                                            break;
                                        }
                                        p.mse.add(h[ks], fb.h_hat);
                                        p.bits += fb.bits;
                                        ++p.reports;
                                        if (!fb.feasible)
                                            ++p.infeasible;
                                        h_hat[ks] = std::move(fb.h_hat);
                                    }
                                    if (spec.compute_rates)
                                        p.rate.add(h, zf_precoders(h_hat, sys.M, sys.N), sys.M, snr);
                                }
                                catch (const std::exception &e)
                                {
                                    p.error = describe(e);
                                }
                            }
                        }
                        parts[c] = std::move(part);
                    });
                    for (const auto &part : parts)
                        for (size_t si = 0; si < n_schemes; ++si)
                            total[si].merge(part[si]);
                }

                for (size_t si = 0; si < n_schemes; ++si)
                {
                    const Partial &p = total[si];
                    SweepRecord r;
                    r.scheme = spec.schemes[si];
                    r.snr_db = snr_db;
                    r.beta_tr = dim.beta_tr;
                    r.beta_fb = dim.beta_fb;
                    r.seed = spec.seed;
                    r.error = p.error;
                    const double nan = std::numeric_limits<double>::quiet_NaN();
                    r.mse_avg = r.mse_avg_db = r.sum_rate = r.bits_used = nan;
                    if (r.error.empty())
                    {
                        r.mse_avg = p.mse.mean();
                        r.mse_avg_db = linear_to_db(r.mse_avg);
                        r.bits_used = p.bits / static_cast<double>(p.reports);
                        r.infeasible_fraction = static_cast<double>(p.infeasible) / static_cast<double>(p.reports);
                        if (spec.compute_rates)
                            r.sum_rate = p.rate.report(sys, tcfg).r_avg;
                    }
                    result.records.push_back(std::move(r));
                }
            }
        }
        return result;
    }

    namespace
    {
        void put_number(std::string &out, double v)
        {
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof buf, v);
            out.append(buf, res.ptr);
        }

        void put_number(std::string &out, long long v)
        {
            char buf[32];
            const auto res = std::to_chars(buf, buf + sizeof buf, v);
            out.append(buf, res.ptr);
        }
    } // namespace

    std::string format_csv(const std::vector<SweepRecord> &records)
    {
        std::string out(csv_header);
        out += '\n';
        for (const SweepRecord &r : records)
        {
            out += scheme_name(r.scheme);
            out += ',';
            put_number(out, r.snr_db);
            out += ',';
            put_number(out, static_cast<long long>(r.beta_tr));
            out += ',';
            put_number(out, static_cast<long long>(r.beta_fb));
            out += ',';
            put_number(out, r.mse_avg);
            out += ',';
            put_number(out, r.mse_avg_db);
            out += ',';
            put_number(out, r.sum_rate);
            out += ',';
            put_number(out, r.bits_used);
            out += ',';
            out += std::to_string(r.seed);
            out += '\n';
        }
        return out;
    }

    std::string format_summary(const ExperimentResult &result)
    {
        const ExperimentSpec &spec = result.spec;
        json fits = json::array();
        std::map<std::tuple<int, int, int>, std::pair<std::vector<double>, std::vector<double>>> curves;
        std::vector<std::tuple<int, int, int>> order;
        for (const SweepRecord &r : result.records)
        {
            const auto k = std::make_tuple(static_cast<int>(r.scheme), r.beta_tr, r.beta_fb);
            if (!curves.contains(k))
                order.push_back(k);
            auto &c = curves[k];
            if (r.error.empty() && r.snr_db >= spec.qse_min_snr_db && r.mse_avg > 0.0)
            {
                c.first.push_back(db_to_linear(r.snr_db));
                c.second.push_back(r.mse_avg);
            }
        }
        for (const auto &k : order)
        {
            const auto [scheme_id, beta_tr, beta_fb] = k;
            const auto scheme = static_cast<Scheme>(scheme_id);
            json f;
            f["scheme"] = scheme_name(scheme);
            f["beta_tr"] = beta_tr;
            f["beta_fb"] = beta_fb;
            switch (scheme)
            {
            case Scheme::rd:
            case Scheme::ecsq: f["qse_predicted"] = qse_rd(result.rank, beta_tr, beta_fb); break;
            case Scheme::af: f["qse_predicted"] = qse_af(result.rank, beta_tr, beta_fb); break;
            case Scheme::cs: f["qse_predicted"] = 0.0; break;
            }
            const auto &c = curves[k];
            f["points"] = c.first.size();
            try
            {
                const QseFit fit = fit_qse(c.first, c.second);
                f["qse"] = fit.alpha;
                f["r_squared"] = fit.r_squared;
                f["residuals"] = fit.residuals;
            }
            catch (const std::exception &e)
            {
                f["qse"] = nullptr;
                f["fit_error"] = e.what();
            }
            fits.push_back(std::move(f));
        }

        json j;
        j["seed"] = spec.seed;
        j["rank"] = result.rank;
        j["system"] = {{"M", spec.system.M},   {"N", spec.system.N},     {"K", spec.system.K},
                       {"T", spec.system.T},   {"f_s", spec.system.f_s}, {"tau_max", spec.system.tau_max},
                       {"kappa", spec.system.kappa}};
        j["channel_draws"] = spec.channel_draws;
        j["statistics_draws"] = spec.statistics_draws;
        j["training_draws"] = spec.training_draws;
        j["fits"] = std::move(fits);
        j["errors"] = result.errors();
        return j.dump(2) + "\n";
    }

    void write_text(const std::filesystem::path &path, const std::string &text)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open " + path.string() + " for writing");
        out << text;
        out.flush();
        if (!out)
            throw std::runtime_error("write failed for " + path.string());
    }
} // namespace csifb
