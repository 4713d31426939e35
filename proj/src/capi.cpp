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

#include "csifb/csifb.h"

#include "csifb/analog_fb.hpp"
#include "csifb/cs_fb.hpp"
#include "csifb/harness.hpp"
#include "csifb/rd_bounds.hpp"

#include <algorithm>
#include <functional>
#include <new>
#include <string>

struct csifb_experiment
{
    csifb::ExperimentSpec spec;
};

struct csifb_results
{
    csifb::ExperimentResult result;
    std::vector<std::string> errors;
};

namespace
{
    thread_local std::string last_error;

    csifb_status fail(csifb_status s, const std::string &msg)
    {
        last_error = msg;
        return s;
    }

    csifb_status guarded(const std::function<void()> &body)
    {
        try
        {
            body();
            last_error.clear();
            return CSIFB_OK;
        }
        catch (const csifb::ConfigError &e)
        {
            return fail(CSIFB_E_CONFIG, e.what());
        }
        catch (const csifb::InfeasibleError &e)
        {
            return fail(CSIFB_E_INFEASIBLE, e.what());
        }
        catch (const csifb::NumericalError &e)
        {
            return fail(CSIFB_E_NUMERICAL, e.what());
        }
        catch (const std::bad_alloc &)
        {
            return fail(CSIFB_E_INTERNAL, "out of memory");
        }
        catch (const std::ios_base::failure &e)
        {
            return fail(CSIFB_E_IO, e.what());
        }
        catch (const std::filesystem::filesystem_error &e)
        {
            return fail(CSIFB_E_IO, e.what());
        }
        catch (const std::runtime_error &e)
        {
            return fail(CSIFB_E_IO, e.what());
        }
        catch (const std::exception &e)
        {
            return fail(CSIFB_E_INTERNAL, e.what());
        }
        catch (...)
        {
            return fail(CSIFB_E_INTERNAL, "unknown error");
        }
    }
} // namespace

extern "C" {

const char *csifb_version(void) { return "1.0.0"; }

const char *csifb_last_error(void) { return last_error.c_str(); }

const char *csifb_status_string(csifb_status status)
{
    switch (status)
    {
    case CSIFB_OK: return "ok";
    case CSIFB_E_ARGUMENT: return "invalid argument";
    case CSIFB_E_CONFIG: return "configuration error";
    case CSIFB_E_INFEASIBLE: return "infeasible request";
    case CSIFB_E_NUMERICAL: return "numerical error";
    case CSIFB_E_IO: return "i/o error";
    case CSIFB_E_CELL_FAILURES: return "some cells failed";
    case CSIFB_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

csifb_status csifb_experiment_load(const char *path, csifb_experiment **out)
{
    if (!path || !out)
        return fail(CSIFB_E_ARGUMENT, "csifb_experiment_load: null argument");
    *out = nullptr;
    return guarded([&] { *out = new csifb_experiment{csifb::load_spec(path)}; });
}

csifb_status csifb_experiment_parse(const char *json_text, csifb_experiment **out)
{
    if (!json_text || !out)
        return fail(CSIFB_E_ARGUMENT, "csifb_experiment_parse: null argument");
    *out = nullptr;
    return guarded([&] { *out = new csifb_experiment{csifb::parse_spec(json_text)}; });
}

csifb_status csifb_experiment_set_seed(csifb_experiment *exp, uint64_t seed)
{
    if (!exp)
        return fail(CSIFB_E_ARGUMENT, "csifb_experiment_set_seed: null experiment");
    exp->spec.seed = seed;
    return CSIFB_OK;
}

csifb_status csifb_experiment_outputs(const csifb_experiment *exp, const char **csv, const char **summary)
{
    if (!exp || !csv || !summary)
        return fail(CSIFB_E_ARGUMENT, "csifb_experiment_outputs: null argument");
    *csv = exp->spec.csv.c_str();
    *summary = exp->spec.summary.c_str();
    return CSIFB_OK;
}

void csifb_experiment_free(csifb_experiment *exp) { delete exp; }

csifb_status csifb_run(const csifb_experiment *exp, int threads, csifb_results **out)
{
    if (!exp || !out)
        return fail(CSIFB_E_ARGUMENT, "csifb_run: null argument");
    *out = nullptr;
    const csifb_status s = guarded([&] {
        auto *res = new csifb_results{csifb::run_experiment(exp->spec, threads), {}};
        res->errors = res->result.errors();
        *out = res;
    });
    if (s != CSIFB_OK)
        return s;
    if (!(*out)->errors.empty())
        return fail(CSIFB_E_CELL_FAILURES,
                    std::to_string((*out)->errors.size()) + " cell(s) failed; first: " + (*out)->errors.front());
    return CSIFB_OK;
}

size_t csifb_results_count(const csifb_results *res) { return res ? res->result.records.size() : 0; }

csifb_status csifb_results_get(const csifb_results *res, size_t index, csifb_record *out)
{
    if (!res || !out)
        return fail(CSIFB_E_ARGUMENT, "csifb_results_get: null argument");
    if (index >= res->result.records.size())
        return fail(CSIFB_E_ARGUMENT, "csifb_results_get: index out of range");
    const csifb::SweepRecord &r = res->result.records[index];
    out->scheme = csifb::scheme_name(r.scheme).data();
    out->snr_db = r.snr_db;
    out->beta_tr = r.beta_tr;
    out->beta_fb = r.beta_fb;
    out->mse_avg = r.mse_avg;
    out->mse_avg_db = r.mse_avg_db;
    out->sum_rate = r.sum_rate;
    out->bits_used = r.bits_used;
    out->seed = r.seed;
    out->error = r.error.c_str();
    return CSIFB_OK;
}

size_t csifb_results_error_count(const csifb_results *res) { return res ? res->errors.size() : 0; }

const char *csifb_results_error(const csifb_results *res, size_t index)
{
    if (!res || index >= res->errors.size())
        return nullptr;
    return res->errors[index].c_str();
}

csifb_status csifb_results_write_csv(const csifb_results *res, const char *path)
{
    if (!res || !path)
        return fail(CSIFB_E_ARGUMENT, "csifb_results_write_csv: null argument");
    return guarded([&] { csifb::write_text(path, csifb::format_csv(res->result.records)); });
}

csifb_status csifb_results_write_summary(const csifb_results *res, const char *path)
{
    if (!res || !path)
        return fail(CSIFB_E_ARGUMENT, "csifb_results_write_summary: null argument");
    return guarded([&] { csifb::write_text(path, csifb::format_summary(res->result)); });
}

void csifb_results_free(csifb_results *res) { delete res; }

csifb_status csifb_qse_rd(int rank, int beta_tr, int beta_fb, double *out)
{
    if (!out)
        return fail(CSIFB_E_ARGUMENT, "csifb_qse_rd: null output");
    return guarded([&] { *out = csifb::qse_rd(rank, beta_tr, beta_fb); });
}

csifb_status csifb_qse_af(int rank, int beta_tr, int beta_fb, double *out)
{
    if (!out)
        return fail(CSIFB_E_ARGUMENT, "csifb_qse_af: null output");
    return guarded([&] { *out = csifb::qse_af(rank, beta_tr, beta_fb); });
}

csifb_status csifb_cs_feedback_bits(int s0, int b, int64_t grid_angle, int64_t grid_delay, int64_t *out)
{
    if (!out)
        return fail(CSIFB_E_ARGUMENT, "csifb_cs_feedback_bits: null output");
    return guarded([&] { *out = csifb::cs_feedback_bits(s0, b, grid_angle, grid_delay); });
}

csifb_status csifb_water_fill_rate(const double *eig, size_t n, double excess, double *out)
{
    if (!out || (!eig && n > 0))
        return fail(CSIFB_E_ARGUMENT, "csifb_water_fill_rate: null argument");
    return guarded([&] {
        std::vector<double> v(eig, eig + n);
        std::sort(v.begin(), v.end(), std::greater<>());
        const csifb::WaterLevel level = csifb::water_level_for_distortion(v, excess);
        *out = csifb::water_fill_rate(v, level);
    });
}

csifb_status csifb_generate_statistics(int M, int N, int paths, double f_s, double tau_max, uint64_t seed,
                                       const char *path)
{
    if (!path)
        return fail(CSIFB_E_ARGUMENT, "csifb_generate_statistics: null path");
    return guarded([&] {
        csifb::SystemConfig cfg;
        cfg.M = M;
        cfg.N = N;
        cfg.f_s = f_s;
        cfg.tau_max = tau_max;
        cfg.validate();
        const csifb::MultipathChannel ch = csifb::gen_multipath_stats(cfg, paths, seed);
        csifb::StatisticsFileHeader hdr;
        hdr.seed = seed;
        hdr.params = ch.params;
        csifb::save_statistics(path, ch.stats, hdr);
    });
}

} // extern "C"
