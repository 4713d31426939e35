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

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

namespace
{
    int default_threads()
    {
        if (const char *env = std::getenv("CSIFB_THREADS"))
        {
            char *end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (end != env && *end == '\0' && v > 0)
                return static_cast<int>(v);
            std::fprintf(stderr, "warning: ignoring invalid CSIFB_THREADS='%s'\n", env);
        }
        return 0;
    }

    int report(csifb_status s, const char *what)
    {
        std::fprintf(stderr, "error: %s: %s: %s\n", what, csifb_status_string(s), csifb_last_error());
        return 2;
    }

    std::string resolve(const std::string &out_dir, const char *name)
    {
        const std::filesystem::path p(name);
        if (out_dir.empty() || p.is_absolute())
            return p.string();
        return (std::filesystem::path(out_dir) / p).string();
    }

    int run(const std::string &spec_path, const std::string &out_dir, int threads,
            const std::optional<std::uint64_t> &seed)
    {
        csifb_experiment *exp = nullptr;
        csifb_status s = csifb_experiment_load(spec_path.c_str(), &exp);
        if (s != CSIFB_OK)
            return report(s, spec_path.c_str());
        if (seed)
            csifb_experiment_set_seed(exp, *seed);

        const char *csv_name = nullptr;
        const char *summary_name = nullptr;
        csifb_experiment_outputs(exp, &csv_name, &summary_name);
        const std::string csv = resolve(out_dir, csv_name);
        const std::string summary = resolve(out_dir, summary_name);
        if (!out_dir.empty())
        {
            std::error_code ec;
            std::filesystem::create_directories(out_dir, ec);
            if (ec)
            {
                std::fprintf(stderr, "error: cannot create %s: %s\n", out_dir.c_str(), ec.message().c_str());
                csifb_experiment_free(exp);
                return 2;
            }
        }

        csifb_results *res = nullptr;
        const csifb_status run_status = csifb_run(exp, threads, &res);
        csifb_experiment_free(exp);
        if (!res)
            return report(run_status, "run");

        int code = 0;
        if ((s = csifb_results_write_csv(res, csv.c_str())) != CSIFB_OK)
            code = report(s, csv.c_str());
        else if ((s = csifb_results_write_summary(res, summary.c_str())) != CSIFB_OK)
            code = report(s, summary.c_str());

        const size_t n_err = csifb_results_error_count(res);
        for (size_t i = 0; i < n_err; ++i)
            std::fprintf(stderr, "cell failed: %s\n", csifb_results_error(res, i));
        if (n_err > 0 && code == 0)
            code = 1;
        if (code == 0)
            std::printf("wrote %zu records to %s\n", csifb_results_count(res), csv.c_str());
        csifb_results_free(res);
        return code;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"csifb: CSI feedback simulator for wideband FDD massive MIMO"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(csifb_version()));

    std::string spec_path;
    std::string out_dir;
    int threads = default_threads();
    std::optional<std::uint64_t> seed;
    auto *run_cmd = app.add_subcommand("run", "Run an experiment spec and write CSV and summary JSON");
    run_cmd->add_option("spec", spec_path, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out-dir", out_dir, "Directory for relative output paths");
    run_cmd->add_option("--threads", threads, "Worker threads (0 = all cores; default from CSIFB_THREADS)")
        ->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--seed-override", seed, "Replace the experiment file's base seed");

    int M = 8, N = 8, paths = 4;
    double f_s = 30e3, tau_max = 7e-6;
    std::uint64_t stats_seed = 1;
    std::string stats_out;
    auto *stats_cmd = app.add_subcommand("stats", "Generate synthetic multipath statistics to a file");
    stats_cmd->add_option("--M", M, "BS antennas")->check(CLI::PositiveNumber);
    stats_cmd->add_option("--N", N, "Subcarriers")->check(CLI::PositiveNumber);
    stats_cmd->add_option("--paths", paths, "Number of paths")->check(CLI::PositiveNumber);
    stats_cmd->add_option("--f-s", f_s, "Subcarrier spacing in Hz");
    stats_cmd->add_option("--tau-max", tau_max, "Maximum delay in seconds");
    stats_cmd->add_option("--seed", stats_seed, "Seed");
    stats_cmd->add_option("--out", stats_out, "Output file")->required();

    CLI11_PARSE(app, argc, argv);

    if (*run_cmd)
        return run(spec_path, out_dir, threads, seed);

    const csifb_status s = csifb_generate_statistics(M, N, paths, f_s, tau_max, stats_seed, stats_out.c_str());
    if (s != CSIFB_OK)
        return report(s, stats_out.c_str());
    return 0;
}
