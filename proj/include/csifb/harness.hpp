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

#ifndef CSIFB_HARNESS_HPP
#define CSIFB_HARNESS_HPP

#include "csifb/channel.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace csifb
{
    enum class Scheme
    {
        rd,
        ecsq,
        af,
        cs
    };

    std::string_view scheme_name(Scheme s) noexcept;
    Scheme parse_scheme(std::string_view name);

    struct DimPair
    {
        int beta_tr = 1;
        int beta_fb = 1;
    };

    /// Zero means "derive": s0 = number of paths, G_a = 2M, G_d = 2N.
    struct CsOptions
    {
        int s0 = 0;
        int b = 4;
        int G_a = 0;
        int G_d = 0;
        double amplitude_range = 4.0;
    };

    struct ExperimentSpec
    {
        SystemConfig system;
        int paths = 4;
        std::vector<std::string> statistics_files; // optional, statistics_draws * K entries
        std::uint64_t seed = 1;
        int statistics_draws = 1;
        int training_draws = 1;
        std::vector<double> snr_db;
        std::vector<DimPair> dims;
        std::vector<Scheme> schemes;
        int channel_draws = 2000;
        int chunk_size = 250;
        bool compute_rates = true;
        CsOptions cs;
        std::string csv = "results.csv";
        std::string summary = "summary.json";
        double qse_min_snr_db = -std::numeric_limits<double>::infinity();

        void validate() const;
    };

    /// Parses the JSON experiment document (schema in README).
    ExperimentSpec parse_spec(std::string_view json_text);
    ExperimentSpec load_spec(const std::filesystem::path &path);

    struct SweepRecord
    {
        Scheme scheme = Scheme::rd;
        double snr_db = 0.0;
        int beta_tr = 0;
        int beta_fb = 0;
        double mse_avg = 0.0;
        double mse_avg_db = 0.0;
        double sum_rate = 0.0;  // NaN when rates are not computed
        double bits_used = 0.0; // mean digital payload per user report
        std::uint64_t seed = 0;
        double infeasible_fraction = 0.0;
        std::string error;      // empty on success
    };

    struct ExperimentResult
    {
        ExperimentSpec spec;
        std::vector<SweepRecord> records;
        int rank = 0; // channel rank of the first statistics draw

        bool ok() const noexcept;
        std::vector<std::string> errors() const;
    };

    /// Runs every (beta_tr, beta_fb) x snr x scheme cell. Within a cell all
    /// schemes see the same statistics, training matrices, channels and pilot
    /// noise; random streams are keyed by draw index so the output does not
    /// depend on `threads` (<= 0 picks the hardware concurrency).
    ExperimentResult run_experiment(const ExperimentSpec &spec, int threads = 1);

    inline constexpr std::string_view csv_header =
        "scheme,snr_db,beta_tr,beta_fb,mse_avg,mse_avg_db,sum_rate,bits_used,seed";

    std::string format_csv(const std::vector<SweepRecord> &records);
    std::string format_summary(const ExperimentResult &result);

    void write_text(const std::filesystem::path &path, const std::string &text);
} // namespace csifb

#endif
