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

#ifndef CSIFB_TESTS_SUPPORT_HPP
#define CSIFB_TESTS_SUPPORT_HPP

#include "csifb/channel.hpp"
#include "csifb/training.hpp"

#include <doctest.h>

namespace support
{
    inline csifb::SystemConfig desk(double snr = 100.0)
    {
        csifb::SystemConfig c;
        c.M = 8;
        c.N = 8;
        c.K = 1;
        c.T = 25;
        c.snr_dl = snr;
        return c;
    }

    inline csifb::TrainingMatrix pilots(const csifb::SystemConfig &cfg, int beta_tr, std::uint64_t seed)
    {
        csifb::Rng rng(seed);
        return csifb::build_training_matrix(cfg, csifb::TrainingConfig::for_beta(cfg, beta_tr), rng);
    }

    /// Random full-rank Hermitian PSD matrix of the given rank.
    inline csifb::CMat random_psd(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed)
    {
        csifb::Rng rng(seed);
        const csifb::CMat q = rng.complex_normal_matrix(dim, rank);
        return q * q.adjoint();
    }

    inline double max_abs(const csifb::CMat &m) { return m.cwiseAbs().maxCoeff(); }
} // namespace support

#endif
