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

#ifndef CSIFB_FEEDBACK_HPP
#define CSIFB_FEEDBACK_HPP

#include "csifb/types.hpp"

#include <vector>

namespace csifb
{
    /// UL capacity per symbol in bits: log2(1 + M kappa snr_dl).
    double uplink_capacity(int M, double kappa, double snr_dl);

    struct FeedbackBudget
    {
        int beta_fb = 0;   // UL symbols
        double c_ul = 0.0; // bits per symbol

        double total_bits() const noexcept { return beta_fb * c_ul; }

        static FeedbackBudget for_link(int beta_fb, int M, double kappa, double snr_dl);
    };

    /// Output of a feedback scheme as seen by the BS.
    struct FeedbackResult
    {
        CVec h_hat;
        double bits = 0.0;         // digital payload charged to the budget
        int symbols = 0;           // UL symbols actually used
        std::vector<int> support;  // dictionary indices (CS) or active KL modes
        bool feasible = true;      // false when the budget was too small to send anything
    };
} // namespace csifb

#endif
