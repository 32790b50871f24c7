// SPDX-License-Identifier: Apache-2.0
//
// fasisac: secure ISAC simulation with fluid antenna port selection
// Copyright (C) 2026 fasisac contributors
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

#pragma once

#include <vector>

#include "fasisac/metrics.hpp"

namespace fasisac
{
    class RankDeficientError : public NumericalError
    {
    public:
        using NumericalError::NumericalError;
    };

    /// Zero-forcing precoder with unit power: W = H^H (H H^H)^-1 / sqrt(trace_inv).
    struct ZfPrecoder
    {
        CMat W;
        double trace_inv = 0.0;  // Tr((H_S H_S^H)^-1)
    };

    // Throws RankDeficientError unless H_S has full row rank.
    ZfPrecoder zf_precoder(const CMat &HS);

    // Closed-form metrics of sqrt(P) W_zf on sel. Internal eavesdroppers are nulled,
    // so the target is the worst eavesdropper of every stream.
    MetricsReport zf_metrics(const ChannelSet &chan, const PortSelection &sel, double P);

    struct ZfSolution
    {
        PortSelection selection;
        CMat W_zf;                 // unit power; the transmitted precoder is sqrt(P) W_zf
        double trace_inv = 0.0;
        MetricsReport report;
        bool constraint_missed = false;
        std::vector<int> removed;  // ports in removal order
        // ZF sum secrecy and radar SINR of the working set: all ports first, then after each removal.
        std::vector<double> step_secrecy;
        std::vector<double> step_radar;
    };

    ZfSolution zf_solution(const ChannelSet &chan, const PortSelection &sel, double P);

    /// Greedy removal: drop one port per step, keeping the largest ZF secrecy among
    /// removals that keep the radar SINR at zeta. Candidates are scored in parallel.
    ZfSolution greedy_removal(const ChannelSet &chan, int n_s, double zeta, double P);

    // Rank of H_S (singular values above 1e-7 of the largest) and the sum of 1/mu^2 over them.
    struct TimCost
    {
        int rank = 0;
        double pinv_trace = 0.0;
    };

    TimCost tim_cost_explicit(const CMat &HS);
    TimCost tim_cost_svd(const CMat &HS);

    // Tr((H H^H)^-1); +inf when H H^H is singular.
    double trace_inverse(const CMat &HS);
    double trace_inverse_svd(const CMat &HS);

    /// Greedy growth minimizing Tr((H_S H_S^H)^-1). While the Gram is singular, candidates
    /// are ranked by rank (higher first) and then by the pseudo-inverse trace.
    /// Costs within 1e-9 relative count as ties; the lower port index wins.
    PortSelection gs_tim(const CMat &H, int n_s);
    PortSelection svd_tim(const CMat &H, int n_s);

    namespace reference
    {
        ZfSolution greedy_removal(const ChannelSet &chan, int n_s, double zeta, double P);
    }
}
