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

#include "fasisac/fp.hpp"

namespace fasisac
{
    struct JppsTraceRecord
    {
        int iteration = 0;
        double surrogate = 0.0;     // FP objective at the accepted iterate
        double sum_secrecy = 0.0;   // clamped
        double radar_sinr = 0.0;
        double change = 0.0;        // ||W(t+1) - W(t)||_F^2 / P over all ports
        bool reselected = false;
        PortSelection selection;
    };

    struct JppsResult
    {
        PortSelection selection;
        Precoder precoder;
        MetricsReport report;
        std::vector<JppsTraceRecord> trace;  // starting point at iteration 0, then one per outer iteration
        int iterations = 0;          // outer iterations run
        bool converged = false;      // stopping rule met before max_outer_iters
        bool radar_feasible = true;  // report.radar_sinr >= zeta (1 - 1e-6)
    };

    // Matched filter on the given ports, scaled to power P.
    CMat matched_filter(const ChannelSet &chan, const PortSelection &sel, double P);

    // Matched filter or zero-forcing on sel, whichever has the higher secrecy rate.
    CMat initial_precoder(const ChannelSet &chan, const PortSelection &sel, double P);

    /// Moves W toward a beam on a_t until ||a_t^H Pi W||^2 >= rho, keeping power <= P.
    /// Returns false when no precoder on sel can reach rho.
    bool restore_radar(const ChannelSet &chan, const PortSelection &sel, double rho, double P, CMat &W);

    /// Joint precoding and port selection for the sum secrecy rate under a radar SINR floor.
    JppsResult jpps(const ChannelSet &chan, const SolverOptions &opts, Rng &rng);

    // Same alternating precoder optimization with the selection held fixed.
    JppsResult precode_fixed(const ChannelSet &chan, const PortSelection &sel, const SolverOptions &opts);

    struct RadarCentricResult
    {
        PortSelection selection;
        Precoder precoder;
        MetricsReport report;
        double radar_gain = 0.0;     // ||a_t^H Pi W||^2
        int iterations = 0;
        bool feasible = true;        // secrecy floor r_th met
    };

    /// Maximizes the radar gain subject to the sum secrecy rate staying at or above r_th.
    ///
    /// Starts from the JPPS solution, and from the GS-TIM set when it differs; the larger
    /// feasible gain wins. Each iteration solves the linear subproblem with objective and
    /// constraint swapped and backtracks the step until the secrecy floor holds. Users whose
    /// secrecy has reached zero are left out of the linearized constraint.
    RadarCentricResult radar_centric(const ChannelSet &chan, const SolverOptions &opts, Rng &rng);

    // Radar-centric refinement on a fixed selection, started from W0.
    RadarCentricResult radar_centric_fixed(const ChannelSet &chan, const PortSelection &sel, const CMat &W0,
                                           const SolverOptions &opts);
}
