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

#include "fasisac/geometry.hpp"

namespace fasisac
{
    /// Active ports, 0-based, strictly ascending. Row r of a precoder drives port indices[r].
    struct PortSelection
    {
        std::vector<int> indices;

        int size() const { return static_cast<int>(indices.size()); }

        // Throws std::invalid_argument unless the indices are distinct, in range and sorted.
        void validate(int num_ports) const;

        static PortSelection all(int num_ports);
        // Sorts and validates.
        static PortSelection from(std::vector<int> indices, int num_ports);

        bool operator==(const PortSelection &) const = default;
    };

    // Columns (or entries) of a full-port object restricted to the selection.
    CMat select_columns(const CMat &M, const PortSelection &sel);
    CVec select_entries(const CVec &v, const PortSelection &sel);

    // Embeds an n_s x K precoder into the Ns x K port space (zero rows when inactive).
    CMat embed_rows(const CMat &W, const PortSelection &sel, int num_ports);

    /// Transmit precoder. Power is folded into W: Tr(W W^H) <= power_budget.
    struct Precoder
    {
        CMat W;
        double power_budget = 1.0;

        double power() const { return W.squaredNorm(); }
    };

    struct MetricsReport
    {
        RVec user_sinr;
        RVec user_rate;
        RVec eve_sinr;       // worst eavesdropper SINR for each user's stream
        RVec eve_rate;
        std::vector<int> worst_eve;  // -1 for the target, otherwise the user index
        RVec secrecy;        // clamped per-user secrecy rate
        double radar_sinr = 0.0;
        double sum_secrecy = 0.0;
    };

    double comm_sinr(const CMat &H, const PortSelection &sel, const Precoder &prec, int k, double sigma_k2);

    // MVDR receive filter for R~ = Rc + sigma_b2 I.
    CVec mvdr_filter(const CMat &Rc, double sigma_b2, const CVec &a_r);

    // Radar output SINR with unit-variance independent symbols.
    double radar_sinr(const ChannelSet &chan, const PortSelection &sel, const Precoder &prec, const CVec &w_r);

    double eve_sinr_target(const ChannelSet &chan, const PortSelection &sel, const Precoder &prec, int k);

    // User i listening to user k's stream; i == k is an argument error.
    double eve_sinr_user(const CMat &H, const PortSelection &sel, const Precoder &prec, int k, int i, double sigma_i2);

    MetricsReport secrecy_report(const ChannelSet &chan, const PortSelection &sel, const Precoder &prec);

    // w_r^H (Rc + sigma_b2 I) w_r for the MVDR filter of chan.
    double radar_noise_power(const ChannelSet &chan);

    // Smallest ||a_t^H Pi W||^2 meeting radar SINR zeta with the MVDR filter.
    double radar_threshold(const ChannelSet &chan, double zeta);

    double bits(double sinr);
}
