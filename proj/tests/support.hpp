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

#include <cmath>

#include "fasisac/experiments.hpp"

namespace fasisac::testing
{
    inline CMat random_matrix(int rows, int cols, Rng &rng)
    {
        CMat M(rows, cols);
        for (int c = 0; c < cols; ++c)
            for (int r = 0; r < rows; ++r)
                M(r, c) = complex_normal(rng);
        return M;
    }

    inline CMat random_precoder(int rows, int cols, double P, Rng &rng)
    {
        CMat W = random_matrix(rows, cols, rng);
        return W * (std::sqrt(P) / W.norm());
    }

    // Default-profile channel on a num_ports grid at the given SNR, seeded.
    inline ChannelSet default_channel(std::uint64_t seed, int num_ports = 16, double snr_db = 20.0,
                                      int users = 4)
    {
        ScenarioConfig cfg;
        cfg.users = users;
        if (users != 4)
            cfg.placement = "disc";
        const auto geom = geometry_for(cfg, num_ports, cfg.area);
        const auto corr = jakes_correlation(geom);
        Rng rng(seed);
        return draw_trial_channel(cfg, geom, corr, users, snr_db, cfg.target_distance, rng);
    }

    // i.i.d. unit-gain channel with comparable user, target and radar strengths.
    inline ChannelSet synthetic_channel(int K, int N, Rng &rng, double noise = 0.1)
    {
        ChannelSet c;
        c.H = random_matrix(K, N, rng);
        c.a_t.resize(N);
        for (int n = 0; n < N; ++n)
            c.a_t(n) = std::polar(1.0, 0.7 * n);
        c.a_r = CVec::Ones(4);
        c.alpha = std::polar(1.0, 0.4);
        c.G = c.alpha * c.a_r * c.a_t.adjoint();
        c.Rc = 0.5 * CMat::Identity(4, 4);
        c.sigma_b2 = 0.5;
        c.sigma_r2 = noise;
        c.user_noise = RVec::Constant(K, noise);
        c.eve_noise = c.user_noise;
        return c;
    }

    inline double rel_err(double a, double b)
    {
        return std::abs(a - b) / std::max(std::abs(b), 1e-300);
    }
}
