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

// Times the OpenMP kernels against their serial references and checks that both agree.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include <omp.h>

#include "fasisac/experiments.hpp"

using namespace fasisac;

namespace
{
    double time_ms(const std::function<void()> &fn, int reps)
    {
        const auto t0 = std::chrono::steady_clock::now();
        for (int i = 0; i < reps; ++i)
            fn();
        const auto t1 = std::chrono::steady_clock::now();
        return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
    }

    void report(const char *name, double serial, double parallel, bool same)
    {
        std::printf("%-22s serial %9.3f ms  parallel %9.3f ms  speedup %5.2fx  %s\n", name, serial, parallel,
                    serial / parallel, same ? "match" : "MISMATCH");
    }

    ChannelSet sample_channel(const ScenarioConfig &cfg, int ports, std::uint64_t seed)
    {
        const auto geom = geometry_for(cfg, ports, cfg.area);
        const auto corr = jakes_correlation(geom);
        Rng rng(seed);
        return draw_trial_channel(cfg, geom, corr, cfg.users, cfg.snr_db, cfg.target_distance, rng);
    }
}

int main()
{
    std::printf("threads: %d\n", omp_get_max_threads());
    ScenarioConfig cfg;

    {
        const auto geom = FasGeometry::square_grid(400, 4.0, cfg.wavelength, cfg.nr);
        RMat a, b;
        const double s = time_ms([&] { a = reference::jakes_matrix(geom); }, 5);
        const double p = time_ms([&] { b = jakes_matrix(geom); }, 5);
        report("jakes_matrix N=400", s, p, a == b);
    }
    {
        const auto chan = sample_channel(cfg, 64, 7);
        ZfSolution a, b;
        const double s = time_ms([&] { a = reference::greedy_removal(chan, cfg.n_active, cfg.zeta, cfg.power); }, 3);
        const double p = time_ms([&] { b = greedy_removal(chan, cfg.n_active, cfg.zeta, cfg.power); }, 3);
        report("greedy_removal N=64", s, p, a.selection == b.selection);
    }
    {
        auto c = cfg;
        c.users = 2;
        c.n_active = 3;
        const auto chan = sample_channel(c, 12, 11);
        OracleInputs in;
        in.opts = solver_options(c);
        OracleResult a, b;
        const double s = time_ms([&] { a = reference::exhaustive_oracle(chan, 3, OracleObjective::fp_secrecy, in); }, 1);
        const double p = time_ms([&] { b = exhaustive_oracle(chan, 3, OracleObjective::fp_secrecy, in); }, 1);
        report("oracle C(12,3)", s, p, a.selection == b.selection && a.value == b.value);
    }
    {
        auto c = cfg;
        c.trials = 8;
        c.snr_grid = {10, 30};
        std::ostringstream sa, sb;
        std::vector<ResultRow> a, b;
        const double s = time_ms([&] { a = reference::run_sweep(c, Scenario::snr, {}); }, 1);
        const double p = time_ms([&] { b = run_sweep(c, Scenario::snr, {}); }, 1);
        write_csv(sa, a);
        write_csv(sb, b);
        report("snr sweep 2x8 trials", s, p, sa.str() == sb.str());
    }
    return 0;
}
