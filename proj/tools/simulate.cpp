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

// Monte Carlo sweeps from the command line. Writes CSV (or JSON with --json).

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "fasisac/experiments.hpp"

namespace
{
    constexpr int exit_config = 2;
    constexpr int exit_infeasible = 3;
}

int main(int argc, char **argv)
{
    CLI::App app{"Secure ISAC sweeps with fluid antenna port selection"};

    std::string scenario;
    std::string profile_name = "paper-default";
    std::string config_path;
    std::vector<std::string> overrides;
    int trials = -1;
    long long seed = -1;
    std::string out_path;
    bool json = false;
    fasisac::SweepOptions sopts;

    app.add_option("--scenario", scenario, "snr|area|zeta|ports|users|convergence|beampattern")->required();
    app.add_option("--profile", profile_name, "Base parameter profile");
    app.add_option("--config", config_path, "key = value file applied over the profile");
    app.add_option("--set", overrides, "key=value override, applied last")->take_all();
    app.add_option("--trials", trials, "Monte Carlo trials per grid point");
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--out", out_path, "Output file (stdout when omitted)");
    app.add_flag("--json", json, "Write JSON instead of CSV");
    app.add_flag("--oracle", sopts.oracle, "Add exhaustive selection search as a scheme");
    app.add_flag("--timing", sopts.timing, "Record wall time per solve in mean_ms");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }

    fasisac::ScenarioConfig cfg;
    fasisac::Scenario which{};
    try
    {
        which = fasisac::parse_scenario(scenario);
        cfg = fasisac::profile(profile_name);
        if (!config_path.empty())
            fasisac::load_config_file(cfg, config_path);
        if (trials >= 0)
            fasisac::apply_setting(cfg, "trials", std::to_string(trials), "--trials");
        if (seed >= 0)
            fasisac::apply_setting(cfg, "seed", std::to_string(seed), "--seed");
        else if (seed < -1)
            throw fasisac::ConfigError("--seed must be nonnegative");
        for (const auto &o : overrides)
            fasisac::apply_override(cfg, o);
        cfg.validate();
    }
    catch (const fasisac::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }

    std::vector<fasisac::ResultRow> rows;
    try
    {
        rows = fasisac::run_sweep(cfg, which, sopts);
    }
    catch (const fasisac::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }
    catch (const fasisac::InfeasibleScenario &e)
    {
        std::cerr << "infeasible: " << e.what() << '\n';
        return exit_infeasible;
    }

    std::ofstream file;
    if (!out_path.empty())
    {
        file.open(out_path);
        if (!file)
        {
            std::cerr << "cannot write " << out_path << '\n';
            return 1;
        }
    }
    std::ostream &out = out_path.empty() ? std::cout : file;
    if (json)
        fasisac::write_json(out, rows);
    else
        fasisac::write_csv(out, rows);
    return out ? 0 : 1;
}
