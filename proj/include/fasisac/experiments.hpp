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

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fasisac/config.hpp"
#include "fasisac/jpps.hpp"
#include "fasisac/zf.hpp"

namespace fasisac
{
    class InfeasibleScenario : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class Scenario
    {
        snr,
        area,
        zeta,
        ports,
        users,
        convergence,
        beampattern
    };

    Scenario parse_scenario(const std::string &name);
    std::string scenario_name(Scenario s);

    struct ResultRow
    {
        std::string scenario;
        double param = 0.0;
        std::string scheme;
        int trials = 0;
        double mean_secrecy = 0.0;
        double std_secrecy = 0.0;   // sample standard deviation, 0 for one trial
        double mean_radar_sinr = 0.0;
        double miss_frac = 0.0;
        double mean_ms = 0.0;
    };

    struct SweepOptions
    {
        bool oracle = false;   // add the exhaustive scheme
        bool timing = false;   // fill mean_ms; off keeps the output byte-stable
        int workers = 0;       // 0: FAS_ISAC_WORKERS, else the OpenMP default
    };

    // One scheme on one channel draw.
    struct TrialOutcome
    {
        double secrecy = 0.0;
        double radar_sinr = 0.0;
        bool miss = false;
        double ms = 0.0;
        int iterations = 0;
    };

    SolverOptions solver_options(const ScenarioConfig &cfg);

    // Port grid for a given port count: the configured ns_x by ns_y grid when it matches,
    // else the near-square grid over the configured area.
    FasGeometry geometry_for(const ScenarioConfig &cfg, int num_ports, double area);

    /// Draws one channel. Draw order: disc user distances, target angle, then the
    /// channel set (target phase, users).
    ChannelSet draw_trial_channel(const ScenarioConfig &cfg, const FasGeometry &geom,
                                  const SpatialCorrelation &corr, int users, double snr_db,
                                  double target_distance, Rng &rng);

    TrialOutcome run_scheme(const std::string &scheme, const ChannelSet &chan, const SolverOptions &opts,
                            std::uint64_t trial_seed);

    // n ports at round(i (N - 1) / (n - 1)), i = 0..n-1.
    PortSelection evenly_spaced(int num_ports, int n);

    /// Runs every grid point x scheme x trial of a scenario. Trial t of every grid point
    /// reuses the seed derive_seed(seed, scenario, t), so grid points see the same draws.
    std::vector<ResultRow> run_sweep(const ScenarioConfig &cfg, Scenario scenario, const SweepOptions &sopts);

    // Fixed-array comparator at one SNR point.
    ResultRow fpa_baseline(const ScenarioConfig &cfg, double snr_db);

    struct BeamPoint
    {
        double angle_deg = 0.0;
        double gain_db = 0.0;   // normalized: 0 dB at the peak
    };

    struct Beampattern
    {
        std::vector<BeamPoint> points;
        double peak_gain = 0.0;      // ||a^H Pi W||^2 at the peak
        double peak_angle_deg = 0.0;
    };

    // Transmit gain ||a(theta)^H Pi W||^2 on the angle grid, azimuth phi_deg.
    Beampattern beampattern(const FasGeometry &geom, const PortSelection &sel, const CMat &W,
                            const std::vector<double> &angles_deg, double phi_deg = 0.0);

    enum class OracleObjective
    {
        zf_secrecy,      // max ZF sum secrecy, radar-feasible subsets preferred
        trace_inverse,   // min Tr((H_S H_S^H)^-1)
        gamma_knapsack,  // max sum of per-port scores
        fp_secrecy       // max sum secrecy after fixed-selection precoding
    };

    struct OracleInputs
    {
        SolverOptions opts;   // power, zeta and solver settings
        RVec scores;          // gamma_knapsack only
    };

    struct OracleResult
    {
        PortSelection selection;
        double value = 0.0;
        long long count = 0;
    };

    long long binomial(int n, int k);

    /// Enumerates all C(N_s, n_s) selections in lexicographic order; the first optimum wins.
    /// Refuses with InfeasibleScenario above 1e5 subsets.
    OracleResult exhaustive_oracle(const ChannelSet &chan, int n_s, OracleObjective objective,
                                   const OracleInputs &in);

    void write_csv(std::ostream &out, const std::vector<ResultRow> &rows);
    void write_json(std::ostream &out, const std::vector<ResultRow> &rows);

    namespace reference
    {
        std::vector<ResultRow> run_sweep(const ScenarioConfig &cfg, Scenario scenario, const SweepOptions &sopts);
        OracleResult exhaustive_oracle(const ChannelSet &chan, int n_s, OracleObjective objective,
                                       const OracleInputs &in);
    }
}
