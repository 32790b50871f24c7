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

#include "fasisac/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "json.hpp"
#include <omp.h>

namespace fasisac
{
    namespace
    {
        constexpr double deg = std::numbers::pi / 180.0;
        constexpr std::size_t oracle_guard = 100000;

        struct GridPoint
        {
            std::string scenario;
            double param = 0.0;
            ScenarioConfig cfg;   // per-point copy with the swept value applied
            FasGeometry geom;
        };

        struct Plan
        {
            std::vector<GridPoint> points;
            std::vector<std::string> schemes;
            std::uint64_t stream = 0;
        };

        std::string format_real(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.9g", v);
            return buf;
        }

        int resolve_workers(int requested)
        {
            if (requested > 0)
                return requested;
            if (const char *env = std::getenv("FAS_ISAC_WORKERS"))
            {
                const int n = std::atoi(env);
                if (n > 0)
                    return n;
            }
            return omp_get_max_threads();
        }

        // results[i] = fn(i); exceptions are rethrown in index order after the loop.
        template <typename R, typename Fn>
        std::vector<R> map_items(std::size_t n, int workers, bool parallel, Fn fn)
        {
            std::vector<R> out(n);
            std::vector<std::exception_ptr> errors(n);
            const auto count = static_cast<std::ptrdiff_t>(n);
            if (parallel)
            {
#pragma omp parallel for num_threads(workers) schedule(dynamic)
                for (std::ptrdiff_t i = 0; i < count; ++i)
                {
                    try
                    {
                        out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
                    }
                    catch (...)
                    {
                        errors[static_cast<std::size_t>(i)] = std::current_exception();
                    }
                }
            }
            else
            {
                for (std::size_t i = 0; i < n; ++i)
                {
                    try
                    {
                        out[i] = fn(i);
                    }
                    catch (...)
                    {
                        errors[i] = std::current_exception();
                    }
                }
            }
            for (const auto &e : errors)
                if (e)
                    std::rethrow_exception(e);
            return out;
        }

        // Deterministic part of the radar threshold for white interference.
        double nominal_threshold(const ScenarioConfig &c)
        {
            if (c.zeta <= 0.0)
                return 0.0;
            const double noise = (c.sigma_c2 + c.sigma_b2) / c.nr;
            return c.zeta * noise * std::pow(c.target_distance, 2.0 * c.pathloss_exp);
        }

        void check_radar_budget(const GridPoint &pt)
        {
            const double need = nominal_threshold(pt.cfg);
            if (need > pt.cfg.n_active * pt.cfg.power)
                throw InfeasibleScenario(pt.scenario + " at " + format_real(pt.param)
                                         + ": radar SINR threshold needs more beam gain than the power budget allows");
        }

        Plan make_plan(const ScenarioConfig &cfg, Scenario scenario, const SweepOptions &sopts)
        {
            Plan plan;
            plan.stream = static_cast<std::uint64_t>(scenario) + 1;
            plan.schemes = cfg.schemes;
            if (sopts.oracle && std::find(plan.schemes.begin(), plan.schemes.end(), "exhaustive") == plan.schemes.end())
                plan.schemes.push_back("exhaustive");

            auto add = [&](std::string name, double param, ScenarioConfig c, int ports, double area) {
                GridPoint pt;
                pt.scenario = std::move(name);
                pt.param = param;
                pt.geom = geometry_for(c, ports, area);
                pt.cfg = std::move(c);
                plan.points.push_back(std::move(pt));
            };

            const int N = cfg.num_ports();
            switch (scenario)
            {
            case Scenario::snr:
                for (double s : cfg.snr_grid)
                {
                    auto c = cfg;
                    c.snr_db = s;
                    add("snr", s, c, N, cfg.area);
                }
                break;
            case Scenario::area:
                for (double a : cfg.area_grid)
                    for (double s : cfg.snr_grid)
                    {
                        auto c = cfg;
                        c.snr_db = s;
                        c.area = a;
                        add("area@" + format_real(a), s, c, N, a);
                    }
                break;
            case Scenario::zeta:
                for (double z : cfg.zeta_grid)
                {
                    auto c = cfg;
                    c.zeta = z;
                    c.snr_db = cfg.zeta_snr_db;
                    c.target_distance = cfg.zeta_target_distance;
                    c.sigma_b2 = cfg.sigma_b2 * cfg.zeta_radar_noise_scale;
                    c.sigma_c2 = cfg.sigma_c2 * cfg.zeta_radar_noise_scale;
                    add("zeta", z, c, N, cfg.area);
                }
                break;
            case Scenario::ports:
                for (int n : cfg.ns_grid)
                {
                    auto c = cfg;
                    c.snr_db = cfg.ports_snr_db;
                    add("ports", n, c, n, cfg.area);
                }
                break;
            case Scenario::users:
                for (int k : cfg.users_grid)
                {
                    auto c = cfg;
                    c.users = k;
                    c.placement = "disc";
                    c.snr_db = cfg.users_snr_db;
                    add("users", k, c, N, cfg.area);
                }
                break;
            case Scenario::convergence:
            {
                auto c = cfg;
                c.snr_db = cfg.convergence_snr_db;
                add("convergence", 0.0, c, N, cfg.area);
                break;
            }
            case Scenario::beampattern:
            {
                auto c = cfg;
                c.snr_db = cfg.beam_snr_db;
                c.target_angle = "fixed";
                c.theta_deg = cfg.beam_theta_deg;
                c.mode = "radar-centric";
                add("beampattern", 0.0, c, cfg.beam_ports, cfg.area);
                plan.schemes = {"jpps", "fpa-jpps"};
                break;
            }
            }
            for (const auto &pt : plan.points)
            {
                if (pt.cfg.n_active > pt.geom.num_ports())
                    throw ConfigError(pt.scenario + ": n_active exceeds the port count");
                check_radar_budget(pt);
            }
            return plan;
        }

        struct Accum
        {
            std::vector<double> secrecy;
            double radar = 0.0;
            double misses = 0.0;
            double ms = 0.0;
        };

        ResultRow finish(const std::string &scenario, double param, const std::string &scheme, const Accum &a)
        {
            ResultRow r;
            r.scenario = scenario;
            r.param = param;
            r.scheme = scheme;
            r.trials = static_cast<int>(a.secrecy.size());
            const double n = static_cast<double>(a.secrecy.size());
            double sum = 0.0;
            for (double s : a.secrecy)
                sum += s;
            r.mean_secrecy = sum / n;
            if (a.secrecy.size() > 1)
            {
                double ss = 0.0;
                for (double s : a.secrecy)
                    ss += (s - r.mean_secrecy) * (s - r.mean_secrecy);
                r.std_secrecy = std::sqrt(ss / (n - 1.0));
            }
            r.mean_radar_sinr = a.radar / n;
            r.miss_frac = a.misses / n;
            r.mean_ms = a.ms / n;
            return r;
        }

        std::vector<SpatialCorrelation> correlations(const Plan &plan)
        {
            std::vector<SpatialCorrelation> out;
            out.reserve(plan.points.size());
            for (const auto &pt : plan.points)
                out.push_back(jakes_correlation(pt.geom));
            return out;
        }

        std::vector<ResultRow> run_standard(const ScenarioConfig &cfg, const Plan &plan, const SweepOptions &sopts,
                                            bool parallel)
        {
            const auto corr = correlations(plan);
            const std::size_t T = static_cast<std::size_t>(cfg.trials);
            const std::size_t G = plan.points.size();

            auto items = map_items<std::vector<TrialOutcome>>(G * T, resolve_workers(sopts.workers), parallel,
                                                              [&](std::size_t idx) {
                const std::size_t g = idx / T;
                const std::size_t t = idx % T;
                const auto &pt = plan.points[g];
                const std::uint64_t seed = derive_seed(cfg.seed, plan.stream, t);
                Rng rng(seed);
                const auto chan = draw_trial_channel(pt.cfg, pt.geom, corr[g], pt.cfg.users, pt.cfg.snr_db,
                                                     pt.cfg.target_distance, rng);
                const auto opts = solver_options(pt.cfg);
                std::vector<TrialOutcome> res;
                for (const auto &scheme : plan.schemes)
                    res.push_back(run_scheme(scheme, chan, opts, seed));
                return res;
            });

            std::vector<ResultRow> rows;
            for (std::size_t g = 0; g < G; ++g)
            {
                for (std::size_t s = 0; s < plan.schemes.size(); ++s)
                {
                    Accum a;
                    for (std::size_t t = 0; t < T; ++t)
                    {
                        const auto &o = items[g * T + t][s];
                        a.secrecy.push_back(o.secrecy);
                        a.radar += o.radar_sinr;
                        a.misses += o.miss ? 1.0 : 0.0;
                        a.ms += sopts.timing ? o.ms : 0.0;
                    }
                    rows.push_back(finish(plan.points[g].scenario, plan.points[g].param, plan.schemes[s], a));
                }
            }
            return rows;
        }

        struct Series
        {
            std::vector<double> secrecy;
            std::vector<double> radar;
        };

        std::vector<ResultRow> run_convergence(const ScenarioConfig &cfg, const Plan &plan, const SweepOptions &sopts,
                                               bool parallel)
        {
            const auto corr = correlations(plan);
            const auto &pt = plan.points.front();
            std::vector<std::string> schemes;
            for (const auto &s : plan.schemes)
                if (s == "jpps" || s == "gs")
                    schemes.push_back(s);
            const std::size_t T = static_cast<std::size_t>(cfg.trials);

            auto items = map_items<std::vector<Series>>(T, resolve_workers(sopts.workers), parallel, [&](std::size_t t) {
                const std::uint64_t seed = derive_seed(cfg.seed, plan.stream, t);
                Rng rng(seed);
                const auto chan = draw_trial_channel(pt.cfg, pt.geom, corr.front(), pt.cfg.users, pt.cfg.snr_db,
                                                     pt.cfg.target_distance, rng);
                auto opts = solver_options(pt.cfg);
                opts.keep_trace = true;
                std::vector<Series> out;
                for (const auto &s : schemes)
                {
                    Series ser;
                    if (s == "jpps")
                    {
                        Rng srng(derive_seed(seed, 0x5eed, 0));
                        const auto res = jpps(chan, opts, srng);
                        for (const auto &rec : res.trace)
                        {
                            ser.secrecy.push_back(rec.sum_secrecy);
                            ser.radar.push_back(rec.radar_sinr);
                        }
                    }
                    else
                    {
                        const auto sol = greedy_removal(chan, opts.num_active, opts.zeta, opts.power);
                        ser.secrecy = sol.step_secrecy;
                        ser.radar = sol.step_radar;
                    }
                    out.push_back(std::move(ser));
                }
                return out;
            });

            std::vector<ResultRow> rows;
            for (std::size_t s = 0; s < schemes.size(); ++s)
            {
                std::size_t len = 0;
                for (const auto &it : items)
                    len = std::max(len, it[s].secrecy.size());
                for (std::size_t step = 0; step < len; ++step)
                {
                    Accum a;
                    for (const auto &it : items)
                    {
                        const auto &ser = it[s];
                        if (ser.secrecy.empty())
                        {
                            a.secrecy.push_back(0.0);
                            continue;
                        }
                        const std::size_t i = std::min(step, ser.secrecy.size() - 1);
                        a.secrecy.push_back(ser.secrecy[i]);
                        a.radar += ser.radar[i];
                        a.misses += ser.radar[i] < pt.cfg.zeta * (1.0 - 1e-6) ? 1.0 : 0.0;
                    }
                    rows.push_back(finish(pt.scenario, static_cast<double>(step), schemes[s], a));
                }
            }
            return rows;
        }

        struct BeamTrial
        {
            double secrecy = 0.0;
            bool infeasible = false;
            std::vector<double> gain_db;
        };

        std::vector<ResultRow> run_beampattern(const ScenarioConfig &cfg, const Plan &plan, const SweepOptions &sopts,
                                               bool parallel)
        {
            const auto corr = correlations(plan);
            const auto &pt = plan.points.front();
            const std::size_t T = static_cast<std::size_t>(cfg.trials);
            std::vector<double> angles;
            for (double a = -90.0; a <= 90.0 + 1e-9; a += cfg.beam_step_deg)
                angles.push_back(a);

            auto items = map_items<std::vector<BeamTrial>>(T, resolve_workers(sopts.workers), parallel, [&](std::size_t t) {
                const std::uint64_t seed = derive_seed(cfg.seed, plan.stream, t);
                Rng rng(seed);
                const auto chan = draw_trial_channel(pt.cfg, pt.geom, corr.front(), pt.cfg.users, pt.cfg.snr_db,
                                                     pt.cfg.target_distance, rng);
                const auto opts = solver_options(pt.cfg);
                std::vector<BeamTrial> out;
                for (const auto &scheme : plan.schemes)
                {
                    RadarCentricResult rc;
                    if (scheme == "jpps")
                    {
                        Rng srng(derive_seed(seed, 0x5eed, 0));
                        rc = radar_centric(chan, opts, srng);
                    }
                    else
                    {
                        const auto sel = evenly_spaced(chan.num_ports(), opts.num_active);
                        const auto start = precode_fixed(chan, sel, opts);
                        rc = radar_centric_fixed(chan, sel, start.precoder.W, opts);
                    }
                    const auto bp = beampattern(pt.geom, rc.selection, rc.precoder.W, angles, pt.cfg.phi_deg);
                    BeamTrial bt;
                    bt.secrecy = rc.report.sum_secrecy;
                    bt.infeasible = !rc.feasible;
                    const double peak_db = 10.0 * std::log10(bp.peak_gain / opts.power);
                    for (const auto &p : bp.points)
                        bt.gain_db.push_back(p.gain_db + peak_db);
                    out.push_back(std::move(bt));
                }
                return out;
            });

            std::vector<ResultRow> rows;
            for (std::size_t s = 0; s < plan.schemes.size(); ++s)
            {
                for (std::size_t i = 0; i < angles.size(); ++i)
                {
                    Accum a;
                    for (const auto &it : items)
                    {
                        a.secrecy.push_back(it[s].secrecy);
                        a.radar += it[s].gain_db[i];
                        a.misses += it[s].infeasible ? 1.0 : 0.0;
                    }
                    rows.push_back(finish(pt.scenario, angles[i], plan.schemes[s], a));
                }
            }
            bool all_infeasible = true;
            for (const auto &it : items)
                for (const auto &bt : it)
                    all_infeasible = all_infeasible && bt.infeasible;
            if (all_infeasible)
                throw InfeasibleScenario("beampattern: the secrecy floor r_th is unreachable on every trial");
            return rows;
        }

        std::vector<ResultRow> sweep(const ScenarioConfig &cfg, Scenario scenario, const SweepOptions &sopts,
                                     bool parallel)
        {
            cfg.validate();
            const Plan plan = make_plan(cfg, scenario, sopts);
            switch (scenario)
            {
            case Scenario::convergence:
                return run_convergence(cfg, plan, sopts, parallel);
            case Scenario::beampattern:
                return run_beampattern(cfg, plan, sopts, parallel);
            default:
                return run_standard(cfg, plan, sopts, parallel);
            }
        }

        std::vector<std::vector<int>> all_subsets(int N, int n)
        {
            std::vector<std::vector<int>> out;
            std::vector<int> cur(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                cur[static_cast<std::size_t>(i)] = i;
            while (true)
            {
                out.push_back(cur);
                int i = n - 1;
                while (i >= 0 && cur[static_cast<std::size_t>(i)] == N - n + i)
                    --i;
                if (i < 0)
                    break;
                ++cur[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < n; ++j)
                    cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
            }
            return out;
        }

        // Larger is better; -inf marks an unusable subset. The second entry is a
        // feasibility tier (zf_secrecy ranks radar-feasible subsets first).
        std::pair<int, double> oracle_score(const ChannelSet &chan, const PortSelection &sel,
                                            OracleObjective objective, const OracleInputs &in)
        {
            constexpr double bad = -std::numeric_limits<double>::infinity();
            switch (objective)
            {
            case OracleObjective::zf_secrecy:
            {
                try
                {
                    const auto rep = zf_metrics(chan, sel, in.opts.power);
                    const bool ok = rep.radar_sinr >= in.opts.zeta * (1.0 - 1e-6);
                    return {ok ? 1 : 0, rep.sum_secrecy};
                }
                catch (const RankDeficientError &)
                {
                    return {-1, bad};
                }
            }
            case OracleObjective::trace_inverse:
            {
                const double t = trace_inverse(select_columns(chan.H, sel));
                return {std::isfinite(t) ? 0 : -1, -t};
            }
            case OracleObjective::gamma_knapsack:
            {
                double s = 0.0;
                for (int i : sel.indices)
                    s += in.scores(i);
                return {0, s};
            }
            case OracleObjective::fp_secrecy:
            {
                const auto res = precode_fixed(chan, sel, in.opts);
                return {res.radar_feasible ? 1 : 0, res.report.sum_secrecy};
            }
            }
            return {-1, bad};
        }

        OracleResult oracle(const ChannelSet &chan, int n_s, OracleObjective objective, const OracleInputs &in,
                            bool parallel)
        {
            const int N = chan.num_ports();
            if (n_s < 1 || n_s > N)
                throw std::invalid_argument("exhaustive_oracle: n_s out of range");
            const long long count = binomial(N, n_s);
            if (count > static_cast<long long>(oracle_guard))
                throw InfeasibleScenario("exhaustive search over " + std::to_string(count)
                                         + " selections exceeds the limit of 100000");
            if (objective == OracleObjective::gamma_knapsack && in.scores.size() != N)
                throw std::invalid_argument("exhaustive_oracle: one score per port required");

            const auto subsets = all_subsets(N, n_s);
            const auto scores = map_items<std::pair<int, double>>(subsets.size(), resolve_workers(0), parallel,
                                                                  [&](std::size_t i) {
                return oracle_score(chan, PortSelection{subsets[i]}, objective, in);
            });

            std::size_t best = 0;
            for (std::size_t i = 1; i < subsets.size(); ++i)
                if (scores[i].first > scores[best].first
                    || (scores[i].first == scores[best].first && scores[i].second > scores[best].second))
                    best = i;

            OracleResult r;
            r.selection = PortSelection{subsets[best]};
            r.value = objective == OracleObjective::trace_inverse ? -scores[best].second : scores[best].second;
            r.count = count;
            return r;
        }
    }

    Scenario parse_scenario(const std::string &name)
    {
        static const std::pair<const char *, Scenario> names[] = {
            {"snr", Scenario::snr},     {"area", Scenario::area},
            {"zeta", Scenario::zeta},   {"ports", Scenario::ports},
            {"users", Scenario::users}, {"convergence", Scenario::convergence},
            {"beampattern", Scenario::beampattern}};
        for (const auto &[n, s] : names)
            if (name == n)
                return s;
        throw ConfigError("unknown scenario '" + name + "'");
    }

    std::string scenario_name(Scenario s)
    {
        switch (s)
        {
        case Scenario::snr: return "snr";
        case Scenario::area: return "area";
        case Scenario::zeta: return "zeta";
        case Scenario::ports: return "ports";
        case Scenario::users: return "users";
        case Scenario::convergence: return "convergence";
        case Scenario::beampattern: return "beampattern";
        }
        return "unknown";
    }

    SolverOptions solver_options(const ScenarioConfig &cfg)
    {
        SolverOptions o;
        o.power = cfg.power;
        o.num_active = cfg.n_active;
        o.zeta = cfg.zeta;
        o.r_th = cfg.r_th;
        o.max_outer_iters = cfg.max_outer_iters;
        o.max_sca_iters = cfg.max_sca_iters;
        o.tol = cfg.tol;
        o.sca_tol = cfg.sca_tol;
        o.bisection_tol = cfg.bisection_tol;
        o.reselect_each_iter = cfg.reselect_each_iter;
        o.random_init = cfg.random_init;
        return o;
    }

    FasGeometry geometry_for(const ScenarioConfig &cfg, int num_ports, double area)
    {
        FasGeometry g;
        if (num_ports == cfg.num_ports())
        {
            g.ns_x = cfg.ns_x;
            g.ns_y = cfg.ns_y;
            g.area_x = area;
            g.area_y = area;
            g.wavelength = cfg.wavelength;
            g.nr = cfg.nr;
        }
        else
        {
            g = FasGeometry::square_grid(num_ports, area, cfg.wavelength, cfg.nr);
        }
        g.rx_spacing = cfg.rx_spacing;
        g.validate();
        return g;
    }

    ChannelSet draw_trial_channel(const ScenarioConfig &cfg, const FasGeometry &geom,
                                  const SpatialCorrelation &corr, int users, double snr_db,
                                  double target_distance, Rng &rng)
    {
        const double sigma2 = cfg.power / std::pow(10.0, snr_db / 10.0);
        ChannelParams p;
        p.users.resize(static_cast<std::size_t>(users));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int k = 0; k < users; ++k)
        {
            auto &u = p.users[static_cast<std::size_t>(k)];
            if (cfg.placement == "disc")
            {
                // Uniform over the annulus min_user_distance <= d <= disc_radius.
                const double r0 = cfg.min_user_distance * cfg.min_user_distance;
                const double r1 = cfg.disc_radius * cfg.disc_radius;
                u.distance = std::sqrt(r0 + unit(rng) * (r1 - r0));
            }
            else
            {
                if (k >= static_cast<int>(cfg.user_distances.size()))
                    throw ConfigError("user_distances needs one entry per user");
                u.distance = cfg.user_distances[static_cast<std::size_t>(k)];
            }
            u.pathloss_exp = cfg.pathloss_exp;
            u.noise_var = sigma2;
        }
        double theta = cfg.theta_deg;
        if (cfg.target_angle == "random")
            theta = cfg.theta_min_deg + unit(rng) * (cfg.theta_max_deg - cfg.theta_min_deg);
        p.direction = TargetDirection{theta * deg, cfg.phi_deg * deg};
        p.target_distance = target_distance;
        p.pathloss_exp = cfg.pathloss_exp;
        p.sigma_b2 = cfg.sigma_b2;
        p.sigma_c2 = cfg.sigma_c2;
        p.sigma_r2 = cfg.target_noise_scale * sigma2;
        return draw_channel_set(geom, corr, p, rng);
    }

    PortSelection evenly_spaced(int num_ports, int n)
    {
        if (n < 1 || n > num_ports)
            throw std::invalid_argument("evenly_spaced: n out of range");
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            idx.push_back(n == 1 ? 0 : static_cast<int>(std::lround(static_cast<double>(i) * (num_ports - 1) / (n - 1))));
        return PortSelection::from(std::move(idx), num_ports);
    }

    TrialOutcome run_scheme(const std::string &scheme, const ChannelSet &chan, const SolverOptions &opts,
                            std::uint64_t trial_seed)
    {
        const auto t0 = std::chrono::steady_clock::now();
        TrialOutcome o;
        auto zf_outcome = [&](const PortSelection &sel) {
            try
            {
                const auto rep = zf_metrics(chan, sel, opts.power);
                o.secrecy = rep.sum_secrecy;
                o.radar_sinr = rep.radar_sinr;
                o.miss = rep.radar_sinr < opts.zeta * (1.0 - 1e-6);
            }
            catch (const RankDeficientError &)
            {
                o.miss = true;
            }
        };

        if (scheme == "jpps")
        {
            Rng rng(derive_seed(trial_seed, 0x5eed, 0));
            const auto res = jpps(chan, opts, rng);
            o.secrecy = res.report.sum_secrecy;
            o.radar_sinr = res.report.radar_sinr;
            o.miss = !res.radar_feasible;
            o.iterations = res.iterations;
        }
        else if (scheme == "fpa-jpps")
        {
            const auto res = precode_fixed(chan, evenly_spaced(chan.num_ports(), opts.num_active), opts);
            o.secrecy = res.report.sum_secrecy;
            o.radar_sinr = res.report.radar_sinr;
            o.miss = !res.radar_feasible;
            o.iterations = res.iterations;
        }
        else if (scheme == "gs")
        {
            const auto sol = greedy_removal(chan, opts.num_active, opts.zeta, opts.power);
            o.secrecy = sol.report.sum_secrecy;
            o.radar_sinr = sol.report.radar_sinr;
            o.miss = sol.constraint_missed;
            o.iterations = static_cast<int>(sol.removed.size());
        }
        else if (scheme == "gs-tim")
        {
            zf_outcome(gs_tim(chan.H, opts.num_active));
            o.iterations = opts.num_active;
        }
        else if (scheme == "svd-tim")
        {
            zf_outcome(svd_tim(chan.H, opts.num_active));
            o.iterations = opts.num_active;
        }
        else if (scheme == "exhaustive")
        {
            OracleInputs in;
            in.opts = opts;
            // Trials already run in parallel; the subsets are scored serially here.
            const auto best = reference::exhaustive_oracle(chan, opts.num_active, OracleObjective::fp_secrecy, in);
            const auto res = precode_fixed(chan, best.selection, opts);
            o.secrecy = res.report.sum_secrecy;
            o.radar_sinr = res.report.radar_sinr;
            o.miss = !res.radar_feasible;
        }
        else
        {
            throw ConfigError("unknown scheme '" + scheme + "'");
        }
        o.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return o;
    }

    std::vector<ResultRow> run_sweep(const ScenarioConfig &cfg, Scenario scenario, const SweepOptions &sopts)
    {
        return sweep(cfg, scenario, sopts, true);
    }

    ResultRow fpa_baseline(const ScenarioConfig &cfg, double snr_db)
    {
        auto c = cfg;
        c.snr_grid = {snr_db};
        c.schemes = {"fpa-jpps"};
        return run_sweep(c, Scenario::snr, SweepOptions{}).front();
    }

    Beampattern beampattern(const FasGeometry &geom, const PortSelection &sel, const CMat &W,
                            const std::vector<double> &angles_deg, double phi_deg)
    {
        Beampattern bp;
        std::vector<double> gains;
        gains.reserve(angles_deg.size());
        for (double a : angles_deg)
        {
            const auto steer = steering_vectors(geom, TargetDirection{a * deg, phi_deg * deg});
            const CVec as = select_entries(steer.a_t, sel);
            gains.push_back((as.adjoint() * W).squaredNorm());
        }
        std::size_t peak = 0;
        for (std::size_t i = 1; i < gains.size(); ++i)
            if (gains[i] > gains[peak])
                peak = i;
        bp.peak_gain = gains.empty() ? 0.0 : gains[peak];
        bp.peak_angle_deg = gains.empty() ? 0.0 : angles_deg[peak];
        for (std::size_t i = 0; i < gains.size(); ++i)
        {
            const double ratio = bp.peak_gain > 0.0 ? gains[i] / bp.peak_gain : 1.0;
            bp.points.push_back({angles_deg[i], 10.0 * std::log10(std::max(ratio, 1e-30))});
        }
        return bp;
    }

    long long binomial(int n, int k)
    {
        if (k < 0 || k > n)
            return 0;
        k = std::min(k, n - k);
        long double r = 1.0L;
        for (int i = 1; i <= k; ++i)
            r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
        return static_cast<long long>(std::llround(r));
    }

    OracleResult exhaustive_oracle(const ChannelSet &chan, int n_s, OracleObjective objective, const OracleInputs &in)
    {
        return oracle(chan, n_s, objective, in, true);
    }

    void write_csv(std::ostream &out, const std::vector<ResultRow> &rows)
    {
        out << "scenario,param,scheme,trials,mean_secrecy_bps_hz,std_secrecy,mean_radar_sinr,miss_frac,mean_ms\n";
        for (const auto &r : rows)
        {
            out << r.scenario << ',' << format_real(r.param) << ',' << r.scheme << ',' << r.trials << ','
                << format_real(r.mean_secrecy) << ',' << format_real(r.std_secrecy) << ','
                << format_real(r.mean_radar_sinr) << ',' << format_real(r.miss_frac) << ','
                << format_real(r.mean_ms) << '\n';
        }
    }

    void write_json(std::ostream &out, const std::vector<ResultRow> &rows)
    {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &r : rows)
        {
            arr.push_back({{"scenario", r.scenario},
                           {"param", r.param},
                           {"scheme", r.scheme},
                           {"trials", r.trials},
                           {"mean_secrecy_bps_hz", r.mean_secrecy},
                           {"std_secrecy", r.std_secrecy},
                           {"mean_radar_sinr", r.mean_radar_sinr},
                           {"miss_frac", r.miss_frac},
                           {"mean_ms", r.mean_ms}});
        }
        out << arr.dump(2) << '\n';
    }

    namespace reference
    {
        std::vector<ResultRow> run_sweep(const ScenarioConfig &cfg, Scenario scenario, const SweepOptions &sopts)
        {
            return sweep(cfg, scenario, sopts, false);
        }

        OracleResult exhaustive_oracle(const ChannelSet &chan, int n_s, OracleObjective objective,
                                       const OracleInputs &in)
        {
            return oracle(chan, n_s, objective, in, false);
        }
    }
}
