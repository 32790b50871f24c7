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

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--only 1,5,9] [--trials N] [--report-only]
//
// Exits 1 when any criterion fails unless --report-only is given.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "support.hpp"

using namespace fasisac;
using namespace fasisac::testing;

namespace
{
    using Clock = std::chrono::steady_clock;

    double seconds_since(Clock::time_point t0)
    {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    struct Verdict
    {
        bool pass = false;
        std::string detail;
    };

    std::string fmt(const char *f, auto... args)
    {
        char buf[512];
        std::snprintf(buf, sizeof buf, f, args...);
        return buf;
    }

    double re_inner(const CMat &X, const CMat &Y)
    {
        return (X.conjugate().cwiseProduct(Y)).sum().real();
    }

    PortSelection random_selection(int N, int n, Rng &rng)
    {
        std::vector<int> idx(static_cast<std::size_t>(N));
        for (int i = 0; i < N; ++i)
            idx[static_cast<std::size_t>(i)] = i;
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(static_cast<std::size_t>(n));
        return PortSelection::from(idx, N);
    }

    // Sum over users of log2((1 + gamma_k) / (1 + theta_k)), straight from the SINR definitions.
    double direct_secrecy(const ChannelSet &c, const PortSelection &sel, const CMat &W)
    {
        const CMat G = select_columns(c.H, sel) * W;                 // G(i, j) = h_i^H Pi w_j
        const CVec t = (select_entries(c.a_t, sel).adjoint() * W).transpose();
        const int K = static_cast<int>(W.cols());
        double total = 0.0;
        for (int k = 0; k < K; ++k)
        {
            double interf = c.user_noise(k);
            for (int j = 0; j < K; ++j)
                if (j != k)
                    interf += std::norm(G(k, j));
            const double gamma = std::norm(G(k, k)) / interf;

            double leak = c.sigma_r2;
            for (int j = 0; j < K; ++j)
                if (j != k)
                    leak += std::norm(t(j));
            double theta = std::norm(t(k)) / leak;
            for (int i = 0; i < K; ++i)
            {
                if (i == k)
                    continue;
                double den = c.eve_noise(i);
                for (int j = 0; j < K; ++j)
                    if (j != k && j != i)
                        den += std::norm(G(i, j));
                theta = std::max(theta, std::norm(G(i, k)) / den);
            }
            total += std::log2(1.0 + gamma) - std::log2(1.0 + theta);
        }
        return total;
    }

    // Euclidean projection onto {||W|| <= r} intersected with {2 Re<W,B> >= rho}.
    CMat project(const CMat &Y, const CMat &B, double r, double rho)
    {
        const CMat b = 2.0 * B;
        const double bb = b.squaredNorm();
        const auto in_half = [&](const CMat &X) { return rho <= 0.0 || re_inner(X, b) >= rho - 1e-15; };
        if (Y.norm() <= r && in_half(Y))
            return Y;
        if (Y.norm() > r)
        {
            const CMat Z = Y * (r / Y.norm());
            if (in_half(Z))
                return Z;
        }
        if (rho > 0.0)
        {
            const CMat Z = Y + ((rho - re_inner(Y, b)) / bb) * b;
            if (Z.norm() <= r)
                return Z;
        }
        const CMat centre = (rho / bb) * b;
        const CMat perp = Y - (re_inner(Y, b) / bb) * b;
        const double radius = std::sqrt(std::max(0.0, r * r - rho * rho / bb));
        if (!(perp.norm() > 0.0))
            return centre;
        return centre + perp * (radius / perp.norm());
    }

    double median(std::vector<double> v)
    {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }

    Verdict fp_tightness()
    {
        const auto t0 = Clock::now();
        double worst = 0.0;
        for (std::uint64_t s = 0; s < 100; ++s)
        {
            const auto c = default_channel(1000 + s);
            Rng rng(s);
            const auto sel = random_selection(16, 6, rng);
            const CMat W = random_precoder(6, 4, 1.0, rng);
            const auto fp = update_auxiliaries(c, sel, W);
            worst = std::max(worst, std::abs(fp_objective(fp, W) - direct_secrecy(c, sel, W)));
        }
        const double secs = seconds_since(t0);
        return {worst <= 1e-8 && secs < 10.0, fmt("max |diff| %.3g (<= 1e-8), %.2f s (< 10 s)", worst, secs)};
    }

    Verdict sca_monotone()
    {
        double worst_drop = 0.0;
        int iterates = 0, skipped = 0;
        for (std::uint64_t s = 0; s < 100; ++s)
        {
            const auto c = default_channel(2000 + s);
            Rng rng(s);
            const auto sel = random_selection(16, 6, rng);
            CMat W = random_precoder(6, 4, 1.0, rng);
            auto fp = update_auxiliaries(c, sel, W);
            assemble_surrogate(fp, c, sel, 1.0);
            if (!restore_radar(c, sel, fp.rho, 1.0, W))
            {
                ++skipped;
                continue;
            }
            const auto r = sca_precoder(fp, W, SolverOptions{});
            for (std::size_t i = 1; i < r.surrogate_trace.size(); ++i)
            {
                worst_drop = std::max(worst_drop, r.surrogate_trace[i - 1] - r.surrogate_trace[i]);
                ++iterates;
            }
        }
        return {worst_drop <= 1e-8 && skipped == 0,
                fmt("largest decrease %.3g (slack 1e-8) over %d iterates, %d instances skipped", worst_drop,
                    iterates, skipped)};
    }

    Verdict subproblem_gap()
    {
        Rng rng(77);
        double worst = 0.0;
        int infeasible = 0;
        for (int t = 0; t < 100; ++t)
        {
            const int n = 2 + t % 7, K = 1 + t % 4;
            const CMat M = random_matrix(n, K, rng);
            const CMat B = random_matrix(n, K, rng);
            const double P = 0.25 + 0.1 * t;
            const double at_free = 2.0 * re_inner(std::sqrt(P) * M / M.norm(), B);
            const double top = 2.0 * std::sqrt(P) * B.norm();
            // Spread rho over inactive, active and near-boundary cases.
            const double frac = (t % 5) / 4.5;
            const double rho = t % 5 == 0 ? -1.0 : std::max(0.0, at_free) + frac * (top - std::max(0.0, at_free));
            const auto r = solve_precoder_subproblem(M, B, P, rho);
            if (!r.feasible)
            {
                ++infeasible;
                continue;
            }
            CMat Wpg = project(CMat::Zero(n, K), B, std::sqrt(P), rho);
            const double eta = 0.05 / M.norm();
            for (int i = 0; i < 4000; ++i)
                Wpg = project(Wpg + eta * 2.0 * M, B, std::sqrt(P), rho);
            const double ours = 2.0 * re_inner(r.W, M);
            const double ref = 2.0 * re_inner(Wpg, M);
            worst = std::max(worst, std::abs(ours - ref) / std::max(std::abs(ref), 1e-12));
        }
        return {worst <= 1e-4 && infeasible == 0,
                fmt("max relative gap %.3g (<= 1e-4), %d infeasible", worst, infeasible)};
    }

    Verdict zf_identities()
    {
        double worst_id = 0.0, worst_tr = 0.0;
        for (std::uint64_t s = 0; s < 200; ++s)
        {
            const auto c = default_channel(3000 + s);
            Rng rng(s);
            const auto sel = random_selection(16, 6, rng);
            const CMat HS = select_columns(c.H, sel);
            const auto zf = zf_precoder(HS);
            const double scale = 1.0 / std::sqrt(zf.trace_inv);
            const CMat I = CMat::Identity(HS.rows(), HS.rows());
            worst_id = std::max(worst_id, (HS * zf.W - scale * I).norm() / (scale * I.norm()));
            Eigen::JacobiSVD<CMat> svd(HS);
            const RVec mu = svd.singularValues();
            double sum = 0.0;
            for (int i = 0; i < mu.size(); ++i)
                sum += 1.0 / (mu(i) * mu(i));
            const double direct = std::real((HS * HS.adjoint()).inverse().trace());
            worst_tr = std::max({worst_tr, rel_err(tim_cost_svd(HS).pinv_trace, direct), rel_err(sum, direct),
                                 rel_err(zf.trace_inv, direct)});
        }
        return {worst_id <= 1e-9 && worst_tr <= 1e-10,
                fmt("H_S W = cI rel err %.3g (<= 1e-9), trace identity rel err %.3g (<= 1e-10)", worst_id, worst_tr)};
    }

    Verdict oracle_gaps()
    {
        const auto t0 = Clock::now();
        ScenarioConfig cfg;
        cfg.ns_x = 2;
        cfg.ns_y = 4;
        cfg.users = 2;
        cfg.user_distances = {2.0, 15.0};
        cfg.n_active = 3;
        cfg.users_grid = {1, 2};
        cfg.validate();
        const auto geom = geometry_for(cfg, 8, cfg.area);
        const auto corr = jakes_correlation(geom);
        const auto opts = solver_options(cfg);
        OracleInputs in;
        in.opts = opts;

        int jpps_ok = 0, gs_ok = 0, tim_ok = 0;
        const int seeds = 50;
        for (int s = 0; s < seeds; ++s)
        {
            const std::uint64_t seed = derive_seed(cfg.seed, 0xacce55, static_cast<std::uint64_t>(s));
            Rng rng(seed);
            const auto c = draw_trial_channel(cfg, geom, corr, 2, cfg.snr_db, cfg.target_distance, rng);

            const auto best_fp = exhaustive_oracle(c, 3, OracleObjective::fp_secrecy, in);
            Rng srng(derive_seed(seed, 0x5eed, 0));
            const auto j = jpps(c, opts, srng);
            jpps_ok += j.report.sum_secrecy >= 0.95 * best_fp.value - 1e-12;

            const auto best_zf = exhaustive_oracle(c, 3, OracleObjective::zf_secrecy, in);
            const auto g = greedy_removal(c, 3, opts.zeta, opts.power);
            gs_ok += g.report.sum_secrecy >= 0.9 * best_zf.value - 1e-12;

            const auto best_ti = exhaustive_oracle(c, 3, OracleObjective::trace_inverse, in);
            const double ti = trace_inverse(select_columns(c.H, gs_tim(c.H, 3)));
            tim_ok += ti <= 1.15 * best_ti.value;
        }
        const double secs = seconds_since(t0);
        const int need = (9 * seeds + 9) / 10;
        return {jpps_ok >= need && gs_ok >= need && tim_ok >= need && secs < 300.0,
                fmt("JPPS %d/%d within 5%%, GS %d/%d within 10%%, GS-TIM %d/%d within 15%% (need %d), %.1f s (< 300 s)",
                    jpps_ok, seeds, gs_ok, seeds, tim_ok, seeds, need, secs)};
    }

    double mean_of(const std::vector<ResultRow> &rows, const std::string &scheme, double param)
    {
        for (const auto &r : rows)
            if (r.scheme == scheme && r.param == param)
                return r.mean_secrecy;
        throw std::runtime_error("missing row " + scheme);
    }

    struct TrendRuns
    {
        std::vector<ResultRow> snr, zeta, ports, users, beam;
    };

    TrendRuns run_trends(int trials)
    {
        ScenarioConfig base;
        base.trials = trials;
        TrendRuns out;
        auto c = base;
        c.schemes = {"jpps", "gs", "fpa-jpps"};
        out.snr = run_sweep(c, Scenario::snr, SweepOptions{});
        c.schemes = {"jpps", "fpa-jpps"};
        out.zeta = run_sweep(c, Scenario::zeta, SweepOptions{});
        c.schemes = {"jpps"};
        out.ports = run_sweep(c, Scenario::ports, SweepOptions{});
        out.users = run_sweep(c, Scenario::users, SweepOptions{});
        out.beam = run_sweep(c, Scenario::beampattern, SweepOptions{});
        return out;
    }

    std::string series(const std::vector<double> &v)
    {
        std::string s;
        for (double x : v)
            s += (s.empty() ? "" : " ") + fmt("%.3f", x);
        return s;
    }

    std::vector<Verdict> trends(const TrendRuns &r)
    {
        const ScenarioConfig cfg;
        std::vector<Verdict> out;

        {
            bool above = true;
            std::vector<double> j, g;
            for (double s : cfg.snr_grid)
            {
                j.push_back(mean_of(r.snr, "jpps", s));
                g.push_back(mean_of(r.snr, "gs", s));
                above = above && j.back() > g.back();
            }
            const double ratio = j.back() / g.back();
            out.push_back({above && ratio >= 1.5, fmt("JPPS [%s] vs GS [%s]; 40 dB ratio %.3f (>= 1.5)",
                                                      series(j).c_str(), series(g).c_str(), ratio)});
        }
        {
            std::vector<double> j;
            bool mono = true;
            for (double z : cfg.zeta_grid)
            {
                j.push_back(mean_of(r.zeta, "jpps", z));
                if (j.size() > 1)
                    mono = mono && j.back() <= j[j.size() - 2];
            }
            const double ratio = j.back() / j.front();
            out.push_back({mono && ratio <= 0.7,
                           fmt("JPPS [%s]; non-increasing %s; zeta=12 / zeta=0 = %.3f (<= 0.7)", series(j).c_str(),
                               mono ? "yes" : "no", ratio)});
        }
        {
            std::vector<double> j;
            bool mono = true;
            for (int n : cfg.ns_grid)
            {
                j.push_back(mean_of(r.ports, "jpps", n));
                if (j.size() > 1)
                    mono = mono && j.back() >= j[j.size() - 2];
            }
            const double gain = j.back() / j.front() - 1.0;
            out.push_back({mono && gain >= 0.2, fmt("JPPS [%s]; non-decreasing %s; gain %.1f%% (>= 20%%)",
                                                    series(j).c_str(), mono ? "yes" : "no", 100.0 * gain)});
        }
        {
            std::vector<double> j;
            bool mono = true;
            for (int k : cfg.users_grid)
            {
                j.push_back(mean_of(r.users, "jpps", k));
                if (j.size() > 1)
                    mono = mono && j.back() <= j[j.size() - 2];
            }
            out.push_back({mono, fmt("JPPS [%s]; non-increasing %s", series(j).c_str(), mono ? "yes" : "no")});
        }
        {
            int points = 0, held = 0;
            auto compare = [&](const std::vector<ResultRow> &rows, const std::vector<double> &grid) {
                for (double p : grid)
                {
                    ++points;
                    held += mean_of(rows, "jpps", p) >= mean_of(rows, "fpa-jpps", p);
                }
            };
            compare(r.snr, cfg.snr_grid);
            compare(r.zeta, cfg.zeta_grid);
            // Secrecy is constant across the angle rows of the pattern; one point suffices.
            compare(r.beam, {r.beam.front().param});
            out.push_back({held == points, fmt("FAS >= FPA at %d/%d grid points (snr, zeta, beampattern)", held,
                                               points)});
        }
        return out;
    }

    Verdict convergence(int trials)
    {
        ScenarioConfig cfg;
        const auto geom = geometry_for(cfg, cfg.num_ports(), cfg.area);
        const auto corr = jakes_correlation(geom);
        const auto opts = solver_options(cfg);
        const auto stream = static_cast<std::uint64_t>(Scenario::convergence) + 1;
        std::vector<double> j, g;
        for (int t = 0; t < trials; ++t)
        {
            const std::uint64_t seed = derive_seed(cfg.seed, stream, static_cast<std::uint64_t>(t));
            Rng rng(seed);
            const auto c = draw_trial_channel(cfg, geom, corr, cfg.users, cfg.convergence_snr_db,
                                              cfg.target_distance, rng);
            j.push_back(run_scheme("jpps", c, opts, seed).iterations);
            g.push_back(run_scheme("gs", c, opts, seed).iterations);
        }
        const double mj = median(j), mg = median(g);
        return {mj <= 10.0 && mg <= 12.0, fmt("median outer iterations JPPS %.1f (<= 10), GS %.1f (<= 12)", mj, mg)};
    }

    Verdict beampattern_peaks()
    {
        ScenarioConfig cfg;
        cfg.snr_db = cfg.beam_snr_db;
        cfg.target_angle = "fixed";
        cfg.theta_deg = cfg.beam_theta_deg;
        const auto geom = geometry_for(cfg, cfg.beam_ports, cfg.area);
        const auto corr = jakes_correlation(geom);
        const auto opts = solver_options(cfg);
        std::vector<double> angles;
        for (double a = -90.0; a <= 90.0 + 1e-9; a += cfg.beam_step_deg)
            angles.push_back(a);
        const auto stream = static_cast<std::uint64_t>(Scenario::beampattern) + 1;

        const int seeds = 100;
        int peak_ok = 0, gain_ok = 0, both = 0;
        for (int t = 0; t < seeds; ++t)
        {
            const std::uint64_t seed = derive_seed(cfg.seed, stream, static_cast<std::uint64_t>(t));
            Rng rng(seed);
            const auto c = draw_trial_channel(cfg, geom, corr, cfg.users, cfg.snr_db, cfg.target_distance, rng);
            Rng srng(derive_seed(seed, 0x5eed, 0));
            const auto fas = radar_centric(c, opts, srng);
            const auto fsel = evenly_spaced(c.num_ports(), opts.num_active);
            const auto fpa = radar_centric_fixed(c, fsel, precode_fixed(c, fsel, opts).precoder.W, opts);
            const auto bf = beampattern(geom, fas.selection, fas.precoder.W, angles, cfg.phi_deg);
            const auto bp = beampattern(geom, fpa.selection, fpa.precoder.W, angles, cfg.phi_deg);
            const bool p = std::abs(bf.peak_angle_deg - cfg.beam_theta_deg) <= 2.0 + 1e-9;
            const bool g = bf.peak_gain >= bp.peak_gain;
            peak_ok += p;
            gain_ok += g;
            both += p && g;
        }
        return {peak_ok >= 80 && gain_ok >= 80,
                fmt("peak within 2 deg on %d/%d, FAS gain >= FPA on %d/%d (each needs 80%%); both on %d", peak_ok,
                    seeds, gain_ok, seeds, both)};
    }

    Verdict determinism()
    {
        ScenarioConfig cfg;
        cfg.trials = 20;
        cfg.snr_grid = {10.0, 25.0, 40.0};
        auto csv = [&](int workers) {
            SweepOptions o;
            o.workers = workers;
            std::ostringstream out;
            write_csv(out, run_sweep(cfg, Scenario::snr, o));
            return out.str();
        };
        const auto a = csv(1), b = csv(1), c = csv(8);
        return {a == b && a == c, fmt("repeat run identical: %s, 1 vs 8 workers identical: %s (%zu bytes)",
                                      a == b ? "yes" : "no", a == c ? "yes" : "no", a.size())};
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only;
    int trials = 200;
    bool report_only = false;
    app.add_option("--only", only, "Criteria to run (default: all)")->delimiter(',');
    app.add_option("--trials", trials, "Monte Carlo trials for the trend and convergence criteria")
        ->check(CLI::PositiveNumber);
    app.add_flag("--report-only", report_only, "Exit 0 even when criteria fail");
    CLI11_PARSE(app, argc, argv);

    const std::set<int> pick(only.begin(), only.end());
    auto wanted = [&](int i) { return pick.empty() || pick.count(i) > 0; };

    int failed = 0, run = 0;
    auto report = [&](const std::string &id, const std::string &name, const Verdict &v, double secs) {
        ++run;
        failed += !v.pass;
        std::cout << (v.pass ? "PASS " : "FAIL ") << id << ' ' << name << ": " << v.detail
                  << fmt(" [%.1f s]", secs) << std::endl;
    };
    auto timed = [&](int i, const std::string &name, const std::function<Verdict()> &fn) {
        if (!wanted(i))
            return;
        const auto t0 = Clock::now();
        const auto v = fn();
        report(std::to_string(i), name, v, seconds_since(t0));
    };

    timed(1, "FP tightness", fp_tightness);
    timed(2, "SCA monotonicity", sca_monotone);
    timed(3, "subproblem optimality", subproblem_gap);
    timed(4, "ZF identities", zf_identities);
    timed(5, "oracle gaps", oracle_gaps);
    if (wanted(6))
    {
        const auto t0 = Clock::now();
        const auto runs = run_trends(trials);
        const double secs = seconds_since(t0);
        const auto v = trends(runs);
        const char *names[] = {"JPPS above GS vs SNR", "secrecy vs zeta", "secrecy vs ports", "secrecy vs users",
                               "FAS above FPA"};
        for (std::size_t i = 0; i < v.size(); ++i)
            report(std::string("6") + static_cast<char>('a' + i), names[i], v[i], i == 0 ? secs : 0.0);
    }
    timed(7, "convergence", [&] { return convergence(trials); });
    timed(8, "beampattern", beampattern_peaks);
    timed(9, "determinism", determinism);

    std::cout << (run - failed) << '/' << run << " criteria passed";
    if (report_only && failed > 0)
        std::cout << " (report only; failures do not change the exit code)";
    std::cout << std::endl;
    return failed > 0 && !report_only ? 1 : 0;
}
