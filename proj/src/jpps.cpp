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

#include "fasisac/jpps.hpp"

#include "fasisac/zf.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fasisac
{
    namespace
    {
        CMat take_rows(const CMat &W_full, const PortSelection &sel)
        {
            CMat out(sel.size(), W_full.cols());
            for (int r = 0; r < sel.size(); ++r)
                out.row(r) = W_full.row(sel.indices[static_cast<std::size_t>(r)]);
            return out;
        }

        double real_inner(const CMat &X, const CMat &Y)
        {
            return (X.conjugate().cwiseProduct(Y)).sum().real();
        }

        double beam_gain(const CVec &a, const CMat &W)
        {
            return (a.adjoint() * W).squaredNorm();
        }

        // The eavesdropper half of the FP surrogate is not a minorant of the secrecy rate, so a
        // surrogate gain can still lose true secrecy. Backtrack toward W until it does not.
        CMat safeguard(const ChannelSet &chan, const PortSelection &sel, const CMat &W, const CMat &W_new,
                       double rho)
        {
            const double base = unclamped_secrecy(chan, sel, W);
            const CVec a = select_entries(chan.a_t, sel);
            const CMat delta = W_new - W;
            for (double tau = 1.0; tau > 1e-3; tau *= 0.5)
            {
                const CMat Wc = W + tau * delta;
                if (rho > 0.0 && beam_gain(a, Wc) < rho)
                    continue;
                if (unclamped_secrecy(chan, sel, Wc) >= base)
                    return Wc;
            }
            return W;
        }

        CMat refine(const ChannelSet &chan, const PortSelection &sel, const CMat &W, const SolverOptions &opts)
        {
            FpState fp = update_auxiliaries(chan, sel, W);
            assemble_surrogate(fp, chan, sel, opts.zeta);
            auto sca = sca_precoder(fp, W, opts);
            return sca.feasible ? safeguard(chan, sel, W, sca.W, fp.rho) : W;
        }

        // Of the candidate starting points, the one with the highest true secrecy.
        CMat best_start(const ChannelSet &chan, const PortSelection &sel, std::vector<CMat> cands)
        {
            std::size_t best = 0;
            double best_s = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < cands.size(); ++i)
            {
                if (!(cands[i].norm() > 0.0))
                    continue;
                const double s = unclamped_secrecy(chan, sel, cands[i]);
                if (s > best_s)
                {
                    best_s = s;
                    best = i;
                }
            }
            return cands[best];
        }

        bool radar_ok(const MetricsReport &rep, double zeta)
        {
            return rep.radar_sinr >= zeta * (1.0 - 1e-6);
        }

        void check_options(const ChannelSet &chan, const SolverOptions &opts)
        {
            opts.validate();
            if (opts.num_active > chan.num_ports())
                throw std::invalid_argument("more active ports than available ports");
            if (chan.num_users() > opts.num_active)
                throw std::invalid_argument("need at least as many active ports as users");
        }

        JppsResult alternate(const ChannelSet &chan, PortSelection sel, CMat W, const SolverOptions &opts,
                             bool allow_reselect)
        {
            const int N = chan.num_ports();
            const double P = opts.power;
            const double rho = radar_threshold(chan, opts.zeta);

            JppsResult out;
            out.radar_feasible = restore_radar(chan, sel, rho, P, W);

            double best = -std::numeric_limits<double>::infinity();
            bool have_best = false;
            auto consider = [&](const PortSelection &s, const CMat &Wc, const MetricsReport &rep) {
                const bool ok = radar_ok(rep, opts.zeta);
                // Until a radar-feasible iterate shows up, keep the latest one.
                if (ok ? (!have_best || rep.sum_secrecy > best) : !have_best)
                {
                    out.selection = s;
                    out.precoder = Precoder{Wc, P};
                    out.report = rep;
                }
                if (ok && (!have_best || rep.sum_secrecy > best))
                {
                    have_best = true;
                    best = rep.sum_secrecy;
                }
            };
            {
                const auto rep = secrecy_report(chan, sel, Precoder{W, P});
                consider(sel, W, rep);
                if (opts.keep_trace)
                {
                    JppsTraceRecord rec;
                    rec.surrogate = fp_objective(update_auxiliaries(chan, sel, W), W);
                    rec.sum_secrecy = rep.sum_secrecy;
                    rec.radar_sinr = rep.radar_sinr;
                    rec.selection = sel;
                    out.trace.push_back(std::move(rec));
                }
            }

            for (int t = 1; t <= opts.max_outer_iters; ++t)
            {
                FpState fp = update_auxiliaries(chan, sel, W);
                assemble_surrogate(fp, chan, sel, opts.zeta);
                const auto sca = sca_precoder(fp, W, opts);
                CMat W_next = sca.feasible ? safeguard(chan, sel, W, sca.W, rho) : W;
                PortSelection sel_next = sel;
                bool reselected = false;

                if (allow_reselect && (opts.reselect_each_iter || t == 1))
                {
                    const PortSelection cand = top_ports(gamma_scores(fp, chan), opts.num_active);
                    if (!(cand == sel))
                    {
                        CMat Wc = take_rows(embed_rows(W, sel, N), cand);
                        if (Wc.norm() > 0.0)
                            Wc *= std::sqrt(P) / Wc.norm();
                        Wc = best_start(chan, cand, {Wc, initial_precoder(chan, cand, P)});
                        if (restore_radar(chan, cand, rho, P, Wc))
                        {
                            Wc = refine(chan, cand, Wc, opts);
                            if (unclamped_secrecy(chan, cand, Wc) >= unclamped_secrecy(chan, sel, W_next))
                            {
                                W_next = Wc;
                                sel_next = cand;
                                reselected = true;
                            }
                        }
                    }
                }

                const double change = (embed_rows(W_next, sel_next, N) - embed_rows(W, sel, N)).squaredNorm() / P;
                W = std::move(W_next);
                sel = std::move(sel_next);
                out.iterations = t;

                const auto rep = secrecy_report(chan, sel, Precoder{W, P});
                consider(sel, W, rep);
                if (opts.keep_trace)
                {
                    FpState tight = update_auxiliaries(chan, sel, W);
                    JppsTraceRecord rec;
                    rec.iteration = t;
                    rec.surrogate = fp_objective(tight, W);
                    rec.sum_secrecy = rep.sum_secrecy;
                    rec.radar_sinr = rep.radar_sinr;
                    rec.change = change;
                    rec.reselected = reselected;
                    rec.selection = sel;
                    out.trace.push_back(std::move(rec));
                }
                if (change < opts.tol)
                {
                    out.converged = true;
                    break;
                }
            }
            out.radar_feasible = radar_ok(out.report, opts.zeta);
            return out;
        }
    }

    CMat matched_filter(const ChannelSet &chan, const PortSelection &sel, double P)
    {
        CMat W = select_columns(chan.H, sel).adjoint();
        const double n = W.norm();
        if (!(n > 0.0))
            return W;
        return W * (std::sqrt(P) / n);
    }

    CMat initial_precoder(const ChannelSet &chan, const PortSelection &sel, double P)
    {
        std::vector<CMat> cands{matched_filter(chan, sel, P)};
        try
        {
            cands.push_back(std::sqrt(P) * zf_precoder(select_columns(chan.H, sel)).W);
        }
        catch (const RankDeficientError &)
        {
        }
        return best_start(chan, sel, std::move(cands));
    }

    bool restore_radar(const ChannelSet &chan, const PortSelection &sel, double rho, double P, CMat &W)
    {
        if (rho <= 0.0)
            return true;
        const CVec a = select_entries(chan.a_t, sel);
        if (beam_gain(a, W) >= rho)
            return true;
        const double max_gain = P * a.squaredNorm();
        if (max_gain < rho)
            return false;

        // Beam on a_t with each stream phase-aligned to its current projection, so the
        // projections grow in modulus along the blend.
        const int K = static_cast<int>(W.cols());
        const CVec proj = (a.adjoint() * W).transpose();
        CMat beam(W.rows(), K);
        const double scale = std::sqrt(P / K) / a.norm();
        for (int j = 0; j < K; ++j)
        {
            const cplx phase = std::abs(proj(j)) > 0.0 ? proj(j) / std::abs(proj(j)) : cplx{1.0, 0.0};
            beam.col(j) = scale * phase * a;
        }
        const double target = std::min(rho * (1.0 + 1e-9), max_gain);
        double lo = 0.0;
        double hi = 1.0;
        for (int it = 0; it < 100; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (beam_gain(a, (1.0 - mid) * W + mid * beam) >= target)
                hi = mid;
            else
                lo = mid;
        }
        W = (1.0 - hi) * W + hi * beam;
        return beam_gain(a, W) >= rho * (1.0 - 1e-12);
    }

    JppsResult jpps(const ChannelSet &chan, const SolverOptions &opts, Rng &rng)
    {
        check_options(chan, opts);
        const int N = chan.num_ports();
        const int K = chan.num_users();
        const PortSelection all = PortSelection::all(N);

        CMat W_full;
        if (opts.random_init)
        {
            W_full.resize(N, K);
            for (int c = 0; c < K; ++c)
                for (int r = 0; r < N; ++r)
                    W_full(r, c) = complex_normal(rng);
            W_full *= std::sqrt(opts.power) / W_full.norm();
        }
        else
        {
            W_full = initial_precoder(chan, all, opts.power);
        }

        const FpState fp0 = update_auxiliaries(chan, all, W_full);
        PortSelection sel = top_ports(gamma_scores(fp0, chan), opts.num_active);
        CMat W = take_rows(W_full, sel);
        if (W.norm() > 0.0)
            W *= std::sqrt(opts.power) / W.norm();
        if (opts.random_init)
        {
            if (!(W.norm() > 0.0))
                W = matched_filter(chan, sel, opts.power);
            return alternate(chan, sel, std::move(W), opts, N > opts.num_active);
        }

        W = best_start(chan, sel, {W, initial_precoder(chan, sel, opts.power)});
        // The trace-inverse greedy set is a second starting point.
        if (K <= opts.num_active)
        {
            const PortSelection tim = gs_tim(chan.H, opts.num_active);
            CMat W_tim = initial_precoder(chan, tim, opts.power);
            if (unclamped_secrecy(chan, tim, W_tim) > unclamped_secrecy(chan, sel, W))
            {
                sel = tim;
                W = std::move(W_tim);
            }
        }
        return alternate(chan, sel, std::move(W), opts, N > opts.num_active);
    }

    JppsResult precode_fixed(const ChannelSet &chan, const PortSelection &sel, const SolverOptions &opts)
    {
        check_options(chan, opts);
        sel.validate(chan.num_ports());
        return alternate(chan, sel, initial_precoder(chan, sel, opts.power), opts, false);
    }

    RadarCentricResult radar_centric_fixed(const ChannelSet &chan, const PortSelection &sel, const CMat &W0,
                                           const SolverOptions &opts)
    {
        const double P = opts.power;
        const CVec a = select_entries(chan.a_t, sel);
        const CMat D3 = a * a.adjoint();

        RadarCentricResult out;
        out.selection = sel;
        CMat W = W0;
        const auto clamped = [&](const CMat &X) { return secrecy_report(chan, sel, Precoder{X, P}).sum_secrecy; };
        if (clamped(W) < opts.r_th)
            out.feasible = false;

        for (int it = 0; out.feasible && it < opts.max_sca_iters; ++it)
        {
            FpState fp = update_auxiliaries(chan, sel, W);
            // Users already at zero secrecy drop out of the constraint.
            const auto rep = secrecy_report(chan, sel, Precoder{W, P});
            for (int k = 0; k < W.cols(); ++k)
                if (rep.user_rate(k) - rep.eve_rate(k) <= 0.0)
                {
                    fp.u(k) = fp.v(k) = 0.0;
                    fp.delta(k) = fp.beta(k) = 0.0;
                }
            assemble_surrogate(fp, chan, sel, 0.0);
            const CMat grad = surrogate_gradient(fp, W);
            const double rho = opts.r_th - fp_objective(fp, W) + 2.0 * real_inner(W, grad);

            CMat M = D3 * W;
            if (!(M.norm() > 0.0))
                M = a * RVec::Ones(W.cols()).transpose().cast<cplx>();
            const auto sub = solve_precoder_subproblem(M, grad, P, rho, opts.bisection_tol);
            if (!sub.feasible)
                break;
            const CMat delta = sub.W - W;
            if (!(2.0 * real_inner(delta, M) > 1e-12 * std::max(1.0, beam_gain(a, W))))
                break;

            const double gain = beam_gain(a, W);
            bool moved = false;
            for (double tau = 1.0; tau > 1e-6; tau *= 0.5)
            {
                const CMat Wc = W + tau * delta;
                if (clamped(Wc) >= opts.r_th && beam_gain(a, Wc) > gain)
                {
                    const double change = tau * tau * delta.squaredNorm() / P;
                    W = Wc;
                    moved = true;
                    ++out.iterations;
                    if (change < opts.sca_tol)
                        it = opts.max_sca_iters;
                    break;
                }
            }
            if (!moved)
                break;
        }

        out.precoder = Precoder{W, P};
        out.report = secrecy_report(chan, sel, out.precoder);
        out.radar_gain = beam_gain(a, W);
        return out;
    }

    RadarCentricResult radar_centric(const ChannelSet &chan, const SolverOptions &opts, Rng &rng)
    {
        const auto start = jpps(chan, opts, rng);
        auto best = radar_centric_fixed(chan, start.selection, start.precoder.W, opts);
        if (chan.num_users() > opts.num_active)
            return best;
        // The trace-inverse greedy set is a second candidate.
        const PortSelection tim = gs_tim(chan.H, opts.num_active);
        if (tim.indices == start.selection.indices)
            return best;
        const auto alt_start = precode_fixed(chan, tim, opts);
        auto alt = radar_centric_fixed(chan, tim, alt_start.precoder.W, opts);
        if (alt.feasible && (!best.feasible || alt.radar_gain > best.radar_gain))
            return alt;
        return best;
    }
}
