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

#include "fasisac/zf.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include <Eigen/SVD>

namespace fasisac
{
    namespace
    {
        constexpr double rank_tol = 1e-7;  // relative, on singular values
        constexpr double tie_tol = 1e-9;

        bool full_row_rank(const CMat &HS)
        {
            if (HS.cols() < HS.rows())
                return false;
            return tim_cost_svd(HS).rank == HS.rows();
        }

        // Candidate scoring shared by the two greedy-growth variants.
        bool better(const TimCost &a, const TimCost &b)
        {
            if (a.rank != b.rank)
                return a.rank > b.rank;
            return a.pinv_trace < b.pinv_trace * (1.0 - tie_tol);
        }

        template <typename CostFn>
        PortSelection grow(const CMat &H, int n_s, CostFn cost)
        {
            const int N = static_cast<int>(H.cols());
            const int K = static_cast<int>(H.rows());
            if (n_s < K || n_s > N)
                throw std::invalid_argument("need K <= n_s <= N_s");
            std::vector<int> chosen;
            std::vector<bool> used(static_cast<std::size_t>(N), false);
            while (static_cast<int>(chosen.size()) < n_s)
            {
                int best_j = -1;
                TimCost best_c;
                for (int j = 0; j < N; ++j)
                {
                    if (used[static_cast<std::size_t>(j)])
                        continue;
                    std::vector<int> trial = chosen;
                    trial.push_back(j);
                    CMat HS(K, static_cast<Eigen::Index>(trial.size()));
                    for (std::size_t c = 0; c < trial.size(); ++c)
                        HS.col(static_cast<Eigen::Index>(c)) = H.col(trial[c]);
                    const TimCost c = cost(HS);
                    if (best_j < 0 || better(c, best_c))
                    {
                        best_j = j;
                        best_c = c;
                    }
                }
                used[static_cast<std::size_t>(best_j)] = true;
                chosen.push_back(best_j);
            }
            return PortSelection::from(std::move(chosen), N);
        }

        struct Candidate
        {
            bool valid = false;
            bool radar_ok = false;
            double secrecy = 0.0;
            double radar = 0.0;
        };

        Candidate score_removal(const ChannelSet &chan, const std::vector<int> &current, std::size_t drop,
                                double zeta, double P)
        {
            std::vector<int> rest;
            rest.reserve(current.size() - 1);
            for (std::size_t i = 0; i < current.size(); ++i)
                if (i != drop)
                    rest.push_back(current[i]);
            Candidate c;
            const PortSelection sel{std::move(rest)};
            if (!full_row_rank(select_columns(chan.H, sel)))
                return c;
            const auto rep = zf_metrics(chan, sel, P);
            c.valid = true;
            c.secrecy = rep.sum_secrecy;
            c.radar = rep.radar_sinr;
            c.radar_ok = rep.radar_sinr >= zeta * (1.0 - 1e-6);
            return c;
        }

        // Serial reduction; ties go to the earliest candidate, i.e. the lowest port index.
        std::optional<std::size_t> pick(const std::vector<Candidate> &cands, bool need_radar)
        {
            std::optional<std::size_t> best;
            for (std::size_t i = 0; i < cands.size(); ++i)
            {
                const auto &c = cands[i];
                if (!c.valid || (need_radar && !c.radar_ok))
                    continue;
                if (!best || c.secrecy > cands[*best].secrecy)
                    best = i;
            }
            return best;
        }

        template <typename ScoreAll>
        ZfSolution removal_loop(const ChannelSet &chan, int n_s, double zeta, double P, ScoreAll score_all)
        {
            const int N = chan.num_ports();
            if (n_s < chan.num_users() || n_s > N)
                throw std::invalid_argument("need K <= n_s <= N_s");
            std::vector<int> current = PortSelection::all(N).indices;
            bool missed = false;
            std::vector<int> removed;
            std::vector<double> step_secrecy;
            std::vector<double> step_radar;
            if (full_row_rank(chan.H))
            {
                const auto rep = zf_metrics(chan, PortSelection{current}, P);
                step_secrecy.push_back(rep.sum_secrecy);
                step_radar.push_back(rep.radar_sinr);
            }
            while (static_cast<int>(current.size()) > n_s)
            {
                const std::vector<Candidate> cands = score_all(current);
                auto choice = pick(cands, true);
                if (!choice)
                {
                    choice = pick(cands, false);
                    missed = true;
                }
                if (!choice)
                    throw RankDeficientError("every port removal leaves a rank-deficient channel");
                step_secrecy.push_back(cands[*choice].secrecy);
                step_radar.push_back(cands[*choice].radar);
                removed.push_back(current[*choice]);
                current.erase(current.begin() + static_cast<std::ptrdiff_t>(*choice));
            }
            ZfSolution sol = zf_solution(chan, PortSelection{std::move(current)}, P);
            sol.constraint_missed = missed || sol.report.radar_sinr < zeta * (1.0 - 1e-6);
            sol.removed = std::move(removed);
            sol.step_secrecy = std::move(step_secrecy);
            sol.step_radar = std::move(step_radar);
            return sol;
        }
    }

    TimCost tim_cost_svd(const CMat &HS)
    {
        TimCost c;
        if (HS.size() == 0)
            return c;
        Eigen::JacobiSVD<CMat> svd(HS);
        const RVec mu = svd.singularValues();
        const double top = mu.size() > 0 ? mu(0) : 0.0;
        if (!(top > 0.0))
            return c;
        for (int i = 0; i < mu.size(); ++i)
        {
            if (mu(i) > rank_tol * top)
            {
                ++c.rank;
                c.pinv_trace += 1.0 / (mu(i) * mu(i));
            }
        }
        return c;
    }

    TimCost tim_cost_explicit(const CMat &HS)
    {
        TimCost c;
        const CMat gram = HS * HS.adjoint();
        Eigen::SelfAdjointEigenSolver<CMat> es(gram, Eigen::EigenvaluesOnly);
        const RVec lam = es.eigenvalues();
        const double top = lam.size() > 0 ? lam(lam.size() - 1) : 0.0;
        if (!(top > 0.0))
            return c;
        for (int i = 0; i < lam.size(); ++i)
            if (lam(i) > rank_tol * rank_tol * top)
                ++c.rank;
        if (c.rank == gram.rows())
        {
            c.pinv_trace = std::real(gram.llt().solve(CMat::Identity(gram.rows(), gram.cols())).trace());
        }
        else
        {
            for (int i = 0; i < lam.size(); ++i)
                if (lam(i) > rank_tol * rank_tol * top)
                    c.pinv_trace += 1.0 / lam(i);
        }
        return c;
    }

    double trace_inverse(const CMat &HS)
    {
        const auto c = tim_cost_explicit(HS);
        return c.rank == HS.rows() ? c.pinv_trace : std::numeric_limits<double>::infinity();
    }

    double trace_inverse_svd(const CMat &HS)
    {
        const auto c = tim_cost_svd(HS);
        return c.rank == HS.rows() ? c.pinv_trace : std::numeric_limits<double>::infinity();
    }

    ZfPrecoder zf_precoder(const CMat &HS)
    {
        if (!full_row_rank(HS))
            throw RankDeficientError("ZF needs a full-row-rank channel on the active ports");
        const CMat gram = HS * HS.adjoint();
        Eigen::LLT<CMat> llt(gram);
        if (llt.info() != Eigen::Success)
            throw RankDeficientError("ZF Gram matrix is not positive definite");
        const CMat inv = llt.solve(CMat::Identity(gram.rows(), gram.cols()));
        ZfPrecoder out;
        out.trace_inv = std::real(inv.trace());
        out.W = HS.adjoint() * inv / std::sqrt(out.trace_inv);
        return out;
    }

    MetricsReport zf_metrics(const ChannelSet &chan, const PortSelection &sel, double P)
    {
        const int K = chan.num_users();
        const auto zf = zf_precoder(select_columns(chan.H, sel));

        MetricsReport rep;
        rep.user_sinr.resize(K);
        rep.user_rate.resize(K);
        rep.eve_sinr.resize(K);
        rep.eve_rate.resize(K);
        rep.secrecy.resize(K);
        rep.worst_eve.assign(static_cast<std::size_t>(K), -1);

        const CVec a = select_entries(chan.a_t, sel);
        const CVec leak = (a.adjoint() * zf.W).transpose();  // a^H Pi w_j, unit-power W
        const double total = leak.squaredNorm();
        for (int k = 0; k < K; ++k)
        {
            rep.user_sinr(k) = P / (chan.user_noise(k) * zf.trace_inv);
            rep.user_rate(k) = bits(rep.user_sinr(k));
            const double own = std::norm(leak(k));
            rep.eve_sinr(k) = P * own / (P * (total - own) + chan.sigma_r2);
            rep.eve_rate(k) = bits(rep.eve_sinr(k));
            rep.secrecy(k) = std::max(0.0, rep.user_rate(k) - rep.eve_rate(k));
        }
        rep.sum_secrecy = rep.secrecy.sum();
        rep.radar_sinr = P * std::norm(chan.alpha) * total / radar_noise_power(chan);
        return rep;
    }

    ZfSolution zf_solution(const ChannelSet &chan, const PortSelection &sel, double P)
    {
        const auto zf = zf_precoder(select_columns(chan.H, sel));
        ZfSolution sol;
        sol.selection = sel;
        sol.W_zf = zf.W;
        sol.trace_inv = zf.trace_inv;
        sol.report = zf_metrics(chan, sel, P);
        return sol;
    }

    ZfSolution greedy_removal(const ChannelSet &chan, int n_s, double zeta, double P)
    {
        return removal_loop(chan, n_s, zeta, P, [&](const std::vector<int> &current) {
            std::vector<Candidate> cands(current.size());
            const auto n = static_cast<std::ptrdiff_t>(current.size());
#pragma omp parallel for schedule(dynamic)
            for (std::ptrdiff_t i = 0; i < n; ++i)
                cands[static_cast<std::size_t>(i)] = score_removal(chan, current, static_cast<std::size_t>(i), zeta, P);
            return cands;
        });
    }

    namespace reference
    {
        ZfSolution greedy_removal(const ChannelSet &chan, int n_s, double zeta, double P)
        {
            return removal_loop(chan, n_s, zeta, P, [&](const std::vector<int> &current) {
                std::vector<Candidate> cands(current.size());
                for (std::size_t i = 0; i < current.size(); ++i)
                    cands[i] = score_removal(chan, current, i, zeta, P);
                return cands;
            });
        }
    }

    PortSelection gs_tim(const CMat &H, int n_s)
    {
        return grow(H, n_s, tim_cost_explicit);
    }

    PortSelection svd_tim(const CMat &H, int n_s)
    {
        return grow(H, n_s, tim_cost_svd);
    }
}
