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

#include "fasisac/fp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <numeric>

namespace fasisac
{
    void SolverOptions::validate() const
    {
        if (!(power > 0.0))
            throw std::invalid_argument("power budget must be positive");
        if (num_active < 1)
            throw std::invalid_argument("num_active must be positive");
        if (zeta < 0.0 || r_th < 0.0)
            throw std::invalid_argument("thresholds must be nonnegative");
        if (max_outer_iters < 1 || max_sca_iters < 1)
            throw std::invalid_argument("iteration limits must be positive");
        if (!(tol > 0.0) || !(sca_tol > 0.0) || !(bisection_tol > 0.0))
            throw std::invalid_argument("tolerances must be positive");
    }

    namespace
    {
        // Re Tr(X^H Y)
        double real_inner(const CMat &X, const CMat &Y)
        {
            return (X.conjugate().cwiseProduct(Y)).sum().real();
        }

        // row . w_j for all j
        CVec row_gains(const CVec &row, const CMat &W)
        {
            return (row.transpose() * W).transpose();
        }

        double leakage(const CVec &gains, int skip)
        {
            double s = 0.0;
            for (int j = 0; j < gains.size(); ++j)
                if (j != skip)
                    s += std::norm(gains(j));
            return s;
        }
    }

    WorstEavesdropper worst_case_eavesdropper(const ChannelSet &chan, const PortSelection &sel,
                                              const CMat &W, int k)
    {
        const int K = chan.num_users();
        if (k < 0 || k >= K || W.cols() != K || W.rows() != sel.size())
            throw std::invalid_argument("worst_case_eavesdropper: dimension mismatch");

        WorstEavesdropper best;
        best.user = -1;
        best.row_full = chan.a_t.conjugate();
        best.row = select_entries(best.row_full, sel);
        best.noise = chan.sigma_r2;
        {
            const CVec g = row_gains(best.row, W);
            best.sinr = std::norm(g(k)) / (leakage(g, k) + best.noise);
        }

        for (int i = 0; i < K; ++i)
        {
            if (i == k)
                continue;
            const CVec row_full = chan.H.row(i).transpose();
            const CVec row = select_entries(row_full, sel);
            const CVec g = row_gains(row, W);
            // leakage over streams other than the eavesdropper's own
            const double interference = leakage(g, i) - std::norm(g(k));
            const double s = std::norm(g(k)) / (interference + chan.eve_noise(i));
            if (s > best.sinr)
            {
                best.user = i;
                best.row_full = row_full;
                best.row = row;
                best.noise = chan.eve_noise(i);
                best.sinr = s;
            }
        }
        return best;
    }

    FpState update_auxiliaries(const ChannelSet &chan, const PortSelection &sel, const CMat &W)
    {
        const int K = chan.num_users();
        if (W.cols() != K || W.rows() != sel.size())
            throw std::invalid_argument("update_auxiliaries: precoder shape mismatch");

        FpState fp;
        fp.u.resize(K);
        fp.v.resize(K);
        fp.delta.resize(K);
        fp.beta.resize(K);
        fp.eves.resize(static_cast<std::size_t>(K));
        fp.HS = select_columns(chan.H, sel);
        fp.user_noise = chan.user_noise;

        for (int k = 0; k < K; ++k)
        {
            const CVec g = row_gains(fp.HS.row(k).transpose(), W);
            const cplx a = g(k);
            const double b = leakage(g, -1) + chan.user_noise(k);
            fp.u(k) = std::norm(a) / (b - std::norm(a));
            fp.delta(k) = std::conj(a) / b;

            auto eve = worst_case_eavesdropper(chan, sel, W, k);
            const CVec ge = row_gains(eve.row, W);
            const cplx c = ge(k);
            const double e = leakage(ge, eve.user) + eve.noise;
            fp.v(k) = eve.sinr;
            fp.beta(k) = std::conj(c) / e;
            fp.eves[static_cast<std::size_t>(k)] = std::move(eve);
        }
        return fp;
    }

    void assemble_surrogate(FpState &fp, const ChannelSet &chan, const PortSelection &sel, double zeta)
    {
        const int K = static_cast<int>(fp.u.size());
        const int n = sel.size();
        fp.C1 = CMat::Zero(n, K);
        fp.C2 = CMat::Zero(n, K);
        fp.D1 = CMat::Zero(n, n);
        fp.D2 = CMat::Zero(n, n);
        fp.D2_skip.assign(static_cast<std::size_t>(K), CMat::Zero(n, n));

        for (int k = 0; k < K; ++k)
        {
            const CVec h = fp.HS.row(k).adjoint();  // Pi^H h_k
            fp.C1.col(k) = (1.0 + fp.u(k)) * std::conj(fp.delta(k)) * h;
            fp.D1 += (1.0 + fp.u(k)) * std::norm(fp.delta(k)) * (h * h.adjoint());

            const auto &eve = fp.eves[static_cast<std::size_t>(k)];
            const CVec g = eve.row.conjugate();
            fp.C2.col(k) = (1.0 + fp.v(k)) * std::conj(fp.beta(k)) * g;
            const CMat gg = (1.0 + fp.v(k)) * std::norm(fp.beta(k)) * (g * g.adjoint());
            fp.D2 += gg;
            if (!eve.is_target())
                fp.D2_skip[static_cast<std::size_t>(eve.user)] += gg;
        }

        const CVec a = select_entries(chan.a_t, sel);
        fp.D3 = a * a.adjoint();

        if (zeta > 0.0)
        {
            const CVec w_r = mvdr_filter(chan.Rc, chan.sigma_b2, chan.a_r);
            if (std::abs(w_r.dot(chan.a_r) - 1.0) > 1e-8)
                throw NumericalError("MVDR filter lost its distortionless response");
        }
        fp.rho = radar_threshold(chan, zeta);
    }

    CMat surrogate_quadratic(const FpState &fp, const CMat &W)
    {
        CMat out(W.rows(), W.cols());
        const CMat base = fp.D2 - fp.D1;
        for (int j = 0; j < W.cols(); ++j)
            out.col(j) = (base - fp.D2_skip[static_cast<std::size_t>(j)]) * W.col(j);
        return out;
    }

    CMat surrogate_gradient(const FpState &fp, const CMat &W)
    {
        return fp.C1 - fp.C2 + surrogate_quadratic(fp, W);
    }

    double surrogate_value(const FpState &fp, const CMat &W)
    {
        return 2.0 * real_inner(W, fp.C1 - fp.C2) + real_inner(W, surrogate_quadratic(fp, W));
    }

    double fp_objective(const FpState &fp, const CMat &W)
    {
        const int K = static_cast<int>(fp.u.size());
        double total = 0.0;
        for (int k = 0; k < K; ++k)
        {
            const CVec g = row_gains(fp.HS.row(k).transpose(), W);
            const cplx a = g(k);
            const double b = leakage(g, -1) + fp.user_noise(k);
            const double uk = fp.u(k);
            const double user = std::log2(1.0 + uk) - uk
                                + (1.0 + uk) * (2.0 * std::real(fp.delta(k) * a) - std::norm(fp.delta(k)) * b);

            const auto &eve = fp.eves[static_cast<std::size_t>(k)];
            const CVec ge = row_gains(eve.row, W);
            const cplx c = ge(k);
            const double e = leakage(ge, eve.user) + eve.noise;
            const double vk = fp.v(k);
            const double wire = std::log2(1.0 + vk) - vk
                                + (1.0 + vk) * (2.0 * std::real(fp.beta(k) * c) - std::norm(fp.beta(k)) * e);
            total += user - wire;
        }
        return total;
    }

    double unclamped_secrecy(const ChannelSet &chan, const PortSelection &sel, const CMat &W)
    {
        const auto rep = secrecy_report(chan, sel, Precoder{W, W.squaredNorm()});
        return (rep.user_rate - rep.eve_rate).sum();
    }

    SubproblemResult solve_precoder_subproblem(const CMat &M, const CMat &B, double P, double rho,
                                               double bisection_tol)
    {
        if (!(P > 0.0))
            throw std::invalid_argument("power budget must be positive");
        if (M.rows() != B.rows() || M.cols() != B.cols())
            throw std::invalid_argument("objective and constraint matrices differ in shape");

        const double sqrtP = std::sqrt(P);
        const double normM = M.norm();
        const double normB = B.norm();

        SubproblemResult res;
        auto W_of = [&](double mu) -> CMat {
            const CMat X = M + mu * B;
            const double nx = X.norm();
            if (!(nx > 0.0))
                return CMat::Zero(M.rows(), M.cols());
            return (sqrtP / nx) * X;
        };
        auto lhs = [&](const CMat &W) { return 2.0 * real_inner(W, B); };

        if (rho <= 0.0)
        {
            res.W = W_of(0.0);
            return res;
        }

        if (!(normB > 0.0) || 2.0 * sqrtP * normB < rho)
        {
            res.feasible = false;
            res.W = normB > 0.0 ? CMat((sqrtP / normB) * B) : CMat::Zero(M.rows(), M.cols());
            return res;
        }

        const CMat W_radar = (sqrtP / normB) * B;
        if (normM > 0.0)
        {
            res.W = W_of(0.0);
            if (lhs(res.W) >= rho)
                return res;

            // M and B collinear over the reals: W(mu) only takes the directions of +-B.
            if (std::abs(real_inner(M, B)) >= (1.0 - 1e-12) * normM * normB)
            {
                res.W = W_radar;
                res.constraint_active = true;
                res.mu = std::numeric_limits<double>::infinity();
                return res;
            }
        }

        res.constraint_active = true;
        double lo = 0.0;
        double hi = 1.0;
        int doublings = 0;
        while (lhs(W_of(hi)) < rho)
        {
            if (++doublings > 60)
            {
                // Only the limit direction can meet the constraint.
                res.W = W_radar;
                res.mu = std::numeric_limits<double>::infinity();
                res.feasible = lhs(W_radar) >= rho * (1.0 - 1e-12);
                return res;
            }
            lo = hi;
            hi *= 2.0;
        }
        for (int it = 0; it < 400 && hi - lo > bisection_tol * std::max(1.0, hi); ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (lhs(W_of(mid)) >= rho)
                hi = mid;
            else
                lo = mid;
        }
        res.W = W_of(hi);
        res.mu = hi;
        return res;
    }

    SubproblemResult solve_quadratic_subproblem(const CMat &D, const CMat &M, const CMat &B, double P, double rho,
                                                double bisection_tol)
    {
        if (!(P > 0.0))
            throw std::invalid_argument("power budget must be positive");
        if (M.rows() != B.rows() || M.cols() != B.cols() || D.rows() != M.rows() || D.cols() != M.rows())
            throw std::invalid_argument("subproblem matrices differ in shape");

        const double sqrtP = std::sqrt(P);
        Eigen::SelfAdjointEigenSolver<CMat> es(D);
        if (es.info() != Eigen::Success)
            throw NumericalError("eigendecomposition of the quadratic term failed");
        const RVec s = es.eigenvalues().cwiseMax(0.0);
        const CMat &U = es.eigenvectors();
        const double zero = 1e-12 * std::max(s.size() > 0 ? s.maxCoeff() : 0.0, 1e-300);
        const CMat UM = U.adjoint() * M;
        const CMat UB = U.adjoint() * B;

        // Power-complementary maximizer of the Lagrangian for a fixed radar multiplier.
        auto W_of = [&](double mu) -> CMat {
            const CMat X = UM + mu * UB;
            const RVec rows = X.rowwise().squaredNorm();
            const double total = rows.sum();
            if (!(total > 0.0))
                return CMat::Zero(M.rows(), M.cols());
            auto power = [&](double lam) {
                double p = 0.0;
                for (int i = 0; i < rows.size(); ++i)
                {
                    const double d = (s(i) > zero ? s(i) : 0.0) + lam;
                    if (d > 0.0)
                        p += rows(i) / (d * d);
                    else if (rows(i) > 1e-24 * total)
                        return std::numeric_limits<double>::infinity();
                }
                return p;
            };
            double lam = 0.0;
            if (power(0.0) > P)
            {
                double lo = 0.0;
                double hi = std::sqrt(total / P);  // power(hi) <= total / hi^2 = P
                for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it)
                {
                    const double mid = 0.5 * (lo + hi);
                    if (power(mid) > P)
                        lo = mid;
                    else
                        hi = mid;
                }
                lam = hi;
            }
            CMat Y(X.rows(), X.cols());
            for (int i = 0; i < X.rows(); ++i)
            {
                const double d = (s(i) > zero ? s(i) : 0.0) + lam;
                Y.row(i) = d > 0.0 ? CMat(X.row(i) / d) : CMat::Zero(1, X.cols());
            }
            return U * Y;
        };
        auto lhs = [&](const CMat &W) { return 2.0 * real_inner(W, B); };

        SubproblemResult res;
        res.W = W_of(0.0);
        if (rho <= 0.0)
            return res;

        const double normB = B.norm();
        if (!(normB > 0.0) || 2.0 * sqrtP * normB < rho)
        {
            res.feasible = false;
            res.W = normB > 0.0 ? CMat((sqrtP / normB) * B) : CMat::Zero(M.rows(), M.cols());
            return res;
        }
        if (lhs(res.W) >= rho)
            return res;

        res.constraint_active = true;
        double lo = 0.0;
        double hi = 1.0;
        int doublings = 0;
        while (lhs(W_of(hi)) < rho)
        {
            if (++doublings > 60)
            {
                res.W = (sqrtP / normB) * B;
                res.mu = std::numeric_limits<double>::infinity();
                res.feasible = lhs(res.W) >= rho * (1.0 - 1e-12);
                return res;
            }
            lo = hi;
            hi *= 2.0;
        }
        for (int it = 0; it < 400 && hi - lo > bisection_tol * std::max(1.0, hi); ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (lhs(W_of(mid)) >= rho)
                hi = mid;
            else
                lo = mid;
        }
        res.W = W_of(hi);
        res.mu = hi;
        return res;
    }

    ScaResult sca_precoder(const FpState &fp, const CMat &W0, const SolverOptions &opts)
    {
        const double P = opts.power;
        ScaResult res;
        res.W = W0;
        if (res.W.squaredNorm() > P * (1.0 + 1e-9))
            res.W *= std::sqrt(P / res.W.squaredNorm());

        const bool radar_on = fp.rho > 0.0;
        const CMat lin_base = fp.C1 - fp.C2;
        double value = surrogate_value(fp, res.W);
        res.surrogate_trace.push_back(value);

        for (int it = 0; it < opts.max_sca_iters; ++it)
        {
            // Tangent of the convex eavesdropper quadratic at W(t).
            CMat M = lin_base;
            for (int j = 0; j < M.cols(); ++j)
                M.col(j) += (fp.D2 - fp.D2_skip[static_cast<std::size_t>(j)]) * res.W.col(j);

            CMat B;
            double rho = 0.0;
            if (radar_on)
            {
                B = fp.D3 * res.W;
                // Tangent of Tr(W^H D3 W) at W(t), constant kept.
                rho = fp.rho + real_inner(res.W, B);
            }
            else
            {
                B = CMat::Zero(M.rows(), M.cols());
            }

            const auto sub = solve_quadratic_subproblem(fp.D1, M, B, P, rho, opts.bisection_tol);
            if (!sub.feasible)
            {
                res.feasible = false;
                break;
            }
            const double next = surrogate_value(fp, sub.W);
            if (next < value)
                break;  // no progress beyond roundoff
            const double step = (sub.W - res.W).squaredNorm() / P;
            res.W = sub.W;
            value = next;
            res.surrogate_trace.push_back(value);
            ++res.iterations;
            if (step < opts.sca_tol)
                break;
        }
        return res;
    }

    double port_utility(const FpState &fp, const ChannelSet &chan, const CMat &W_full, const RVec &r)
    {
        const int N = chan.num_ports();
        const int K = chan.num_users();
        if (W_full.rows() != N || W_full.cols() != K || r.size() != N)
            throw std::invalid_argument("port_utility: dimension mismatch");

        // Phi for one (channel row, stream, weights) triple, summed over n with r_n.
        auto phi_sum = [&](const CVec &row, int stream, int skip, cplx coef, double quad) {
            CMat Wm = W_full;
            if (skip >= 0)
                Wm.col(skip).setZero();
            const CMat omega = Wm * Wm.adjoint();
            double total = 0.0;
            for (int n = 0; n < N; ++n)
            {
                if (r(n) == 0.0)
                    continue;
                double term = 2.0 * std::real(coef * row(n) * W_full(n, stream));
                cplx cross{0.0, 0.0};
                for (int m = 0; m < N; ++m)
                    if (m != n)
                        cross += r(m) * omega(n, m) * std::conj(row(m));
                term -= quad * std::real(row(n) * cross);
                term -= quad * std::real(omega(n, n)) * std::norm(row(n));
                total += r(n) * term;
            }
            return total;
        };

        double U = 0.0;
        for (int k = 0; k < K; ++k)
        {
            const CVec h_row = chan.H.row(k).transpose();
            U += phi_sum(h_row, k, -1, (1.0 + fp.u(k)) * fp.delta(k), (1.0 + fp.u(k)) * std::norm(fp.delta(k)));
            const auto &eve = fp.eves[static_cast<std::size_t>(k)];
            U -= phi_sum(eve.row_full, k, eve.user, (1.0 + fp.v(k)) * fp.beta(k),
                         (1.0 + fp.v(k)) * std::norm(fp.beta(k)));
        }
        return U;
    }

    RVec gamma_scores(const FpState &fp, const ChannelSet &chan)
    {
        const int N = chan.num_ports();
        const int K = chan.num_users();
        RVec score = RVec::Zero(N);
        for (int k = 0; k < K; ++k)
        {
            const double gain = (1.0 + fp.u(k)) * std::abs(fp.delta(k));
            const double leak = (1.0 + fp.v(k)) * std::abs(fp.beta(k));
            const auto &g = fp.eves[static_cast<std::size_t>(k)].row_full;
            for (int n = 0; n < N; ++n)
                score(n) += std::abs(chan.H(k, n)) * gain - leak * std::abs(g(n));
        }
        return score;
    }

    PortSelection top_ports(const RVec &scores, int n)
    {
        const int N = static_cast<int>(scores.size());
        if (n < 1 || n > N)
            throw std::invalid_argument("top_ports: n out of range");
        std::vector<int> order(static_cast<std::size_t>(N));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores(a) > scores(b); });
        order.resize(static_cast<std::size_t>(n));
        return PortSelection::from(std::move(order), N);
    }
}
