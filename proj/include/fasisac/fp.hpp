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

#include "fasisac/metrics.hpp"

namespace fasisac
{
    /// Worst eavesdropper of one user's stream under the current precoder.
    struct WorstEavesdropper
    {
        int user = -1;        // -1: the sensing target; otherwise the eavesdropping user
        CVec row_full;        // g^H over all ports (a_t^H for the target, h_i^H for user i)
        CVec row;             // same, restricted to the active ports
        double noise = 1.0;   // sigma_e^2 that goes with the channel
        double sinr = 0.0;    // theta_k

        bool is_target() const { return user < 0; }
    };

    // Target first, then users in index order; strict improvement required, so ties go
    // to the target and then to the lowest user index.
    WorstEavesdropper worst_case_eavesdropper(const ChannelSet &chan, const PortSelection &sel,
                                              const CMat &W, int k);

    /// Quadratic-transform auxiliaries and the per-iteration surrogate.
    ///
    /// The surrogate in W is
    ///   2 Re Tr(W^H (C1 - C2)) - Tr(W^H D1 W) + sum_j w_j^H (D2 - D2_skip[j]) w_j
    /// where D2_skip[j] removes an internal eavesdropper's own stream j from its
    /// leakage term, matching the user-eavesdropper SINR definition.
    struct FpState
    {
        RVec u, v;
        CVec delta, beta;
        std::vector<WorstEavesdropper> eves;

        CMat C1, C2;                 // n_s x K
        CMat D1, D2, D3;             // n_s x n_s, Hermitian PSD
        std::vector<CMat> D2_skip;   // per stream, n_s x n_s
        double rho = 0.0;            // ||a_t^H Pi W||^2 threshold for the radar constraint

        CMat HS;                     // K x n_s active-port user rows, h_k^H Pi
        RVec user_noise;             // sigma_k^2 carried for the objective constants
    };

    struct SolverOptions
    {
        double power = 1.0;          // P
        int num_active = 6;          // n_s
        double zeta = 1.0;           // radar SINR threshold
        double r_th = 0.0;           // secrecy floor, radar-centric mode
        int max_outer_iters = 30;
        int max_sca_iters = 60;
        double tol = 1e-3;           // on ||W(t+1) - W(t)||_F^2 / P
        double sca_tol = 1e-8;       // inner stopping rule, same normalization
        double bisection_tol = 1e-10;
        bool reselect_each_iter = true;  // false: select once, then freeze
        bool random_init = false;
        bool keep_trace = false;

        void validate() const;
    };

    // Sets u, v, delta, beta and the worst eavesdroppers from the precoder W on sel.
    FpState update_auxiliaries(const ChannelSet &chan, const PortSelection &sel, const CMat &W);

    // Builds C1, C2, D1, D2, D2_skip, D3 and rho from the auxiliaries in fp.
    void assemble_surrogate(FpState &fp, const ChannelSet &chan, const PortSelection &sel, double zeta);

    // Full FP objective (user terms minus eavesdropper terms, log2 constants included).
    double fp_objective(const FpState &fp, const CMat &W);

    // W-dependent part of the FP objective (noise constants dropped).
    double surrogate_value(const FpState &fp, const CMat &W);

    // Wirtinger half-gradient of surrogate_value: C1 - C2 + Q(W).
    CMat surrogate_gradient(const FpState &fp, const CMat &W);

    // Applies the quadratic part: column j is (D2 - D2_skip[j] - D1) w_j.
    CMat surrogate_quadratic(const FpState &fp, const CMat &W);

    // Sum of log2((1 + gamma_k) / (1 + theta_k)) without clamping.
    double unclamped_secrecy(const ChannelSet &chan, const PortSelection &sel, const CMat &W);

    struct SubproblemResult
    {
        CMat W;
        double mu = 0.0;
        bool feasible = true;
        bool constraint_active = false;
    };

    /// maximize 2 Re Tr(W^H M)  s.t.  ||W||_F <= sqrt(P),  2 Re Tr(W^H B) >= rho.
    ///
    /// Solved on the dual: W(mu) = sqrt(P) (M + mu B) / ||M + mu B||_F with the smallest
    /// mu >= 0 meeting the linear constraint. rho <= 0 means the constraint is inactive.
    SubproblemResult solve_precoder_subproblem(const CMat &M, const CMat &B, double P, double rho,
                                               double bisection_tol = 1e-10);

    /// maximize 2 Re Tr(W^H M) - Tr(W^H D W)  s.t.  ||W||_F <= sqrt(P),  2 Re Tr(W^H B) >= rho,
    /// with D Hermitian PSD.
    ///
    /// W(lambda, mu) = (D + lambda I)^-1 (M + mu B): lambda from power complementarity for
    /// each mu, then the smallest mu >= 0 meeting the linear constraint by bisection.
    /// With D = 0 this is solve_precoder_subproblem.
    SubproblemResult solve_quadratic_subproblem(const CMat &D, const CMat &M, const CMat &B, double P, double rho,
                                                double bisection_tol = 1e-10);

    struct ScaResult
    {
        CMat W;
        int iterations = 0;
        bool feasible = true;
        std::vector<double> surrogate_trace;  // surrogate_value at each accepted iterate, start included
    };

    /// Successive convex approximation of the precoder step with auxiliaries held fixed.
    ///
    /// Each iteration keeps the concave -Tr(W^H D1 W) term, linearizes the convex
    /// eavesdropper quadratic and the radar constraint at W(t), and solves the resulting
    /// convex problem with solve_quadratic_subproblem. The linearized terms are minorants
    /// and the radar tangent keeps its constant, so iterates stay radar-feasible and the
    /// surrogate is non-decreasing.
    ScaResult sca_precoder(const FpState &fp, const CMat &W0, const SolverOptions &opts);

    // Port utility for a binary indicator r over all ports; W_full is the Ns x K
    // precoder with zero rows on inactive ports.
    double port_utility(const FpState &fp, const ChannelSet &chan, const CMat &W_full, const RVec &r);

    // Per-port score: sum_k |h_k(n)| (1 + u_k) |delta_k| - (1 + v_k) |beta_k| |g_k(n)|.
    RVec gamma_scores(const FpState &fp, const ChannelSet &chan);

    // Indices of the n largest scores, ascending; ties go to the lower index.
    PortSelection top_ports(const RVec &scores, int n);
}
