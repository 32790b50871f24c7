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

#include "doctest.h"

#include <cmath>

#include "support.hpp"

using namespace fasisac;
using namespace fasisac::testing;

namespace
{
    // h^H Pi w computed one port at a time.
    cplx scalar_gain(const CMat &H, int row, const PortSelection &sel, const CMat &W, int col)
    {
        cplx s = 0.0;
        for (int r = 0; r < sel.size(); ++r)
            s += H(row, sel.indices[r]) * W(r, col);
        return s;
    }

    cplx scalar_target_gain(const CVec &a, const PortSelection &sel, const CMat &W, int col)
    {
        cplx s = 0.0;
        for (int r = 0; r < sel.size(); ++r)
            s += std::conj(a(sel.indices[r])) * W(r, col);
        return s;
    }
}

TEST_CASE("port selection helpers")
{
    CHECK(PortSelection::from({5, 1, 3}, 8).indices == std::vector<int>{1, 3, 5});
    CHECK_THROWS_AS(PortSelection::from({1, 1}, 8), std::invalid_argument);
    CHECK_THROWS_AS(PortSelection::from({9}, 8), std::invalid_argument);
    CHECK_THROWS_AS(PortSelection::from({}, 8), std::invalid_argument);

    Rng rng(1);
    const CMat W = random_matrix(3, 2, rng);
    const auto sel = PortSelection::from({0, 4, 6}, 8);
    const CMat E = embed_rows(W, sel, 8);
    CHECK(E.rows() == 8);
    CHECK((E.row(4) - W.row(1)).norm() == 0.0);
    CHECK(E.row(1).norm() == 0.0);
    const CMat M = random_matrix(2, 8, rng);
    CHECK((select_columns(M, sel).col(2) - M.col(6)).norm() == 0.0);
}

TEST_CASE("communication SINR")
{
    Rng rng(2);
    SUBCASE("single user has no interference")
    {
        const CMat H = random_matrix(1, 6, rng);
        const auto sel = PortSelection::all(6);
        const Precoder p{random_precoder(6, 1, 1.0, rng), 1.0};
        const double want = std::norm((H * p.W)(0, 0)) / 0.3;
        CHECK(comm_sinr(H, sel, p, 0, 0.3) == doctest::Approx(want).epsilon(1e-13));
    }
    SUBCASE("orthogonal precoder gives zero")
    {
        CMat H = CMat::Zero(1, 2);
        H(0, 0) = 1.0;
        CMat W = CMat::Zero(2, 1);
        W(1, 0) = 1.0;
        CHECK(comm_sinr(H, PortSelection::all(2), Precoder{W, 1.0}, 0, 1.0) == 0.0);
    }
    SUBCASE("four users against a scalar loop")
    {
        const CMat H = random_matrix(4, 10, rng);
        const auto sel = PortSelection::from({0, 2, 3, 5, 7, 9}, 10);
        const Precoder p{random_precoder(6, 4, 1.0, rng), 1.0};
        for (int k = 0; k < 4; ++k)
        {
            double interference = 0.0;
            for (int i = 0; i < 4; ++i)
                if (i != k)
                    interference += std::norm(scalar_gain(H, k, sel, p.W, i));
            const double want = std::norm(scalar_gain(H, k, sel, p.W, k)) / (interference + 0.05);
            CHECK(rel_err(comm_sinr(H, sel, p, k, 0.05), want) <= 1e-12);
        }
    }
}

TEST_CASE("MVDR filter")
{
    Rng rng(3);
    const CVec a = random_matrix(5, 1, rng).col(0);
    SUBCASE("white noise reduces to a scaled steering vector")
    {
        const CVec ar = CVec::Ones(6);
        const CVec w = mvdr_filter(CMat::Zero(6, 6), 1.0, ar);
        CHECK((w - ar / 6.0).norm() < 1e-15);
    }
    SUBCASE("distortionless for any covariance")
    {
        const CMat X = random_matrix(5, 5, rng);
        const CVec w = mvdr_filter(X * X.adjoint(), 0.2, a);
        CHECK(std::abs(a.dot(w) - cplx(1.0, 0.0)) < 1e-12);
    }
    SUBCASE("diagonal covariance closed form")
    {
        CMat Rc = CMat::Zero(5, 5);
        const double d[] = {0.1, 0.5, 1.0, 2.0, 4.0};
        for (int i = 0; i < 5; ++i)
            Rc(i, i) = d[i];
        const double sb = 0.3;
        double denom = 0.0;
        for (int i = 0; i < 5; ++i)
            denom += std::norm(a(i)) / (d[i] + sb);
        const CVec w = mvdr_filter(Rc, sb, a);
        for (int i = 0; i < 5; ++i)
        {
            const cplx want = a(i) / (d[i] + sb) / denom;
            CHECK(std::abs(w(i) - want) <= 1e-10 * std::abs(want));
        }
    }
}

TEST_CASE("radar SINR")
{
    Rng rng(4);
    ChannelSet c = synthetic_channel(3, 8, rng);
    c.alpha = std::polar(0.3, 1.0);
    c.a_r = random_matrix(4, 1, rng).col(0);
    c.G = c.alpha * c.a_r * c.a_t.adjoint();
    const CMat X = random_matrix(4, 4, rng);
    c.Rc = X * X.adjoint();
    const auto sel = PortSelection::from({1, 2, 4, 5, 7}, 8);
    const CVec wr = mvdr_filter(c.Rc, c.sigma_b2, c.a_r);

    CHECK(radar_sinr(c, sel, Precoder{CMat::Zero(5, 3), 1.0}, wr) == 0.0);

    const CMat W = random_precoder(5, 3, 1.0, rng);
    const double g = radar_sinr(c, sel, Precoder{W, 1.0}, wr);
    const CMat R = c.Rc + c.sigma_b2 * CMat::Identity(4, 4);
    const double noise = std::real(wr.dot(R * wr));
    const CVec as = select_entries(c.a_t, sel);
    const double rank_one = std::norm(c.alpha) * std::norm(wr.dot(c.a_r)) * (as.adjoint() * W).squaredNorm() / noise;
    CHECK(rel_err(g, rank_one) <= 1e-10);
    CHECK(rel_err(radar_sinr(c, sel, Precoder{std::sqrt(2.0) * W, 2.0}, wr), 2.0 * g) <= 1e-12);

    SUBCASE("threshold inverts the SINR at the MVDR filter")
    {
        const double beam = (as.adjoint() * W).squaredNorm();
        CHECK(rel_err(radar_threshold(c, g), beam) <= 1e-10);
        CHECK(radar_threshold(c, 0.0) == 0.0);
    }
}

TEST_CASE("eavesdropper SINRs")
{
    Rng rng(5);
    SUBCASE("target with one user")
    {
        ChannelSet c = synthetic_channel(1, 4, rng, 0.2);
        const auto sel = PortSelection::all(4);
        const CMat W = random_precoder(4, 1, 1.0, rng);
        const double want = std::norm((c.a_t.adjoint() * W)(0, 0)) / 0.2;
        CHECK(rel_err(eve_sinr_target(c, sel, Precoder{W, 1.0}, 0), want) <= 1e-13);
    }
    SUBCASE("target orthogonal stream")
    {
        ChannelSet c = synthetic_channel(2, 4, rng);
        const auto sel = PortSelection::all(4);
        CMat W = random_precoder(4, 2, 1.0, rng);
        const CVec a = c.a_t / c.a_t.norm();
        W.col(0) -= a * a.dot(W.col(0));
        CHECK(eve_sinr_target(c, sel, Precoder{W, 1.0}, 0) < 1e-28);
    }
    SUBCASE("target and users against scalar loops")
    {
        ChannelSet c = synthetic_channel(4, 9, rng, 0.07);
        const auto sel = PortSelection::from({0, 1, 3, 4, 6, 8}, 9);
        const Precoder p{random_precoder(6, 4, 1.0, rng), 1.0};
        for (int k = 0; k < 4; ++k)
        {
            double leak = 0.0;
            for (int i = 0; i < 4; ++i)
                if (i != k)
                    leak += std::norm(scalar_target_gain(c.a_t, sel, p.W, i));
            const double want = std::norm(scalar_target_gain(c.a_t, sel, p.W, k)) / (leak + 0.07);
            CHECK(rel_err(eve_sinr_target(c, sel, p, k), want) <= 1e-12);

            for (int i = 0; i < 4; ++i)
            {
                if (i == k)
                    continue;
                double inter = 0.0;
                for (int j = 0; j < 4; ++j)
                    if (j != k && j != i)
                        inter += std::norm(scalar_gain(c.H, i, sel, p.W, j));
                const double w2 = std::norm(scalar_gain(c.H, i, sel, p.W, k)) / (inter + 0.07);
                CHECK(rel_err(eve_sinr_user(c.H, sel, p, k, i, 0.07), w2) <= 1e-12);
            }
        }
        CHECK_THROWS_AS(eve_sinr_user(c.H, sel, p, 1, 1, 0.1), std::invalid_argument);
    }
    SUBCASE("two users leave no interference for the eavesdropper")
    {
        ChannelSet c = synthetic_channel(2, 5, rng);
        const auto sel = PortSelection::all(5);
        const Precoder p{random_precoder(5, 2, 1.0, rng), 1.0};
        const double want = std::norm((c.H.row(1) * p.W.col(0))(0, 0)) / 0.4;
        CHECK(rel_err(eve_sinr_user(c.H, sel, p, 0, 1, 0.4), want) <= 1e-13);
    }
    SUBCASE("zero-forcing nulls the other users")
    {
        ChannelSet c = synthetic_channel(3, 5, rng);
        const CMat W = c.H.adjoint() * (c.H * c.H.adjoint()).inverse();
        const Precoder p{W / W.norm(), 1.0};
        CHECK(eve_sinr_user(c.H, PortSelection::all(5), p, 0, 2, 0.1) < 1e-24);
    }
}

TEST_CASE("secrecy report")
{
    Rng rng(6);
    SUBCASE("matches a recomposition from the individual SINRs")
    {
        ChannelSet c = synthetic_channel(4, 8, rng, 0.05);
        const auto sel = PortSelection::from({0, 1, 2, 5, 6, 7}, 8);
        const Precoder p{random_precoder(6, 4, 1.0, rng), 1.0};
        const auto rep = secrecy_report(c, sel, p);
        double total = 0.0;
        for (int k = 0; k < 4; ++k)
        {
            const double gk = comm_sinr(c.H, sel, p, k, 0.05);
            double worst = eve_sinr_target(c, sel, p, k);
            int who = -1;
            for (int i = 0; i < 4; ++i)
                if (i != k && eve_sinr_user(c.H, sel, p, k, i, 0.05) > worst)
                {
                    worst = eve_sinr_user(c.H, sel, p, k, i, 0.05);
                    who = i;
                }
            const double s = std::max(0.0, std::log2(1.0 + gk) - std::log2(1.0 + worst));
            CHECK(rel_err(rep.user_sinr(k), gk) <= 1e-12);
            CHECK(rel_err(rep.eve_sinr(k), worst) <= 1e-12);
            CHECK(rep.worst_eve[k] == who);
            CHECK(std::abs(rep.secrecy(k) - s) <= 1e-12);
            total += s;
        }
        CHECK(std::abs(rep.sum_secrecy - total) <= 1e-12);
        const double radar = radar_sinr(c, sel, p, mvdr_filter(c.Rc, c.sigma_b2, c.a_r));
        CHECK(rel_err(rep.radar_sinr, radar) <= 1e-12);
    }
    SUBCASE("stronger eavesdroppers clamp to zero")
    {
        ChannelSet c = synthetic_channel(2, 3, rng);
        c.H.row(1) = c.H.row(0) * 3.0;
        CMat W = CMat::Zero(3, 2);
        W.col(0) = c.H.row(0).adjoint() / c.H.row(0).norm() * std::sqrt(0.5);
        const auto rep = secrecy_report(c, PortSelection::all(3), Precoder{W, 1.0});
        CHECK(rep.secrecy(0) == 0.0);
        CHECK(rep.worst_eve[0] == 1);
    }
    SUBCASE("a silent target leaves the legitimate rate")
    {
        ChannelSet c = synthetic_channel(1, 4, rng);
        c.sigma_r2 = 1e300;
        const Precoder p{random_precoder(4, 1, 1.0, rng), 1.0};
        const auto rep = secrecy_report(c, PortSelection::all(4), p);
        CHECK(rep.worst_eve[0] == -1);
        CHECK(rep.sum_secrecy == doctest::Approx(rep.user_rate(0)).epsilon(1e-12));
    }
}
