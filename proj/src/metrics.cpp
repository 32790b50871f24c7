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

#include "fasisac/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fasisac
{
    void PortSelection::validate(int num_ports) const
    {
        if (indices.empty())
            throw std::invalid_argument("port selection is empty");
        if (size() > num_ports)
            throw std::invalid_argument("more active ports than available ports");
        for (std::size_t i = 0; i < indices.size(); ++i)
        {
            if (indices[i] < 0 || indices[i] >= num_ports)
                throw std::invalid_argument("port index out of range");
            if (i > 0 && indices[i] <= indices[i - 1])
                throw std::invalid_argument("port indices must be distinct and ascending");
        }
    }

    PortSelection PortSelection::all(int num_ports)
    {
        PortSelection s;
        s.indices.resize(static_cast<std::size_t>(num_ports));
        std::iota(s.indices.begin(), s.indices.end(), 0);
        return s;
    }

    PortSelection PortSelection::from(std::vector<int> indices, int num_ports)
    {
        std::sort(indices.begin(), indices.end());
        PortSelection s{std::move(indices)};
        s.validate(num_ports);
        return s;
    }

    CMat select_columns(const CMat &M, const PortSelection &sel)
    {
        CMat out(M.rows(), sel.size());
        for (int c = 0; c < sel.size(); ++c)
            out.col(c) = M.col(sel.indices[static_cast<std::size_t>(c)]);
        return out;
    }

    CVec select_entries(const CVec &v, const PortSelection &sel)
    {
        CVec out(sel.size());
        for (int c = 0; c < sel.size(); ++c)
            out(c) = v(sel.indices[static_cast<std::size_t>(c)]);
        return out;
    }

    CMat embed_rows(const CMat &W, const PortSelection &sel, int num_ports)
    {
        CMat out = CMat::Zero(num_ports, W.cols());
        for (int r = 0; r < sel.size(); ++r)
            out.row(sel.indices[static_cast<std::size_t>(r)]) = W.row(r);
        return out;
    }

    namespace
    {
        void check_dims(const CMat &H, const PortSelection &sel, const Precoder &prec)
        {
            if (prec.W.rows() != sel.size())
                throw std::invalid_argument("precoder rows must match the number of active ports");
            if (sel.size() > H.cols())
                throw std::invalid_argument("selection larger than the port count");
        }

        // gains(j) = row_S . w_j for every stream j
        CVec stream_gains(const CMat &H, int row, const PortSelection &sel, const CMat &W)
        {
            CVec out = CVec::Zero(W.cols());
            for (int j = 0; j < W.cols(); ++j)
                for (int r = 0; r < sel.size(); ++r)
                    out(j) += H(row, sel.indices[static_cast<std::size_t>(r)]) * W(r, j);
            return out;
        }

        CVec stream_gains(const CVec &a, const PortSelection &sel, const CMat &W)
        {
            // a^H Pi w_j
            CVec out = CVec::Zero(W.cols());
            for (int j = 0; j < W.cols(); ++j)
                for (int r = 0; r < sel.size(); ++r)
                    out(j) += std::conj(a(sel.indices[static_cast<std::size_t>(r)])) * W(r, j);
            return out;
        }

        double sinr_from_gains(const CVec &g, int wanted, int excluded, double noise)
        {
            double interference = 0.0;
            for (int j = 0; j < g.size(); ++j)
                if (j != wanted && j != excluded)
                    interference += std::norm(g(j));
            return std::norm(g(wanted)) / (interference + noise);
        }
    }

    double comm_sinr(const CMat &H, const PortSelection &sel, const Precoder &prec, int k, double sigma_k2)
    {
        check_dims(H, sel, prec);
        if (k < 0 || k >= H.rows() || k >= prec.W.cols())
            throw std::invalid_argument("user index out of range");
        return sinr_from_gains(stream_gains(H, k, sel, prec.W), k, -1, sigma_k2);
    }

    CVec mvdr_filter(const CMat &Rc, double sigma_b2, const CVec &a_r)
    {
        const Eigen::Index nr = a_r.size();
        if (Rc.rows() != nr || Rc.cols() != nr)
            throw std::invalid_argument("Rc must be nr x nr");
        const CMat R = Rc + sigma_b2 * CMat::Identity(nr, nr);
        Eigen::LDLT<CMat> ldlt(R);
        if (ldlt.info() != Eigen::Success || ldlt.isNegative())
            throw NumericalError("interference-plus-noise covariance is not invertible");
        const CVec x = ldlt.solve(a_r);
        const cplx denom = a_r.dot(x);  // a_r^H R^-1 a_r
        if (!(std::abs(denom) > 0.0) || !std::isfinite(std::abs(denom)))
            throw NumericalError("interference-plus-noise covariance is not invertible");
        return x / denom;
    }

    double radar_sinr(const ChannelSet &chan, const PortSelection &sel, const Precoder &prec, const CVec &w_r)
    {
        check_dims(chan.H, sel, prec);
        if (w_r.size() != chan.G.rows())
            throw std::invalid_argument("receive filter length must match nr");
        const CMat GS = select_columns(chan.G, sel);
        const CVec y = (w_r.adjoint() * GS * prec.W).transpose();  // w_r^H G Pi w_j for every j
        const int nr = static_cast<int>(chan.a_r.size());
        const CMat R = chan.Rc + chan.sigma_b2 * CMat::Identity(nr, nr);
        const double noise = std::real(w_r.dot(R * w_r));
        return y.squaredNorm() / noise;
    }

    double eve_sinr_target(const ChannelSet &chan, const PortSelection &sel, const Precoder &prec, int k)
    {
        check_dims(chan.H, sel, prec);
        if (k < 0 || k >= prec.W.cols())
            throw std::invalid_argument("user index out of range");
        return sinr_from_gains(stream_gains(chan.a_t, sel, prec.W), k, -1, chan.sigma_r2);
    }

    double eve_sinr_user(const CMat &H, const PortSelection &sel, const Precoder &prec, int k, int i, double sigma_i2)
    {
        check_dims(H, sel, prec);
        if (i == k)
            throw std::invalid_argument("a user cannot eavesdrop on its own stream");
        if (k < 0 || k >= prec.W.cols() || i < 0 || i >= H.rows())
            throw std::invalid_argument("user index out of range");
        return sinr_from_gains(stream_gains(H, i, sel, prec.W), k, i, sigma_i2);
    }

    double bits(double sinr)
    {
        return std::log2(1.0 + sinr);
    }

    MetricsReport secrecy_report(const ChannelSet &chan, const PortSelection &sel, const Precoder &prec)
    {
        check_dims(chan.H, sel, prec);
        const int K = chan.num_users();
        if (prec.W.cols() != K)
            throw std::invalid_argument("precoder must have one column per user");

        MetricsReport rep;
        rep.user_sinr.resize(K);
        rep.user_rate.resize(K);
        rep.eve_sinr.resize(K);
        rep.eve_rate.resize(K);
        rep.secrecy.resize(K);
        rep.worst_eve.assign(static_cast<std::size_t>(K), -1);

        for (int k = 0; k < K; ++k)
        {
            rep.user_sinr(k) = comm_sinr(chan.H, sel, prec, k, chan.user_noise(k));
            rep.user_rate(k) = bits(rep.user_sinr(k));

            double worst = eve_sinr_target(chan, sel, prec, k);
            int who = -1;
            for (int i = 0; i < K; ++i)
            {
                if (i == k)
                    continue;
                const double s = eve_sinr_user(chan.H, sel, prec, k, i, chan.eve_noise(i));
                if (s > worst)
                {
                    worst = s;
                    who = i;
                }
            }
            rep.eve_sinr(k) = worst;
            rep.eve_rate(k) = bits(worst);
            rep.worst_eve[static_cast<std::size_t>(k)] = who;
            rep.secrecy(k) = std::max(0.0, rep.user_rate(k) - rep.eve_rate(k));
        }
        rep.sum_secrecy = rep.secrecy.sum();
        rep.radar_sinr = radar_sinr(chan, sel, prec, mvdr_filter(chan.Rc, chan.sigma_b2, chan.a_r));
        return rep;
    }

    double radar_noise_power(const ChannelSet &chan)
    {
        const CVec w_r = mvdr_filter(chan.Rc, chan.sigma_b2, chan.a_r);
        const int nr = static_cast<int>(chan.a_r.size());
        const CMat R = chan.Rc + chan.sigma_b2 * CMat::Identity(nr, nr);
        return std::real(w_r.dot(R * w_r));
    }

    double radar_threshold(const ChannelSet &chan, double zeta)
    {
        if (zeta <= 0.0)
            return 0.0;
        return zeta * radar_noise_power(chan) / std::norm(chan.alpha);
    }
}
