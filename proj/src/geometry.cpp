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

#include "fasisac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fasisac
{
    std::pair<int, int> FasGeometry::port_coords(int index) const
    {
        return {index / ns_y, index % ns_y};
    }

    void FasGeometry::validate() const
    {
        if (ns_x < 1 || ns_y < 1)
            throw std::invalid_argument("port counts per axis must be positive");
        if (area_x < 0.0 || area_y < 0.0)
            throw std::invalid_argument("surface extents must be nonnegative");
        if (ns_x > 1 && !(area_x > 0.0))
            throw std::invalid_argument("area_x must be positive when ns_x > 1");
        if (ns_y > 1 && !(area_y > 0.0))
            throw std::invalid_argument("area_y must be positive when ns_y > 1");
        if (!(wavelength > 0.0))
            throw std::invalid_argument("wavelength must be positive");
        if (nr < 1)
            throw std::invalid_argument("receive antenna count must be positive");
        if (!(rx_spacing > 0.0))
            throw std::invalid_argument("receive spacing must be positive");
    }

    FasGeometry FasGeometry::square_grid(int num_ports, double area, double wavelength, int nr)
    {
        if (num_ports < 1)
            throw std::invalid_argument("num_ports must be positive");
        int nx = 1;
        for (int d = 1; d * d <= num_ports; ++d)
            if (num_ports % d == 0)
                nx = d;
        FasGeometry g;
        g.ns_x = nx;
        g.ns_y = num_ports / nx;
        g.area_x = area;
        g.area_y = area;
        g.wavelength = wavelength;
        g.nr = nr;
        return g;
    }

    namespace
    {
        double axis_coord(int n, int count, double area, double wavelength)
        {
            if (count <= 1)
                return 0.0;
            return static_cast<double>(n) / static_cast<double>(count - 1) * area * wavelength;
        }
    }

    std::vector<Point2> port_positions(const FasGeometry &geom)
    {
        geom.validate();
        std::vector<Point2> pts(static_cast<std::size_t>(geom.num_ports()));
        for (int i = 0; i < geom.num_ports(); ++i)
        {
            const auto [ix, iy] = geom.port_coords(i);
            pts[static_cast<std::size_t>(i)] = {axis_coord(ix, geom.ns_x, geom.area_x, geom.wavelength),
                                                axis_coord(iy, geom.ns_y, geom.area_y, geom.wavelength)};
        }
        return pts;
    }

    double port_distance(const FasGeometry &geom, int i, int j)
    {
        const auto [xi, yi] = geom.port_coords(i);
        const auto [xj, yj] = geom.port_coords(j);
        const double dx = geom.ns_x > 1 ? std::abs(xi - xj) / double(geom.ns_x - 1) * geom.area_x : 0.0;
        const double dy = geom.ns_y > 1 ? std::abs(yi - yj) / double(geom.ns_y - 1) * geom.area_y : 0.0;
        return geom.wavelength * std::hypot(dx, dy);
    }

    double spherical_j0(double x)
    {
        if (std::abs(x) < 1e-8)
            return 1.0 - x * x / 6.0;
        return std::sin(x) / x;
    }

    namespace
    {
        inline double jakes_entry(const FasGeometry &geom, int i, int j)
        {
            if (i == j)
                return 1.0;
            return spherical_j0(2.0 * std::numbers::pi * port_distance(geom, i, j) / geom.wavelength);
        }
    }

    RMat jakes_matrix(const FasGeometry &geom)
    {
        geom.validate();
        const int n = geom.num_ports();
        RMat J(n, n);
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                J(i, j) = jakes_entry(geom, i, j);
        return J;
    }

    namespace reference
    {
        RMat jakes_matrix(const FasGeometry &geom)
        {
            geom.validate();
            const int n = geom.num_ports();
            RMat J(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    J(i, j) = jakes_entry(geom, i, j);
            return J;
        }
    }

    SpatialCorrelation jakes_correlation(const FasGeometry &geom)
    {
        SpatialCorrelation out;
        out.matrix = jakes_matrix(geom);

        Eigen::SelfAdjointEigenSolver<RMat> es(out.matrix);
        if (es.info() != Eigen::Success)
            throw NumericalError("eigendecomposition of the spatial correlation did not converge");

        // Eigen returns ascending order.
        const int n = static_cast<int>(out.matrix.rows());
        out.eigvalues = es.eigenvalues().reverse();
        out.eigvectors = es.eigenvectors().rowwise().reverse();

        const double floor = 1e-12 * std::max(out.eigvalues(0), 0.0);
        for (int i = 0; i < n; ++i)
            if (out.eigvalues(i) < floor)
                out.eigvalues(i) = 0.0;
        return out;
    }

    double UserLink::pathloss() const
    {
        return std::pow(distance, -pathloss_exp);
    }

    CVec synthesize_user_channel(const SpatialCorrelation &corr, const UserLink &link, Rng &rng)
    {
        const Eigen::Index n = corr.eigvalues.size();
        CVec g(n);
        for (Eigen::Index i = 0; i < n; ++i)
            g(i) = complex_normal(rng);

        // (g^H Lambda^{1/2} Upsilon^T)^T = Upsilon Lambda^{1/2} conj(g)
        const RVec root = corr.eigvalues.cwiseSqrt();
        const CVec scaled = root.cast<cplx>().cwiseProduct(g.conjugate());
        return std::sqrt(link.pathloss()) * (corr.eigvectors.cast<cplx>() * scaled);
    }

    SteeringPair steering_vectors(const FasGeometry &geom, const TargetDirection &dir)
    {
        const auto pts = port_positions(geom);
        const double ux = std::sin(dir.theta) * std::cos(dir.phi);
        const double uy = std::sin(dir.theta) * std::sin(dir.phi);
        const double k = 2.0 * std::numbers::pi / geom.wavelength;

        SteeringPair out;
        out.a_t.resize(geom.num_ports());
        for (int n = 0; n < geom.num_ports(); ++n)
        {
            const auto &p = pts[static_cast<std::size_t>(n)];
            const double delta = (p.x - pts[0].x) * ux + (p.y - pts[0].y) * uy;
            out.a_t(n) = std::polar(1.0, k * delta);
        }
        out.a_r.resize(geom.nr);
        for (int n = 0; n < geom.nr; ++n)
        {
            const double delta = n * geom.rx_spacing * geom.wavelength * ux;
            out.a_r(n) = std::polar(1.0, k * delta);
        }
        return out;
    }

    CMat target_response(const CVec &a_r, const CVec &a_t, cplx alpha)
    {
        return alpha * a_r * a_t.adjoint();
    }

    ChannelSet draw_channel_set(const FasGeometry &geom, const SpatialCorrelation &corr,
                                const ChannelParams &params, Rng &rng)
    {
        if (params.users.empty())
            throw std::invalid_argument("at least one user is required");

        ChannelSet cs;
        const auto steer = steering_vectors(geom, params.direction);
        cs.a_t = steer.a_t;
        cs.a_r = steer.a_r;

        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        cs.alpha = std::polar(std::pow(params.target_distance, -params.pathloss_exp), phase(rng));
        cs.G = target_response(cs.a_r, cs.a_t, cs.alpha);

        const int K = static_cast<int>(params.users.size());
        cs.H.resize(K, geom.num_ports());
        cs.user_noise.resize(K);
        for (int k = 0; k < K; ++k)
        {
            cs.H.row(k) = synthesize_user_channel(corr, params.users[static_cast<std::size_t>(k)], rng).transpose();
            cs.user_noise(k) = params.users[static_cast<std::size_t>(k)].noise_var;
        }
        cs.eve_noise = cs.user_noise;

        if (params.Rc.size() > 0)
        {
            if (params.Rc.rows() != geom.nr || params.Rc.cols() != geom.nr)
                throw std::invalid_argument("Rc must be nr x nr");
            cs.Rc = params.Rc;
        }
        else
        {
            cs.Rc = params.sigma_c2 * CMat::Identity(geom.nr, geom.nr);
        }
        cs.sigma_b2 = params.sigma_b2;
        cs.sigma_r2 = params.sigma_r2;
        return cs;
    }
}
