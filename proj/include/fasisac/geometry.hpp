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

#include <utility>
#include <vector>

#include "fasisac/types.hpp"

namespace fasisac
{
    /// Fluid-antenna surface in the x-y plane plus the radar receive array.
    ///
    /// Ports form an ns_x by ns_y grid spread evenly over area_x by area_y
    /// wavelengths. Port indices are 0-based and row-major with y fastest:
    /// index = ix * ns_y + iy. The receive array is a uniform linear array
    /// along the x axis.
    struct FasGeometry
    {
        int ns_x = 4;
        int ns_y = 4;
        double area_x = 1.0;        // wavelengths
        double area_y = 1.0;        // wavelengths
        double wavelength = 0.125;  // meters
        int nr = 10;
        double rx_spacing = 0.5;    // wavelengths

        int num_ports() const { return ns_x * ns_y; }
        int port_index(int ix, int iy) const { return ix * ns_y + iy; }
        std::pair<int, int> port_coords(int index) const;

        // Throws std::invalid_argument on a malformed geometry.
        void validate() const;

        // Near-square grid holding exactly num_ports ports: ns_x is the largest
        // divisor of num_ports not above its square root.
        static FasGeometry square_grid(int num_ports, double area, double wavelength, int nr);
    };

    struct Point2
    {
        double x = 0.0;
        double y = 0.0;
    };

    std::vector<Point2> port_positions(const FasGeometry &geom);

    // Euclidean distance between ports i and j in meters.
    double port_distance(const FasGeometry &geom, int i, int j);

    // Zeroth-order spherical Bessel function, sin(x)/x.
    double spherical_j0(double x);

    /// Jakes spatial correlation of the port grid and its eigendecomposition.
    struct SpatialCorrelation
    {
        RMat matrix;      // J_s, unit diagonal
        RMat eigvectors;  // orthonormal columns, paired with eigvalues
        RVec eigvalues;   // descending, clamped to be nonnegative
    };

    // Fills J_s in parallel over rows.
    RMat jakes_matrix(const FasGeometry &geom);

    // Eigenvalues below 1e-12 * max are set to zero.
    SpatialCorrelation jakes_correlation(const FasGeometry &geom);

    struct UserLink
    {
        double distance = 1.0;      // meters
        double pathloss_exp = 2.0;
        double noise_var = 1.0;

        double pathloss() const;    // d^-m
    };

    // One correlated Rayleigh draw for a user. The returned vector is the row
    // h_k^H = sqrt(l_k) g_k^H Lambda^{1/2} Upsilon^T, so the gain of precoder w is
    // simply row.dot-product(w) without further conjugation.
    CVec synthesize_user_channel(const SpatialCorrelation &corr, const UserLink &link, Rng &rng);

    /// Target direction: theta from the array normal (z axis), phi azimuth in the x-y plane.
    struct TargetDirection
    {
        double theta = 0.0;
        double phi = 0.0;
    };

    struct SteeringPair
    {
        CVec a_t;  // length num_ports
        CVec a_r;  // length nr
    };

    // Far-field phases relative to port 0 / receive element 0.
    SteeringPair steering_vectors(const FasGeometry &geom, const TargetDirection &dir);

    // G = alpha * a_r * a_t^H.
    CMat target_response(const CVec &a_r, const CVec &a_t, cplx alpha);

    /// One channel realization.
    struct ChannelSet
    {
        CMat H;              // K x Ns, row k is h_k^H
        CMat G;              // Nr x Ns
        CVec a_t;
        CVec a_r;
        cplx alpha{0.0, 0.0};
        CMat Rc;             // Nr x Nr interference covariance
        double sigma_b2 = 1.0;
        double sigma_r2 = 1.0;  // target acting as eavesdropper
        RVec user_noise;        // sigma_k^2
        RVec eve_noise;         // sigma_i^2 when user i eavesdrops

        int num_users() const { return static_cast<int>(H.rows()); }
        int num_ports() const { return static_cast<int>(H.cols()); }
    };

    struct ChannelParams
    {
        std::vector<UserLink> users;
        double target_distance = 200.0;
        double pathloss_exp = 2.0;
        TargetDirection direction;
        double sigma_b2 = 1.0;
        double sigma_c2 = 1.0;     // used when Rc is empty
        CMat Rc;                   // optional full covariance
        double sigma_r2 = 1.0;
    };

    // Draws user channels and a random target phase. Draw order is fixed:
    // target phase first, then users in index order.
    ChannelSet draw_channel_set(const FasGeometry &geom, const SpatialCorrelation &corr,
                                const ChannelParams &params, Rng &rng);

    namespace reference
    {
        // Serial fill of J_s; kept to check the parallel kernel.
        RMat jakes_matrix(const FasGeometry &geom);
    }
}
