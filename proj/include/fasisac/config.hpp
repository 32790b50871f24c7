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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fasisac
{
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Everything a sweep needs. Defaults make up the `paper-default` profile.
    struct ScenarioConfig
    {
        // Port surface and radar receiver.
        int ns_x = 4;
        int ns_y = 4;
        double area = 1.0;           // wavelengths, both axes
        double wavelength = 0.125;   // 2.4 GHz
        int nr = 10;
        double rx_spacing = 0.5;

        // Users.
        int users = 4;
        std::vector<double> user_distances{2.0, 15.0, 25.0, 35.0};
        std::string placement = "fixed";   // fixed | disc
        double disc_radius = 32.0;
        double min_user_distance = 1.0;
        double pathloss_exp = 2.0;

        // Target.
        double target_distance = 200.0;
        std::string target_angle = "random";  // random | fixed
        double theta_min_deg = -60.0;
        double theta_max_deg = 60.0;
        double theta_deg = 20.0;              // used when fixed
        double phi_deg = 0.0;

        // Power and noise. SNR = power / sigma^2.
        double power = 1.0;
        double snr_db = 20.0;
        double sigma_b2 = 1e-9;
        double sigma_c2 = 1e-9;
        double target_noise_scale = 1.0;  // sigma_r^2 = scale * sigma^2

        // Solver.
        int n_active = 6;
        double zeta = 1.0;
        double r_th = 1.0;
        int max_outer_iters = 30;
        int max_sca_iters = 60;
        double tol = 1e-3;
        double sca_tol = 1e-8;
        double bisection_tol = 1e-10;
        bool reselect_each_iter = true;
        bool random_init = false;
        std::string mode = "secrecy-max";  // secrecy-max | radar-centric

        // Sweep grids and per-scenario overrides.
        std::vector<double> snr_grid{10, 15, 20, 25, 30, 35, 40};
        std::vector<double> area_grid{1.0, 2.0};
        std::vector<double> zeta_grid{0, 2, 4, 6, 8, 10, 12};
        double zeta_target_distance = 50.0;
        double zeta_snr_db = 20.0;
        double zeta_radar_noise_scale = 300.0;  // multiplies sigma_b2 and sigma_c2 in the zeta sweep
        std::vector<int> ns_grid{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
        double ports_snr_db = 20.0;
        std::vector<int> users_grid{1, 2, 3, 4, 5, 6};
        double users_snr_db = 5.0;
        double convergence_snr_db = 20.0;
        int beam_ports = 9;
        double beam_snr_db = 10.0;
        double beam_theta_deg = 20.0;
        double beam_step_deg = 0.5;

        std::vector<std::string> schemes{"jpps", "gs", "gs-tim", "svd-tim", "fpa-jpps"};
        int trials = 200;
        std::uint64_t seed = 1;

        int num_ports() const { return ns_x * ns_y; }

        // Throws ConfigError naming the offending key.
        void validate() const;
    };

    ScenarioConfig profile(const std::string &name);

    // Applies one key=value pair; `where` prefixes error messages.
    void apply_setting(ScenarioConfig &cfg, const std::string &key, const std::string &value,
                       const std::string &where);

    // "key=value" from the command line.
    void apply_override(ScenarioConfig &cfg, const std::string &assignment);

    /// Flat text format: one key = value per line, '#' starts a comment, lists are
    /// comma-separated, a:b:c expands to a range. Errors carry file:line.
    void load_config_file(ScenarioConfig &cfg, const std::string &path);
    void parse_config_text(ScenarioConfig &cfg, const std::string &text, const std::string &source);

    // Parses "a,b,c" and "start:step:stop" lists.
    std::vector<double> parse_real_list(const std::string &text);
}
