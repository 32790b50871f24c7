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

#include "fasisac/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace fasisac
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        double to_real(const std::string &text)
        {
            const std::string t = trim(text);
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(t, &used);
            }
            catch (const std::exception &)
            {
                throw ConfigError("expected a number, got '" + t + "'");
            }
            if (used != t.size() || !std::isfinite(v))
                throw ConfigError("expected a number, got '" + t + "'");
            return v;
        }

        long long to_integer(const std::string &text)
        {
            const double v = to_real(text);
            if (v != std::floor(v) || std::abs(v) > 9e15)
                throw ConfigError("expected an integer, got '" + trim(text) + "'");
            return static_cast<long long>(v);
        }

        bool to_bool(const std::string &text)
        {
            const std::string t = trim(text);
            if (t == "true" || t == "1" || t == "yes" || t == "on")
                return true;
            if (t == "false" || t == "0" || t == "no" || t == "off")
                return false;
            throw ConfigError("expected true or false, got '" + t + "'");
        }

        std::vector<std::string> split(const std::string &text, char sep)
        {
            std::vector<std::string> out;
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, sep))
                out.push_back(trim(item));
            return out;
        }

        std::vector<int> to_int_list(const std::string &text)
        {
            std::vector<int> out;
            for (double v : parse_real_list(text))
            {
                if (v != std::floor(v))
                    throw ConfigError("expected integers in list '" + trim(text) + "'");
                out.push_back(static_cast<int>(v));
            }
            return out;
        }

        using Setter = std::function<void(ScenarioConfig &, const std::string &)>;

        const std::map<std::string, Setter> &setters()
        {
            static const std::map<std::string, Setter> table = [] {
                std::map<std::string, Setter> t;
                auto real = [&t](const char *key, double ScenarioConfig::*field) {
                    t[key] = [field](ScenarioConfig &c, const std::string &v) { c.*field = to_real(v); };
                };
                auto integer = [&t](const char *key, int ScenarioConfig::*field) {
                    t[key] = [field](ScenarioConfig &c, const std::string &v) {
                        c.*field = static_cast<int>(to_integer(v));
                    };
                };
                auto flag = [&t](const char *key, bool ScenarioConfig::*field) {
                    t[key] = [field](ScenarioConfig &c, const std::string &v) { c.*field = to_bool(v); };
                };
                auto word = [&t](const char *key, std::string ScenarioConfig::*field) {
                    t[key] = [field](ScenarioConfig &c, const std::string &v) { c.*field = trim(v); };
                };
                auto reals = [&t](const char *key, std::vector<double> ScenarioConfig::*field) {
                    t[key] = [field](ScenarioConfig &c, const std::string &v) { c.*field = parse_real_list(v); };
                };
                auto ints = [&t](const char *key, std::vector<int> ScenarioConfig::*field) {
                    t[key] = [field](ScenarioConfig &c, const std::string &v) { c.*field = to_int_list(v); };
                };

                integer("ns_x", &ScenarioConfig::ns_x);
                integer("ns_y", &ScenarioConfig::ns_y);
                real("area", &ScenarioConfig::area);
                real("wavelength", &ScenarioConfig::wavelength);
                integer("nr", &ScenarioConfig::nr);
                real("rx_spacing", &ScenarioConfig::rx_spacing);

                integer("users", &ScenarioConfig::users);
                reals("user_distances", &ScenarioConfig::user_distances);
                word("placement", &ScenarioConfig::placement);
                real("disc_radius", &ScenarioConfig::disc_radius);
                real("min_user_distance", &ScenarioConfig::min_user_distance);
                real("pathloss_exp", &ScenarioConfig::pathloss_exp);

                real("target_distance", &ScenarioConfig::target_distance);
                word("target_angle", &ScenarioConfig::target_angle);
                real("theta_min_deg", &ScenarioConfig::theta_min_deg);
                real("theta_max_deg", &ScenarioConfig::theta_max_deg);
                real("theta_deg", &ScenarioConfig::theta_deg);
                real("phi_deg", &ScenarioConfig::phi_deg);

                real("power", &ScenarioConfig::power);
                real("snr_db", &ScenarioConfig::snr_db);
                real("sigma_b2", &ScenarioConfig::sigma_b2);
                real("sigma_c2", &ScenarioConfig::sigma_c2);
                real("target_noise_scale", &ScenarioConfig::target_noise_scale);

                integer("n_active", &ScenarioConfig::n_active);
                real("zeta", &ScenarioConfig::zeta);
                real("r_th", &ScenarioConfig::r_th);
                integer("max_outer_iters", &ScenarioConfig::max_outer_iters);
                integer("max_sca_iters", &ScenarioConfig::max_sca_iters);
                real("tol", &ScenarioConfig::tol);
                real("sca_tol", &ScenarioConfig::sca_tol);
                real("bisection_tol", &ScenarioConfig::bisection_tol);
                flag("reselect_each_iter", &ScenarioConfig::reselect_each_iter);
                flag("random_init", &ScenarioConfig::random_init);
                word("mode", &ScenarioConfig::mode);

                reals("snr_grid", &ScenarioConfig::snr_grid);
                reals("area_grid", &ScenarioConfig::area_grid);
                reals("zeta_grid", &ScenarioConfig::zeta_grid);
                real("zeta_target_distance", &ScenarioConfig::zeta_target_distance);
                real("zeta_snr_db", &ScenarioConfig::zeta_snr_db);
                real("zeta_radar_noise_scale", &ScenarioConfig::zeta_radar_noise_scale);
                ints("ns_grid", &ScenarioConfig::ns_grid);
                real("ports_snr_db", &ScenarioConfig::ports_snr_db);
                ints("users_grid", &ScenarioConfig::users_grid);
                real("users_snr_db", &ScenarioConfig::users_snr_db);
                real("convergence_snr_db", &ScenarioConfig::convergence_snr_db);
                integer("beam_ports", &ScenarioConfig::beam_ports);
                real("beam_snr_db", &ScenarioConfig::beam_snr_db);
                real("beam_theta_deg", &ScenarioConfig::beam_theta_deg);
                real("beam_step_deg", &ScenarioConfig::beam_step_deg);

                t["schemes"] = [](ScenarioConfig &c, const std::string &v) { c.schemes = split(v, ','); };
                integer("trials", &ScenarioConfig::trials);
                t["seed"] = [](ScenarioConfig &c, const std::string &v) {
                    const std::string t = trim(v);
                    if (!t.empty() && t[0] == '-')
                        throw ConfigError("seed must be nonnegative");
                    std::uint64_t s = 0;
                    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), s);
                    if (ec != std::errc() || end != t.data() + t.size() || t.empty())
                        throw ConfigError("expected an unsigned integer, got '" + t + "'");
                    c.seed = s;
                };
                return t;
            }();
            return table;
        }

        void require(bool ok, const std::string &msg)
        {
            if (!ok)
                throw ConfigError(msg);
        }
    }

    std::vector<double> parse_real_list(const std::string &text)
    {
        std::vector<double> out;
        for (const auto &item : split(text, ','))
        {
            if (item.empty())
                throw ConfigError("empty list entry in '" + trim(text) + "'");
            const auto parts = split(item, ':');
            if (parts.size() == 1)
            {
                out.push_back(to_real(parts[0]));
                continue;
            }
            if (parts.size() != 3)
                throw ConfigError("ranges are start:step:stop, got '" + item + "'");
            const double start = to_real(parts[0]);
            const double step = to_real(parts[1]);
            const double stop = to_real(parts[2]);
            if (!(step > 0.0) || stop < start)
                throw ConfigError("range '" + item + "' is empty or has a nonpositive step");
            const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
            if (count > 100000)
                throw ConfigError("range '" + item + "' is too long");
            for (long long i = 0; i <= count; ++i)
                out.push_back(start + static_cast<double>(i) * step);
        }
        return out;
    }

    void ScenarioConfig::validate() const
    {
        require(ns_x >= 1 && ns_y >= 1, "ns_x and ns_y must be positive");
        require(area >= 0.0, "area must be nonnegative");
        require(area > 0.0 || num_ports() == 1, "area must be positive with more than one port");
        require(wavelength > 0.0, "wavelength must be positive");
        require(nr >= 1, "nr must be positive");
        require(rx_spacing > 0.0, "rx_spacing must be positive");
        require(users >= 1, "users must be positive");
        require(placement == "fixed" || placement == "disc", "placement must be fixed or disc");
        if (placement == "fixed")
        {
            require(static_cast<int>(user_distances.size()) >= users,
                    "user_distances needs one entry per user");
            for (double d : user_distances)
                require(d > 0.0, "user distances must be positive");
        }
        require(disc_radius > min_user_distance && min_user_distance > 0.0,
                "need 0 < min_user_distance < disc_radius");
        require(pathloss_exp > 0.0, "pathloss_exp must be positive");
        require(target_distance > 0.0 && zeta_target_distance > 0.0, "target distances must be positive");
        require(zeta_radar_noise_scale > 0.0, "zeta_radar_noise_scale must be positive");
        require(target_angle == "random" || target_angle == "fixed", "target_angle must be random or fixed");
        require(theta_min_deg <= theta_max_deg, "theta_min_deg exceeds theta_max_deg");
        require(std::abs(theta_min_deg) <= 90.0 && std::abs(theta_max_deg) <= 90.0 && std::abs(theta_deg) <= 90.0,
                "target angles must lie in [-90, 90] degrees");
        require(power > 0.0, "power must be positive");
        require(sigma_b2 > 0.0, "sigma_b2 must be positive");
        require(sigma_c2 >= 0.0, "sigma_c2 must be nonnegative");
        require(target_noise_scale > 0.0, "target_noise_scale must be positive");
        require(n_active >= 1, "n_active must be positive");
        require(n_active >= users, "n_active must be at least the number of users");
        require(n_active <= num_ports(), "n_active exceeds the number of ports");
        require(zeta >= 0.0 && r_th >= 0.0, "zeta and r_th must be nonnegative");
        require(max_outer_iters >= 1 && max_sca_iters >= 1, "iteration limits must be positive");
        require(tol > 0.0 && sca_tol > 0.0 && bisection_tol > 0.0, "tolerances must be positive");
        require(mode == "secrecy-max" || mode == "radar-centric", "mode must be secrecy-max or radar-centric");
        require(!snr_grid.empty() && !area_grid.empty() && !zeta_grid.empty() && !ns_grid.empty()
                    && !users_grid.empty(),
                "sweep grids must be non-empty");
        for (double a : area_grid)
            require(a > 0.0, "area_grid entries must be positive");
        for (double z : zeta_grid)
            require(z >= 0.0, "zeta_grid entries must be nonnegative");
        for (int n : ns_grid)
            require(n >= n_active, "every ns_grid entry must be at least n_active");
        for (int k : users_grid)
            require(k >= 1 && k <= n_active, "users_grid entries must lie in [1, n_active]");
        require(beam_ports >= n_active, "beam_ports must be at least n_active");
        require(beam_step_deg > 0.0, "beam_step_deg must be positive");
        require(!schemes.empty(), "schemes must be non-empty");
        for (const auto &s : schemes)
            require(s == "jpps" || s == "gs" || s == "gs-tim" || s == "svd-tim" || s == "fpa-jpps"
                        || s == "exhaustive",
                    "unknown scheme '" + s + "'");
        require(trials >= 1, "trials must be positive");
    }

    ScenarioConfig profile(const std::string &name)
    {
        if (name == "paper-default")
            return ScenarioConfig{};
        throw ConfigError("unknown profile '" + name + "'");
    }

    void apply_setting(ScenarioConfig &cfg, const std::string &key, const std::string &value,
                       const std::string &where)
    {
        const auto &table = setters();
        const auto it = table.find(key);
        if (it == table.end())
            throw ConfigError(where + ": unknown key '" + key + "'");
        try
        {
            it->second(cfg, value);
        }
        catch (const ConfigError &e)
        {
            throw ConfigError(where + ": " + key + ": " + e.what());
        }
    }

    void apply_override(ScenarioConfig &cfg, const std::string &assignment)
    {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set " + assignment + ": expected key=value");
        apply_setting(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1), "--set");
    }

    void parse_config_text(ScenarioConfig &cfg, const std::string &text, const std::string &source)
    {
        std::stringstream ss(text);
        std::string line;
        int lineno = 0;
        while (std::getline(ss, line))
        {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty())
                continue;
            const std::string where = source + ":" + std::to_string(lineno);
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(where + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            if (key.empty())
                throw ConfigError(where + ": missing key");
            apply_setting(cfg, key, line.substr(eq + 1), where);
        }
    }

    void load_config_file(ScenarioConfig &cfg, const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError(path + ": cannot open");
        std::stringstream buf;
        buf << in.rdbuf();
        parse_config_text(cfg, buf.str(), path);
    }
}
