// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The mimo-precoding Authors
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

#ifndef MIMO_CONFIG_HPP
#define MIMO_CONFIG_HPP

// Experiment configuration files: one `key = value` per line, `#` starts a
// comment. Lists are comma separated; `grid` also accepts
// `linspace(lo, hi, points)`. Keys not present keep their current value.

#include "harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mimo::harness {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string trim(std::string s)
{
    auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

inline double to_double(const std::string &s, const std::string &key)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || trim(s.substr(used)) != "")
        throw ConfigError("'" + key + "': expected a number, got '" + s + "'");
    return v;
}

inline long long to_integer(const std::string &s, const std::string &key)
{
    const double v = to_double(s, key);
    if (v != std::floor(v))
        throw ConfigError("'" + key + "': expected an integer, got '" + s + "'");
    return static_cast<long long>(v);
}

inline std::vector<std::string> split_list(const std::string &s)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

inline std::vector<double> to_doubles(const std::string &s, const std::string &key)
{
    std::vector<double> out;
    for (const auto &item : split_list(s))
        out.push_back(to_double(item, key));
    if (out.empty())
        throw ConfigError("'" + key + "': empty list");
    return out;
}

inline bool to_bool(const std::string &s, const std::string &key)
{
    if (s == "true" || s == "1" || s == "yes" || s == "on")
        return true;
    if (s == "false" || s == "0" || s == "no" || s == "off")
        return false;
    throw ConfigError("'" + key + "': expected a boolean, got '" + s + "'");
}

inline RateSpec to_rates(const std::string &s, const std::string &key)
{
    const auto v = to_doubles(s, key);
    if (v.size() == 1)
        return {v[0], v[0]};
    if (v.size() == 2)
        return {v[0], v[1]};
    throw ConfigError("'" + key + "': expected one value or 'lo, hi'");
}

} // namespace detail

inline std::vector<Scheme> parse_schemes(const std::string &list)
{
    std::vector<Scheme> out;
    for (const auto &name : detail::split_list(list)) {
        const auto s = parse_scheme(name);
        if (!s)
            throw ConfigError("unknown scheme '" + name + "' (expected ZF, RZF, PA-RZF, A-OLP or OLP)");
        if (std::find(out.begin(), out.end(), *s) == out.end())
            out.push_back(*s);
    }
    if (out.empty())
        throw ConfigError("empty scheme list");
    return out;
}

inline std::vector<double> parse_grid(const std::string &text, const std::string &key = "grid")
{
    const std::string s = detail::trim(text);
    if (s.rfind("linspace(", 0) == 0 && s.back() == ')') {
        const auto args = detail::to_doubles(s.substr(9, s.size() - 10), key);
        if (args.size() != 3 || args[2] < 1 || args[2] != std::floor(args[2]))
            throw ConfigError("'" + key + "': linspace needs (lo, hi, points)");
        return linspace(args[0], args[1], static_cast<int>(args[2]));
    }
    return detail::to_doubles(s, key);
}

// Applies the settings in `is` on top of `cfg`.
inline ExperimentConfig parse_config(std::istream &is, ExperimentConfig cfg)
{
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        try {
            if (key == "sweep") {
                if (val == "rate")
                    cfg.sweep = SweepVariable::Rate;
                else if (val == "antennas")
                    cfg.sweep = SweepVariable::Antennas;
                else
                    throw ConfigError("'sweep': expected 'rate' or 'antennas'");
            } else if (key == "antennas") {
                cfg.system.antennas = static_cast<int>(detail::to_integer(val, key));
            } else if (key == "users") {
                cfg.system.users = static_cast<int>(detail::to_integer(val, key));
            } else if (key == "noise_power_dbm") {
                cfg.system.sigma2 = dbm_to_watt(detail::to_double(val, key));
            } else if (key == "sigma2") {
                cfg.system.sigma2 = detail::to_double(val, key);
            } else if (key == "cell_radius") {
                cfg.system.cell_radius = detail::to_double(val, key);
            } else if (key == "min_distance") {
                cfg.system.min_distance = detail::to_double(val, key);
            } else if (key == "pathloss_exponent") {
                cfg.system.pathloss_exponent = detail::to_double(val, key);
            } else if (key == "pathloss_const") {
                cfg.system.pathloss_const = detail::to_double(val, key);
            } else if (key == "pathloss_const_log10") {
                cfg.system.pathloss_const = std::pow(10.0, detail::to_double(val, key));
            } else if (key == "bandwidth") {
                cfg.system.bandwidth = detail::to_double(val, key);
            } else if (key == "grid") {
                cfg.grid = parse_grid(val, key);
            } else if (key == "rate" || key == "rate_range") {
                cfg.rates = detail::to_rates(val, key);
            } else if (key == "trials") {
                cfg.trials = static_cast<int>(detail::to_integer(val, key));
            } else if (key == "seed") {
                cfg.seed = std::stoull(val);
            } else if (key == "schemes") {
                cfg.schemes = parse_schemes(val);
            } else if (key == "freeze_positions") {
                cfg.freeze_positions = detail::to_bool(val, key);
            } else if (key == "threads") {
                cfg.threads = static_cast<int>(detail::to_integer(val, key));
            } else if (key == "ladder") {
                cfg.ladder.clear();
                for (double v : detail::to_doubles(val, key))
                    cfg.ladder.push_back(static_cast<int>(detail::to_integer(std::to_string(v), key)));
            } else if (key == "ladder_load") {
                cfg.ladder_load = detail::to_double(val, key);
            } else if (key == "ladder_rate" || key == "ladder_rate_range") {
                cfg.ladder_rates = detail::to_rates(val, key);
            } else if (key == "ladder_trials") {
                cfg.ladder_trials = static_cast<int>(detail::to_integer(val, key));
            } else {
                throw ConfigError("unknown key '" + key + "'");
            }
        } catch (const ConfigError &e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        } catch (const std::exception &) {
            throw ConfigError("line " + std::to_string(lineno) + ": bad value '" + val + "' for '" + key + "'");
        }
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string &path, ExperimentConfig base)
{
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot open config file '" + path + "'");
    try {
        return parse_config(is, std::move(base));
    } catch (const ConfigError &e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace mimo::harness

#endif
