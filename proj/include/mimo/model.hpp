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

#ifndef MIMO_MODEL_HPP
#define MIMO_MODEL_HPP

#include "common.hpp"
#include "random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mimo {

inline double dbm_to_watt(double p_dbm)
{
    return std::pow(10.0, (p_dbm - 30.0) / 10.0);
}

// Spectral efficiency (bit/s/Hz) to SINR target under Gaussian signalling.
inline double rate_to_sinr(double rate)
{
    return std::exp2(rate) - 1.0;
}

inline double sinr_to_rate(double sinr)
{
    return std::log2(1.0 + sinr);
}

// Single circular cell served by one N-antenna base station at the origin.
// The defaults are a 250 m macro cell with 3.76 path-loss exponent and a
// -104 dBm noise floor over 10 MHz.
struct SystemConfig {
    int antennas = 10;                              // N
    int users = 8;                                  // K
    double sigma2 = 3.9810717055349693e-14;         // noise power [W], -104 dBm
    double cell_radius = 250.0;                     // D [m]
    double min_distance = 15.0;                     // D_min [m]
    double pathloss_exponent = 3.76;                // kappa
    double pathloss_const = 2.9512092266663870e-04; // d0 = 10^-3.53
    double bandwidth = 10e6;                        // W [Hz], reporting only

    double load() const { return static_cast<double>(users) / antennas; }

    void validate() const
    {
        if (antennas <= 0 || users <= 0)
            throw std::invalid_argument("antenna and user counts must be positive");
        if (users > antennas)
            throw std::invalid_argument("user count K=" + std::to_string(users) +
                                        " exceeds antenna count N=" + std::to_string(antennas));
        if (!(min_distance > 0.0) || !(min_distance < cell_radius))
            throw std::invalid_argument("cell geometry requires 0 < min_distance < cell_radius");
        if (!(pathloss_exponent >= 2.0))
            throw std::invalid_argument("path-loss exponent must be >= 2");
        if (!(pathloss_const > 0.0))
            throw std::invalid_argument("path-loss constant must be positive");
        if (!(sigma2 > 0.0))
            throw std::invalid_argument("noise power must be positive");
    }
};

struct UserState {
    Position position = Position::Zero();
    double attenuation = 1.0; // l(x)
    double rate = 0.0;        // bit/s/Hz
    double sinr_target = 0.0; // gamma

    static UserState from_rate(Position x, double attenuation, double rate)
    {
        return UserState{x, attenuation, rate, rate_to_sinr(rate)};
    }

    static UserState from_sinr(Position x, double attenuation, double gamma)
    {
        return UserState{x, attenuation, sinr_to_rate(gamma), gamma};
    }
};

struct ChannelRealization {
    CMatrix H; // N x K, column k is h_k
    std::vector<UserState> users;

    int antennas() const { return static_cast<int>(H.rows()); }
    int user_count() const { return static_cast<int>(H.cols()); }
};

// Large-scale attenuation d0 / |x|^kappa, defined only outside the exclusion
// radius.
inline double pathloss(const Position &x, const SystemConfig &cfg)
{
    const double d = x.norm();
    if (d < cfg.min_distance)
        throw std::domain_error("pathloss: distance " + std::to_string(d) + " m is inside min_distance " +
                                std::to_string(cfg.min_distance) + " m");
    return cfg.pathloss_const / std::pow(d, cfg.pathloss_exponent);
}

// K points uniform in area over the annulus min_distance <= |x| <= cell_radius.
inline std::vector<Position> sample_positions(Rng &rng, int count, const SystemConfig &cfg)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r0 = cfg.min_distance * cfg.min_distance;
    const double r1 = cfg.cell_radius * cfg.cell_radius;
    std::vector<Position> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double radius = std::sqrt(r0 + unit(rng) * (r1 - r0));
        const double angle = 2.0 * std::numbers::pi * unit(rng);
        // Guard the inverse CDF against rounding just below the support.
        const double r = std::clamp(radius, cfg.min_distance, cfg.cell_radius);
        out.emplace_back(r * std::cos(angle), r * std::sin(angle));
    }
    return out;
}

// h_k = sqrt(l_k) w_k with w_k ~ CN(0, I_N); real and imaginary parts have
// variance 1/2 each. Columns are drawn in user order from the given stream.
inline ChannelRealization draw_channel(Rng &rng, std::span<const UserState> users, int antennas)
{
    if (users.empty())
        throw std::invalid_argument("draw_channel: user set is empty");
    if (antennas <= 0)
        throw std::invalid_argument("draw_channel: antenna count must be positive");
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    ChannelRealization ch;
    ch.H.resize(antennas, static_cast<Eigen::Index>(users.size()));
    ch.users.assign(users.begin(), users.end());
    for (Eigen::Index k = 0; k < ch.H.cols(); ++k) {
        const double scale = std::sqrt(users[static_cast<std::size_t>(k)].attenuation);
        for (Eigen::Index n = 0; n < antennas; ++n) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            ch.H(n, k) = scale * Complex(re, im);
        }
    }
    return ch;
}

// Users at the given positions with attenuation from the active path-loss
// model and the given per-user rates.
inline std::vector<UserState> make_users(std::span<const Position> positions, std::span<const double> rates,
                                         const SystemConfig &cfg)
{
    if (positions.size() != rates.size())
        throw std::invalid_argument("make_users: positions and rates differ in length");
    std::vector<UserState> users;
    users.reserve(positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k)
        users.push_back(UserState::from_rate(positions[k], pathloss(positions[k], cfg), rates[k]));
    return users;
}

inline RVector sinr_targets(std::span<const UserState> users)
{
    RVector g(static_cast<Eigen::Index>(users.size()));
    for (std::size_t k = 0; k < users.size(); ++k)
        g(static_cast<Eigen::Index>(k)) = users[k].sinr_target;
    return g;
}

inline RVector attenuations(std::span<const UserState> users)
{
    RVector l(static_cast<Eigen::Index>(users.size()));
    for (std::size_t k = 0; k < users.size(); ++k)
        l(static_cast<Eigen::Index>(k)) = users[k].attenuation;
    return l;
}

} // namespace mimo

#endif
