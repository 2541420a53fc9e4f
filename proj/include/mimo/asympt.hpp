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

#ifndef MIMO_ASYMPT_HPP
#define MIMO_ASYMPT_HPP

// Large-system (N, K -> infinity, K/N = c fixed) deterministic equivalents of
// the optimal multipliers and powers, and of the transmit power of the
// weighted-RZF family as a function of its regularization rho.
//
// Only the products a_i = alpha_i * l_i enter the heuristic equivalents, so
// the solvers below work on those "effective loads".

#include "common.hpp"
#include "exact.hpp"
#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace mimo::asympt {

struct FixedPointOptions {
    double tol = 1e-12;
    int max_iter = 10000;
};

struct Theorem1Equivalents {
    double load = 0.0; // c = K/N
    double xi = 1.0;   // 1 - (1/N) sum gamma_i/(1+gamma_i)
    double A = 0.0;    // (1/K) sum gamma_i / l_i
    RVector lambda_bar;
    RVector p_bar;
    double P_bar = 0.0;
};

struct HeuristicEquivalents {
    double rho = 0.0;
    double load = 0.0;
    double mu = 0.0;
    double mu_prime = 0.0;   // -d mu / d rho, positive
    double F2 = 0.0;
    double B = 0.0;
    double A = 0.0;
    double beta = 0.0;       // mean target SINR
    double curvA = 0.0;      // (1/K) sum a_i^2 / (1 + a_i mu)^3
    double curvB = 0.0;      // (1/K) sum a_i gamma_i / (1 + a_i mu)^3
    double denominator = 0.0; // 1 - mu^2 F2 - c B
    double P_bar = 0.0;
    double dP_drho = 0.0;
    RVector p_bar;
    RVector sinr_bar;
};

struct OptimalRegularization {
    double rho_star = 0.0;
    double mu_star = 0.0;
};

struct PaRzfRegularization {
    double rho_star = 0.0;
    double beta = 0.0;
    double load = 0.0;

    // Deterministic equivalent of the minimum transmit power.
    double power(double A, double sigma2) const { return load * A * sigma2 / (1.0 - load * beta / (1.0 + beta)); }
};

namespace detail {

inline void check_users(std::span<const UserState> users, int antennas, const char *who)
{
    if (antennas <= 0)
        throw std::invalid_argument(std::string(who) + ": antenna count must be positive");
    if (static_cast<int>(users.size()) > antennas)
        throw std::invalid_argument(std::string(who) + ": load K/N exceeds 1");
    for (const auto &u : users) {
        if (!(u.attenuation > 0.0))
            throw std::invalid_argument(std::string(who) + ": attenuations must be positive");
        if (u.sinr_target < 0.0)
            throw std::invalid_argument(std::string(who) + ": SINR targets must be nonnegative");
    }
}

inline RVector effective_loads(const RVector &alpha, std::span<const UserState> users)
{
    if (alpha.size() != static_cast<Eigen::Index>(users.size()))
        throw std::invalid_argument("weight vector length differs from user count");
    RVector a = alpha.cwiseProduct(attenuations(users));
    if ((a.array() < 0.0).any())
        throw std::invalid_argument("weights must be nonnegative");
    return a;
}

inline double mean_target_over_attenuation(std::span<const UserState> users)
{
    if (users.empty())
        return 0.0;
    double s = 0.0;
    for (const auto &u : users)
        s += u.sinr_target / u.attenuation;
    return s / static_cast<double>(users.size());
}

} // namespace detail

inline Theorem1Equivalents theorem1(std::span<const UserState> users, double sigma2, int antennas)
{
    detail::check_users(users, antennas, "theorem1");
    const auto k = static_cast<Eigen::Index>(users.size());
    const auto n = static_cast<double>(antennas);

    Theorem1Equivalents eq;
    eq.load = static_cast<double>(k) / n;
    double demand = 0.0;
    for (const auto &u : users)
        demand += u.sinr_target / (1.0 + u.sinr_target);
    eq.xi = 1.0 - demand / n;
    if (!(eq.xi > 0.0))
        throw InfeasibleError("theorem1: nonpositive load factor xi");
    eq.A = detail::mean_target_over_attenuation(users);
    eq.P_bar = eq.load * eq.A * sigma2 / eq.xi;

    eq.lambda_bar.resize(k);
    eq.p_bar.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto &u = users[static_cast<std::size_t>(i)];
        const double l = u.attenuation;
        const double g = u.sinr_target;
        eq.lambda_bar(i) = g / (l * eq.xi);
        eq.p_bar(i) = g / (l * eq.xi * eq.xi) * (eq.P_bar + sigma2 / l * (1.0 + g) * (1.0 + g));
    }
    return eq;
}

// mu = ((1/N) sum a_i / (1 + a_i mu) + rho)^{-1}, iterated from 1/rho.
inline double solve_mu_loads(const RVector &loads, double rho, int antennas, const FixedPointOptions &opts = {})
{
    if (!(rho > 0.0))
        throw std::invalid_argument("solve_mu: rho must be positive");
    if ((loads.array() < 0.0).any())
        throw std::invalid_argument("solve_mu: effective loads must be nonnegative");
    const double n = antennas;
    auto map = [&](double mu) { return 1.0 / ((loads.array() / (1.0 + loads.array() * mu)).sum() / n + rho); };

    double mu = 1.0 / rho;
    double damping = 1.0;
    double prev_step = 0.0;
    for (int it = 0; it < opts.max_iter; ++it) {
        const double step = map(mu) - mu;
        if (std::abs(step) <= opts.tol * mu)
            return mu + step;
        if (step * prev_step < 0.0)
            damping = 0.5;
        mu += damping * step;
        prev_step = step;
    }
    throw ConvergenceError("solve_mu: no convergence", RVector::Constant(1, mu), std::abs(map(mu) - mu) / mu,
                           opts.max_iter);
}

inline double solve_mu(const RVector &alpha, std::span<const UserState> users, double rho, int antennas,
                       const FixedPointOptions &opts = {})
{
    detail::check_users(users, antennas, "solve_mu");
    return solve_mu_loads(detail::effective_loads(alpha, users), rho, antennas, opts);
}

// Magnitude of the derivative of mu with respect to rho. The derivative
// itself is negative: d mu / d rho = -mu^2 / (1 - mu^2 F2).
inline double mu_prime(double mu, double F2)
{
    const double s = mu * mu * F2;
    if (!(s < 1.0))
        throw InfeasibleError("mu_prime: mu^2 F2 >= 1 (degenerate load)");
    return mu * mu / (1.0 - s);
}

// SINR deterministic equivalents for given powers p at the solution mu.
inline RVector sinr_bar(const RVector &loads, std::span<const UserState> users, double mu, double P_bar,
                        const RVector &p, double sigma2)
{
    RVector out(p.size());
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        const double l = users[static_cast<std::size_t>(k)].attenuation;
        const double f = 1.0 + loads(k) * mu;
        out(k) = p(k) * l * mu * mu / (P_bar + sigma2 / l * f * f);
    }
    return out;
}

// Deterministic equivalent of tr(V V^H) for given powers p.
inline double power_bar(const RVector &loads, std::span<const UserState> users, double mu, double mu_prime_value,
                        const RVector &p, int antennas)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double f = 1.0 + loads(i) * mu;
        s += p(i) * users[static_cast<std::size_t>(i)].attenuation / (f * f);
    }
    return mu_prime_value * s / static_cast<double>(antennas);
}

// Equivalents of the weighted-RZF precoder at a given rho when the powers are
// chosen so that every SINR equivalent equals its target.
inline HeuristicEquivalents heuristic_deteq(const RVector &alpha, std::span<const UserState> users, double rho,
                                            double sigma2, int antennas, const FixedPointOptions &opts = {})
{
    detail::check_users(users, antennas, "heuristic_deteq");
    const RVector a = detail::effective_loads(alpha, users);
    const auto k = static_cast<Eigen::Index>(users.size());
    const double n = antennas;

    HeuristicEquivalents eq;
    eq.rho = rho;
    eq.load = static_cast<double>(k) / n;
    eq.mu = solve_mu_loads(a, rho, antennas, opts);
    eq.A = detail::mean_target_over_attenuation(users);

    const RVector gamma = sinr_targets(users);
    const Eigen::ArrayXd f = 1.0 + a.array() * eq.mu;
    const Eigen::ArrayXd f2 = f.square();
    const Eigen::ArrayXd f3 = f2 * f;
    eq.F2 = (a.array().square() / f2).sum() / n;
    if (k > 0) {
        eq.B = (gamma.array() / f2).mean();
        eq.beta = gamma.mean();
        eq.curvA = (a.array().square() / f3).mean();
        eq.curvB = (a.array() * gamma.array() / f3).mean();
    }
    eq.mu_prime = mu_prime(eq.mu, eq.F2);
    eq.denominator = 1.0 - eq.mu * eq.mu * eq.F2 - eq.load * eq.B;
    if (!(eq.denominator > 0.0))
        throw InfeasibleError("heuristic_deteq: targets infeasible at rho=" + std::to_string(rho) +
                              " (1 - mu^2 F2 - cB = " + std::to_string(eq.denominator) + ")");
    eq.P_bar = eq.load * eq.A * sigma2 / eq.denominator;
    eq.dP_drho = -2.0 * eq.load * eq.load * eq.A * sigma2 * eq.mu_prime * (eq.mu * eq.curvA - eq.curvB) /
                 (eq.denominator * eq.denominator);

    eq.p_bar.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double l = users[static_cast<std::size_t>(i)].attenuation;
        eq.p_bar(i) = gamma(i) * (eq.P_bar + sigma2 / l * f2(i)) / (l * eq.mu * eq.mu);
    }
    eq.sinr_bar = sinr_bar(a, users, eq.mu, eq.P_bar, eq.p_bar, sigma2);
    return eq;
}

namespace detail {

inline double mu_star_from(const RVector &a, const RVector &gamma, double init, const FixedPointOptions &opts)
{
    auto map = [&](double mu) {
        const Eigen::ArrayXd f3 = (1.0 + a.array() * mu).cube();
        return (a.array() * gamma.array() / f3).sum() / (a.array().square() / f3).sum();
    };
    double mu = init;
    double damping = 1.0;
    double prev_step = 0.0;
    for (int it = 0; it < opts.max_iter; ++it) {
        const double step = map(mu) - mu;
        if (std::abs(step) <= opts.tol * std::abs(mu))
            return mu + step;
        // Halve the step length each time the iterates start to oscillate.
        if (step * prev_step < 0.0)
            damping = std::max(damping * 0.5, 1.0 / 1024.0);
        mu += damping * step;
        prev_step = step;
    }
    throw ConvergenceError("solve_mu_star: no convergence", RVector::Constant(1, mu),
                           std::abs(map(mu) - mu) / std::abs(mu), opts.max_iter);
}

} // namespace detail

// Power-minimizing mu: mu* = (sum a_i gamma_i / (1+a_i mu*)^3) / (sum a_i^2 / (1+a_i mu*)^3).
// Restarted from 0.1x and 10x the default start; disagreeing solutions are an
// error.
inline double solve_mu_star(const RVector &alpha, std::span<const UserState> users,
                            const FixedPointOptions &opts = {})
{
    if (users.empty())
        throw std::invalid_argument("solve_mu_star: no users");
    const RVector a = detail::effective_loads(alpha, users);
    if ((a.array() <= 0.0).any())
        throw std::invalid_argument("solve_mu_star: alpha_k l_k must be positive");
    const RVector gamma = sinr_targets(users);
    if ((gamma.array() < 0.0).any() || !(gamma.maxCoeff() > 0.0))
        throw std::invalid_argument("solve_mu_star: need nonnegative targets, not all zero");

    const double init = gamma.mean();
    const double mu = detail::mu_star_from(a, gamma, init, opts);
    for (double scale : {0.1, 10.0}) {
        const double other = detail::mu_star_from(a, gamma, scale * init, opts);
        if (std::abs(other - mu) > 1e-6 * std::abs(mu))
            throw SolverError("solve_mu_star: multiple fixed points (" + std::to_string(mu) + " vs " +
                              std::to_string(other) + ")");
    }
    return mu;
}

inline OptimalRegularization optimal_rho(const RVector &alpha, std::span<const UserState> users, int antennas,
                                         const FixedPointOptions &opts = {})
{
    detail::check_users(users, antennas, "optimal_rho");
    const double mu = solve_mu_star(alpha, users, opts);
    const RVector a = detail::effective_loads(alpha, users);
    const double rho = 1.0 / mu - (a.array() / (1.0 + a.array() * mu)).sum() / static_cast<double>(antennas);
    return {rho, mu};
}

inline OptimalRegularization rzf_rho_star(std::span<const UserState> users, int antennas,
                                          const FixedPointOptions &opts = {})
{
    return optimal_rho(RVector::Ones(static_cast<Eigen::Index>(users.size())), users, antennas, opts);
}

inline PaRzfRegularization parzf_rho_star(const RVector &gamma, double load)
{
    if (gamma.size() == 0)
        throw std::invalid_argument("parzf_rho_star: no users");
    if (!(load > 0.0 && load <= 1.0))
        throw std::invalid_argument("parzf_rho_star: load must lie in (0, 1]");
    const double beta = gamma.mean();
    if (!(beta > 0.0))
        throw std::invalid_argument("parzf_rho_star: mean target SINR must be positive");
    return {1.0 / beta - load / (1.0 + beta), beta, load};
}

// Position-aware weights alpha_k = 1 / l_k.
inline RVector position_aware_weights(std::span<const UserState> users)
{
    return attenuations(users).cwiseInverse();
}

// Optimal-structure precoder with closed-form multipliers and exact powers.
inline exact::PrecoderSolution aolp(const CMatrix &H, std::span<const UserState> users, double sigma2)
{
    const auto eq = theorem1(users, sigma2, static_cast<int>(H.rows()));
    const RVector gamma = sinr_targets(users);
    const CMatrix dirs = exact::directions(H, eq.lambda_bar, 1.0);
    auto sol = exact::detail::assemble(H, dirs, exact::power_allocation(H, dirs, gamma, sigma2), sigma2);
    sol.lambda = eq.lambda_bar;
    return sol;
}

// Same directions with the closed-form powers p_bar. SINR targets are met only
// approximately at finite N.
inline exact::PrecoderSolution aolp_closed_form(const CMatrix &H, std::span<const UserState> users, double sigma2)
{
    const auto eq = theorem1(users, sigma2, static_cast<int>(H.rows()));
    const CMatrix dirs = exact::directions(H, eq.lambda_bar, 1.0);
    auto sol = exact::detail::assemble(H, dirs, eq.p_bar, sigma2);
    sol.lambda = eq.lambda_bar;
    return sol;
}

} // namespace mimo::asympt

#endif
