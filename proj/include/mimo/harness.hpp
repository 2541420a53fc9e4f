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

#ifndef MIMO_HARNESS_HPP
#define MIMO_HARNESS_HPP

// Monte Carlo driver comparing OLP, A-OLP, RZF, PA-RZF and ZF over a sweep of
// the per-user rate or of the antenna count.
//
// Trial t of every grid point draws its randomness from derive_stream(seed, t),
// so results do not depend on the number of worker threads or on scheduling.

#include "asympt.hpp"
#include "exact.hpp"
#include "model.hpp"
#include "random.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace mimo::harness {

enum class Scheme { ZF, RZF, PARZF, AOLP, OLP };

inline constexpr std::array<Scheme, 5> kAllSchemes = {Scheme::ZF, Scheme::RZF, Scheme::PARZF, Scheme::AOLP,
                                                      Scheme::OLP};

inline std::string_view scheme_name(Scheme s)
{
    switch (s) {
    case Scheme::ZF: return "ZF";
    case Scheme::RZF: return "RZF";
    case Scheme::PARZF: return "PA-RZF";
    case Scheme::AOLP: return "A-OLP";
    case Scheme::OLP: return "OLP";
    }
    return "?";
}

inline std::optional<Scheme> parse_scheme(std::string_view name)
{
    for (Scheme s : kAllSchemes)
        if (scheme_name(s) == name)
            return s;
    return std::nullopt;
}

enum class SweepVariable { Rate, Antennas };

inline std::string_view sweep_name(SweepVariable v)
{
    return v == SweepVariable::Rate ? "rate" : "antennas";
}

// Per-user rate in bit/s/Hz, drawn uniformly on [lo, hi] for every user and
// trial (a single value when lo == hi).
struct RateSpec {
    double lo = 2.0;
    double hi = 3.0;
};

struct ExperimentConfig {
    SystemConfig system;
    SweepVariable sweep = SweepVariable::Rate;
    std::vector<double> grid;
    RateSpec rates;
    int trials = 500;
    std::uint64_t seed = 1;
    std::vector<Scheme> schemes{kAllSchemes.begin(), kAllSchemes.end()};
    bool freeze_positions = false;
    int threads = 0; // 0 = hardware concurrency

    // Concentration ladder used by validate().
    std::vector<int> ladder{16, 32, 64, 128};
    double ladder_load = 0.5;
    RateSpec ladder_rates{1.0, 1.0};
    int ladder_trials = 200;

    void validate() const
    {
        if (trials < 1)
            throw std::invalid_argument("trials must be >= 1");
        if (grid.empty())
            throw std::invalid_argument("sweep grid is empty");
        if (schemes.empty())
            throw std::invalid_argument("no schemes selected");
        auto check_rates = [](const RateSpec &r, const char *what) {
            if (!(r.lo > 0.0) || !(r.lo <= r.hi))
                throw std::invalid_argument(std::string(what) + ": need 0 < rate_lo <= rate_hi");
        };
        check_rates(rates, "rate range");
        check_rates(ladder_rates, "ladder rate range");
        for (double v : grid) {
            SystemConfig s = system;
            if (sweep == SweepVariable::Rate) {
                if (!(v > 0.0))
                    throw std::invalid_argument("rate grid values must be positive");
            } else {
                if (v != std::floor(v) || v < 1.0)
                    throw std::invalid_argument("antenna grid values must be positive integers");
                s.antennas = static_cast<int>(v);
            }
            s.validate();
        }
        if (!(ladder_load > 0.0 && ladder_load <= 1.0))
            throw std::invalid_argument("ladder load must lie in (0, 1]");
        if (ladder_trials < 1)
            throw std::invalid_argument("ladder trials must be >= 1");
        for (int n : ladder)
            if (n < 1)
                throw std::invalid_argument("ladder antenna counts must be positive");
    }
};

// Evenly spaced grid including both end points.
inline std::vector<double> linspace(double lo, double hi, int points)
{
    if (points < 1)
        throw std::invalid_argument("linspace: need at least one point");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    return g;
}

// Power vs. rate for K = 8, N = 10: 15 rates on [0.1, 5].
inline ExperimentConfig rate_sweep_defaults()
{
    ExperimentConfig cfg;
    cfg.sweep = SweepVariable::Rate;
    cfg.grid = linspace(0.1, 5.0, 15);
    return cfg;
}

// Power vs. N for K = 8 with per-user rates uniform on [2, 3].
inline ExperimentConfig antenna_sweep_defaults()
{
    ExperimentConfig cfg;
    cfg.sweep = SweepVariable::Antennas;
    cfg.grid = {8, 10, 12, 16, 20, 24, 32, 40, 48, 64};
    cfg.rates = {2.0, 3.0};
    return cfg;
}

struct ResultsRow {
    double value = 0.0;
    Scheme scheme = Scheme::OLP;
    double avg_power = 0.0;
    double std_power = 0.0;
    int trials_used = 0;
    int infeasible = 0;
    double violation_rate = 0.0;
    double rate_mse = 0.0;
    // Total power of every trial in trial order, NaN where infeasible.
    std::vector<double> trial_powers;
};

struct ResultsTable {
    SweepVariable sweep = SweepVariable::Rate;
    std::vector<ResultsRow> rows;

    const ResultsRow *find(double value, Scheme s) const
    {
        for (const auto &r : rows)
            if (r.value == value && r.scheme == s)
                return &r;
        return nullptr;
    }
};

// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <class Fn> void parallel_for(int count, int threads, Fn &&fn)
{
    if (threads <= 0)
        threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < count && !failed; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true))
                        error = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

// Outcome of one scheme on one channel realization.
struct SchemeOutcome {
    bool feasible = false;
    double power = std::numeric_limits<double>::quiet_NaN();
    int violations = 0;        // users with SINR below target
    double rate_sq_error = 0.0; // sum over users of ((log2(1+SINR) - r) / r)^2
    int users = 0;
};

inline constexpr double kViolationSlack = 1e-6;

inline SchemeOutcome score(const exact::PrecoderSolution &sol, std::span<const UserState> users)
{
    SchemeOutcome out;
    out.feasible = true;
    out.power = sol.total_power;
    out.users = static_cast<int>(users.size());
    for (std::size_t k = 0; k < users.size(); ++k) {
        const double sinr = sol.sinr(static_cast<Eigen::Index>(k));
        if (sinr < users[k].sinr_target * (1.0 - kViolationSlack))
            ++out.violations;
        const double err = (sinr_to_rate(std::max(sinr, 0.0)) - users[k].rate) / users[k].rate;
        out.rate_sq_error += err * err;
    }
    return out;
}

inline exact::PrecoderSolution build_precoder(Scheme s, const CMatrix &H, std::span<const UserState> users,
                                              double sigma2, const exact::SolverOptions &opts = {})
{
    const RVector gamma = sinr_targets(users);
    const int n = static_cast<int>(H.rows());
    switch (s) {
    case Scheme::OLP: return exact::olp(H, gamma, sigma2, opts);
    case Scheme::AOLP: return asympt::aolp(H, users, sigma2);
    case Scheme::RZF: {
        const auto reg = asympt::rzf_rho_star(users, n);
        return exact::heuristic(H, RVector::Ones(gamma.size()), reg.rho_star, gamma, sigma2);
    }
    case Scheme::PARZF: {
        const auto reg = asympt::parzf_rho_star(gamma, static_cast<double>(gamma.size()) / n);
        return exact::heuristic(H, asympt::position_aware_weights(users), reg.rho_star, gamma, sigma2);
    }
    case Scheme::ZF: return exact::zf(H, gamma, sigma2);
    }
    throw std::logic_error("unknown scheme");
}

struct TrialOutcome {
    std::vector<SchemeOutcome> schemes; // parallel to ExperimentConfig::schemes
    SchemeOutcome closed_form;          // A-OLP directions with closed-form powers
};

namespace detail {

inline std::vector<double> draw_rates(Rng &rng, const RateSpec &spec, int count)
{
    std::vector<double> r(static_cast<std::size_t>(count), spec.lo);
    if (spec.hi > spec.lo) {
        std::uniform_real_distribution<double> u(spec.lo, spec.hi);
        for (auto &x : r)
            x = u(rng);
    }
    return r;
}

inline std::vector<UserState> draw_users(Rng &rng, const SystemConfig &sys, const RateSpec &rates,
                                         const std::vector<Position> *frozen)
{
    const auto positions = frozen ? *frozen : sample_positions(rng, sys.users, sys);
    const auto r = draw_rates(rng, rates, sys.users);
    return make_users(positions, r, sys);
}

inline std::vector<Position> frozen_positions(const ExperimentConfig &cfg, int count)
{
    auto rng = derive_stream(cfg.seed, kFrozenPositionStream);
    return sample_positions(rng, count, cfg.system);
}

inline SchemeOutcome guarded(Scheme s, const CMatrix &H, std::span<const UserState> users, double sigma2)
{
    try {
        return score(build_precoder(s, H, users, sigma2), users);
    } catch (const SolverError &) {
        return {};
    }
}

} // namespace detail

// System configuration and rate law at one grid point.
inline std::pair<SystemConfig, RateSpec> grid_point(const ExperimentConfig &cfg, double value)
{
    SystemConfig sys = cfg.system;
    RateSpec rates = cfg.rates;
    if (cfg.sweep == SweepVariable::Rate)
        rates = {value, value};
    else
        sys.antennas = static_cast<int>(value);
    return {sys, rates};
}

inline TrialOutcome simulate_trial(const ExperimentConfig &cfg, double value, int trial,
                                   const std::vector<Position> *frozen, bool closed_form)
{
    const auto [sys, rates] = grid_point(cfg, value);
    auto rng = derive_stream(cfg.seed, static_cast<std::uint64_t>(trial));
    const auto users = detail::draw_users(rng, sys, rates, frozen);
    const auto ch = draw_channel(rng, users, sys.antennas);

    TrialOutcome out;
    out.schemes.reserve(cfg.schemes.size());
    for (Scheme s : cfg.schemes)
        out.schemes.push_back(detail::guarded(s, ch.H, users, sys.sigma2));
    if (closed_form) {
        try {
            out.closed_form = score(asympt::aolp_closed_form(ch.H, users, sys.sigma2), users);
        } catch (const SolverError &) {
        }
    }
    return out;
}

inline std::vector<TrialOutcome> run_trials(const ExperimentConfig &cfg, double value, bool closed_form)
{
    std::optional<std::vector<Position>> frozen;
    if (cfg.freeze_positions)
        frozen = detail::frozen_positions(cfg, cfg.system.users);
    std::vector<TrialOutcome> out(static_cast<std::size_t>(cfg.trials));
    parallel_for(cfg.trials, cfg.threads, [&](int t) {
        out[static_cast<std::size_t>(t)] = simulate_trial(cfg, value, t, frozen ? &*frozen : nullptr, closed_form);
    });
    return out;
}

// Aggregates one scheme's outcomes in trial order.
inline ResultsRow aggregate(double value, Scheme scheme, const std::vector<SchemeOutcome> &outcomes)
{
    ResultsRow row;
    row.value = value;
    row.scheme = scheme;
    row.trial_powers.reserve(outcomes.size());
    double sum = 0.0;
    long violations = 0;
    long users = 0;
    double sq = 0.0;
    for (const auto &o : outcomes) {
        row.trial_powers.push_back(o.feasible ? o.power : std::numeric_limits<double>::quiet_NaN());
        if (!o.feasible) {
            ++row.infeasible;
            continue;
        }
        ++row.trials_used;
        sum += o.power;
        violations += o.violations;
        users += o.users;
        sq += o.rate_sq_error;
    }
    if (row.trials_used > 0) {
        row.avg_power = sum / row.trials_used;
        double var = 0.0;
        for (double p : row.trial_powers)
            if (!std::isnan(p))
                var += (p - row.avg_power) * (p - row.avg_power);
        row.std_power = row.trials_used > 1 ? std::sqrt(var / (row.trials_used - 1)) : 0.0;
    } else {
        row.avg_power = std::numeric_limits<double>::quiet_NaN();
        row.std_power = std::numeric_limits<double>::quiet_NaN();
    }
    row.violation_rate = users > 0 ? static_cast<double>(violations) / static_cast<double>(users) : 0.0;
    row.rate_mse = users > 0 ? sq / static_cast<double>(users) : 0.0;
    return row;
}

inline void sort_rows(std::vector<ResultsRow> &rows)
{
    std::stable_sort(rows.begin(), rows.end(), [](const ResultsRow &a, const ResultsRow &b) {
        if (a.value != b.value)
            return a.value < b.value;
        return scheme_name(a.scheme) < scheme_name(b.scheme);
    });
}

inline ResultsTable run_sweep(const ExperimentConfig &cfg)
{
    cfg.validate();
    ResultsTable table;
    table.sweep = cfg.sweep;
    for (double value : cfg.grid) {
        const auto trials = run_trials(cfg, value, false);
        for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
            std::vector<SchemeOutcome> col;
            col.reserve(trials.size());
            for (const auto &t : trials)
                col.push_back(t.schemes[s]);
            table.rows.push_back(aggregate(value, cfg.schemes[s], col));
        }
    }
    sort_rows(table.rows);
    return table;
}

struct ClosedFormRow {
    double value = 0.0;
    double rate_mse = 0.0;
    double violation_rate = 0.0;
    int trials_used = 0;
};

struct LadderRow {
    int antennas = 0;
    int users = 0;
    double median_power_gap = 0.0;  // |P - P_bar| / P_bar of the optimal precoder
    double median_lambda_gap = 0.0; // max_k |lambda_k - lambda_bar_k| / lambda_bar_k
    double violation_rate = 0.0;    // closed-form powers
    int trials_used = 0;
};

struct ValidationReport {
    ResultsTable sweep;               // per-scheme power, violation rate and rate MSE
    std::vector<ClosedFormRow> closed_form;
    std::vector<LadderRow> ladder;
};

inline double median(std::vector<double> v)
{
    if (v.empty())
        return std::numeric_limits<double>::quiet_NaN();
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0)
        m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
    return m;
}

// Finite-N accuracy of the closed-form multipliers and power at one antenna
// count with K = round(load * N) users.
inline LadderRow concentration_point(const ExperimentConfig &cfg, int antennas)
{
    SystemConfig sys = cfg.system;
    sys.antennas = antennas;
    sys.users = std::max(1, static_cast<int>(std::lround(cfg.ladder_load * antennas)));
    sys.validate();

    struct Sample {
        bool ok = false;
        double power_gap = 0.0;
        double lambda_gap = 0.0;
        int violations = 0;
    };
    std::optional<std::vector<Position>> frozen;
    if (cfg.freeze_positions)
        frozen = detail::frozen_positions(cfg, sys.users);
    const std::uint64_t base = stream_key(cfg.seed, 0x6c61646465720000ULL + static_cast<std::uint64_t>(antennas));
    std::vector<Sample> samples(static_cast<std::size_t>(cfg.ladder_trials));
    parallel_for(cfg.ladder_trials, cfg.threads, [&](int t) {
        auto rng = derive_stream(base, static_cast<std::uint64_t>(t));
        const auto users = detail::draw_users(rng, sys, cfg.ladder_rates, frozen ? &*frozen : nullptr);
        const auto ch = draw_channel(rng, users, sys.antennas);
        Sample &s = samples[static_cast<std::size_t>(t)];
        try {
            const auto sol = exact::olp(ch.H, sinr_targets(users), sys.sigma2);
            const auto eq = asympt::theorem1(users, sys.sigma2, sys.antennas);
            s.power_gap = std::abs(sol.total_power - eq.P_bar) / eq.P_bar;
            s.lambda_gap = ((*sol.lambda - eq.lambda_bar).array().abs() / eq.lambda_bar.array()).maxCoeff();
            s.violations = score(asympt::aolp_closed_form(ch.H, users, sys.sigma2), users).violations;
            s.ok = true;
        } catch (const SolverError &) {
        }
    });

    LadderRow row;
    row.antennas = sys.antennas;
    row.users = sys.users;
    std::vector<double> pg, lg;
    long violations = 0;
    for (const auto &s : samples) {
        if (!s.ok)
            continue;
        pg.push_back(s.power_gap);
        lg.push_back(s.lambda_gap);
        violations += s.violations;
    }
    row.trials_used = static_cast<int>(pg.size());
    row.median_power_gap = median(pg);
    row.median_lambda_gap = median(lg);
    row.violation_rate =
        row.trials_used > 0 ? static_cast<double>(violations) / (static_cast<double>(row.trials_used) * sys.users) : 0.0;
    return row;
}

inline ValidationReport validate(const ExperimentConfig &cfg)
{
    cfg.validate();
    ValidationReport rep;
    rep.sweep.sweep = cfg.sweep;
    for (double value : cfg.grid) {
        const auto trials = run_trials(cfg, value, true);
        std::vector<SchemeOutcome> cf;
        for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
            std::vector<SchemeOutcome> col;
            for (const auto &t : trials)
                col.push_back(t.schemes[s]);
            rep.sweep.rows.push_back(aggregate(value, cfg.schemes[s], col));
        }
        for (const auto &t : trials)
            cf.push_back(t.closed_form);
        const auto agg = aggregate(value, Scheme::AOLP, cf);
        rep.closed_form.push_back({value, agg.rate_mse, agg.violation_rate, agg.trials_used});
    }
    sort_rows(rep.sweep.rows);
    for (int n : cfg.ladder)
        rep.ladder.push_back(concentration_point(cfg, n));
    return rep;
}

} // namespace mimo::harness

#endif
