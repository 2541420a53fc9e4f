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

// Command-line front end: Monte Carlo sweeps, validation report and a
// single-instance dump of every precoder.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <mimo/mimo.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace mimo;
using namespace mimo::harness;

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> threads;
    std::string out;
    std::string plot;
    std::string schemes;
    bool freeze = false;
};

void add_common(CLI::App *cmd, CommonOptions &o)
{
    cmd->add_option("--config", o.config, "Key-value experiment configuration file");
    cmd->add_option("--seed", o.seed, "Master random seed");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per grid point")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--out", o.out, "Write results as CSV to this path");
    cmd->add_option("--plot", o.plot, "Write an SVG plot to this path");
    cmd->add_option("--schemes", o.schemes, "Comma-separated subset of ZF,RZF,PA-RZF,A-OLP,OLP");
    cmd->add_flag("--freeze-positions", o.freeze, "Reuse one set of user positions for all trials");
}

ExperimentConfig resolve(ExperimentConfig cfg, const CommonOptions &o)
{
    if (!o.config.empty())
        cfg = load_config(o.config, std::move(cfg));
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.trials)
        cfg.trials = *o.trials;
    if (o.threads)
        cfg.threads = *o.threads;
    if (!o.schemes.empty())
        cfg.schemes = parse_schemes(o.schemes);
    if (o.freeze)
        cfg.freeze_positions = true;
    cfg.validate();
    return cfg;
}

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

void print_table(const ResultsTable &t)
{
    std::printf("%-10s %-7s %-14s %-14s %7s %10s %10s %10s\n", sweep_name(t.sweep).data(), "scheme", "avg_power_W",
                "std_power_W", "trials", "infeasible", "violation", "rate_mse");
    for (const auto &r : t.rows)
        std::printf("%-10.4g %-7s %-14.6e %-14.6e %7d %10d %10.3e %10.3e\n", r.value, scheme_name(r.scheme).data(),
                    r.avg_power, r.std_power, r.trials_used, r.infeasible, r.violation_rate, r.rate_mse);
}

void write_outputs(const ResultsTable &t, const CommonOptions &o)
{
    if (!o.out.empty()) {
        write_csv(t, o.out);
        std::cerr << "wrote " << o.out << '\n';
    }
    if (!o.plot.empty()) {
        emit_plot(t, o.plot);
        std::cerr << "wrote " << o.plot << '\n';
    }
}

void print_vector(const char *name, const RVector &v)
{
    std::printf("    %-7s", name);
    for (Eigen::Index i = 0; i < v.size(); ++i)
        std::printf(" %12.5e", v(i));
    std::printf("\n");
}

int run_single(const ExperimentConfig &cfg, std::optional<double> rate, int trial)
{
    RateSpec rates = cfg.rates;
    if (rate)
        rates = {*rate, *rate};
    const SystemConfig &sys = cfg.system;
    auto rng = derive_stream(cfg.seed, static_cast<std::uint64_t>(trial));
    const auto positions = cfg.freeze_positions ? harness::detail::frozen_positions(cfg, sys.users)
                                                : sample_positions(rng, sys.users, sys);
    const auto users = make_users(positions, harness::detail::draw_rates(rng, rates, sys.users), sys);
    const auto ch = draw_channel(rng, users, sys.antennas);

    std::printf("N=%d K=%d sigma2=%s W seed=%llu trial=%d\n", sys.antennas, sys.users, sci(sys.sigma2).c_str(),
                static_cast<unsigned long long>(cfg.seed), trial);
    std::printf("  %-5s %10s %14s %8s %10s\n", "user", "dist_m", "attenuation", "rate", "gamma");
    for (std::size_t k = 0; k < users.size(); ++k)
        std::printf("  %-5zu %10.2f %14.6e %8.4f %10.4f\n", k, users[k].position.norm(), users[k].attenuation,
                    users[k].rate, users[k].sinr_target);

    const auto eq = asympt::theorem1(users, sys.sigma2, sys.antennas);
    std::printf("\nclosed form: xi=%.6f A=%s P_bar=%s W\n", eq.xi, sci(eq.A).c_str(), sci(eq.P_bar).c_str());
    print_vector("lam_bar", eq.lambda_bar);
    print_vector("p_bar", eq.p_bar);

    int status = 0;
    for (Scheme s : cfg.schemes) {
        std::printf("\n%s\n", scheme_name(s).data());
        try {
            const auto sol = build_precoder(s, ch.H, users, sys.sigma2);
            if (s == Scheme::RZF)
                std::printf("    rho*   %12.5e\n", asympt::rzf_rho_star(users, sys.antennas).rho_star);
            if (s == Scheme::PARZF)
                std::printf("    rho*   %12.5e\n", asympt::parzf_rho_star(sinr_targets(users), sys.load()).rho_star);
            if (sol.lambda)
                print_vector("lambda", *sol.lambda);
            print_vector("p", sol.p);
            print_vector("sinr", sol.sinr);
            std::printf("    P      %12.5e W", sol.total_power);
            if (s == Scheme::OLP)
                std::printf("  (%d iterations)", sol.iterations);
            std::printf("\n");
        } catch (const ConvergenceError &e) {
            std::printf("    diverged: %s\n", e.what());
            status = kNumericalError;
        } catch (const SolverError &e) {
            std::printf("    infeasible: %s\n", e.what());
        }
    }
    return status;
}

void print_validation(const ValidationReport &rep)
{
    std::printf("Per-scheme relative rate MSE (exact power allocation)\n");
    print_table(rep.sweep);
    std::printf("\nClosed-form powers on A-OLP directions\n");
    std::printf("%-10s %12s %12s %8s\n", sweep_name(rep.sweep.sweep).data(), "rate_mse", "violation", "trials");
    for (const auto &r : rep.closed_form)
        std::printf("%-10.4g %12.4e %12.4e %8d\n", r.value, r.rate_mse, r.violation_rate, r.trials_used);
    std::printf("\nConcentration ladder (optimal precoder vs closed form)\n");
    std::printf("%6s %6s %16s %16s %12s %8s\n", "N", "K", "med|P-Pb|/Pb", "med max|l-lb|/lb", "violation", "trials");
    for (const auto &r : rep.ladder)
        std::printf("%6d %6d %16.4e %16.4e %12.4e %8d\n", r.antennas, r.users, r.median_power_gap,
                    r.median_lambda_gap, r.violation_rate, r.trials_used);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Power-minimizing linear precoding for the multi-user MIMO downlink"};
    app.require_subcommand(1);

    CommonOptions opts;
    auto *sweep_rate = app.add_subcommand("sweep-rate", "Average transmit power vs. per-user rate");
    auto *sweep_ant = app.add_subcommand("sweep-antennas", "Average transmit power vs. antenna count");
    auto *validate_cmd = app.add_subcommand("validate", "Rate MSE, closed-form accuracy and concentration report");
    auto *single = app.add_subcommand("single", "Solve one channel realization with every scheme");
    for (auto *cmd : {sweep_rate, sweep_ant, validate_cmd, single})
        add_common(cmd, opts);
    std::optional<double> single_rate;
    int single_trial = 0;
    single->add_option("--rate", single_rate, "Common per-user rate [bit/s/Hz] (default: config rate range)");
    single->add_option("--trial", single_trial, "Trial index selecting the random stream");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (sweep_rate->parsed() || sweep_ant->parsed()) {
            const auto cfg = resolve(sweep_rate->parsed() ? rate_sweep_defaults() : antenna_sweep_defaults(), opts);
            const auto table = run_sweep(cfg);
            print_table(table);
            write_outputs(table, opts);
            return 0;
        }
        if (validate_cmd->parsed()) {
            auto base = antenna_sweep_defaults();
            base.grid = {10};
            const auto rep = validate(resolve(base, opts));
            print_validation(rep);
            write_outputs(rep.sweep, opts);
            return 0;
        }
        auto base = antenna_sweep_defaults();
        base.grid = {static_cast<double>(base.system.antennas)};
        auto cfg = resolve(base, opts);
        return run_single(cfg, single_rate, single_trial);
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const SolverError &e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
