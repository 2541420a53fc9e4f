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

#ifndef MIMO_EXACT_HPP
#define MIMO_EXACT_HPP

// Finite-N linear precoders for the downlink power-minimization problem
//
//     minimize tr(V V^H)  s.t.  SINR_k(V) >= gamma_k,  k = 1..K.
//
// Every precoder here has columns v_k = a_k sqrt(p_k), where the directions
// a_k come from a regularized Gram solve and the powers p_k meet each SINR
// target with equality.

#include "common.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace mimo::exact {

struct SolverOptions {
    double tol = 1e-10;       // relative sup-norm change of the multipliers
    int max_iter = 5000;
    double lambda_init = 0.0; // <= 0 selects gamma_k / N per user
    // Called with every iterate, starting with the initial point.
    std::function<void(const RVector &)> observer;

    void validate() const
    {
        if (!(tol > 0.0))
            throw std::invalid_argument("SolverOptions: tol must be positive");
        if (max_iter < 1)
            throw std::invalid_argument("SolverOptions: max_iter must be >= 1");
    }
};

struct LambdaSolution {
    RVector lambda;
    int iterations = 0;
    double residual = 0.0;
};

struct Evaluation {
    RVector sinr;
    double total_power = 0.0;
};

struct PrecoderSolution {
    CMatrix V;                     // N x K, column v_k = a_k sqrt(p_k)
    std::optional<RVector> lambda; // set only by the optimal precoder
    RVector p;                     // per-user powers
    RVector sinr;                  // achieved SINR
    double total_power = 0.0;
    int iterations = 0;
    bool converged = true;
};

namespace detail {

inline std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

inline void check_shapes(const CMatrix &H, Eigen::Index targets, const char *who)
{
    if (H.cols() == 0 || H.rows() == 0)
        throw std::invalid_argument(std::string(who) + ": empty channel matrix");
    if (targets != H.cols())
        throw std::invalid_argument(std::string(who) + ": expected " + std::to_string(H.cols()) +
                                    " per-user values, got " + std::to_string(targets));
}

// Hermitian factorization of sum_i w_i h_i h_i^H + N*ridge*I.
inline Eigen::LLT<CMatrix> factor_gram(const CMatrix &H, const RVector &weights, double ridge)
{
    const auto n = H.rows();
    CMatrix gram = H * weights.asDiagonal() * H.adjoint();
    gram.diagonal().array() += static_cast<double>(n) * ridge;
    Eigen::LLT<CMatrix> llt(gram);
    if (llt.info() != Eigen::Success)
        throw FactorizationError("regularized Gram matrix is not positive definite");
    return llt;
}

} // namespace detail

// Column k is (sum_i w_i h_i h_i^H + N*ridge*I)^{-1} h_k.
inline CMatrix directions(const CMatrix &H, const RVector &weights, double ridge)
{
    detail::check_shapes(H, weights.size(), "directions");
    if (ridge < 0.0)
        throw std::invalid_argument("directions: ridge must be nonnegative");
    auto llt = detail::factor_gram(H, weights, ridge);
    if (!(llt.rcond() > 1e3 * std::numeric_limits<double>::epsilon()))
        throw FactorizationError("regularized Gram matrix is numerically singular");
    return llt.solve(H);
}

// Fixed point of (1 + 1/gamma_k) lambda_k = 1 / h_k^H (sum_i lambda_i h_i h_i^H + N I)^{-1} h_k.
inline LambdaSolution solve_lambda(const CMatrix &H, const RVector &gamma, const SolverOptions &opts = {})
{
    detail::check_shapes(H, gamma.size(), "solve_lambda");
    opts.validate();
    if ((gamma.array() <= 0.0).any())
        throw std::invalid_argument("solve_lambda: SINR targets must be positive");
    if (H.cols() > H.rows())
        throw std::invalid_argument("solve_lambda: more users than antennas");

    const auto n = static_cast<double>(H.rows());
    const RVector gain = gamma.array() / (1.0 + gamma.array());
    RVector lambda = opts.lambda_init > 0.0 ? RVector::Constant(gamma.size(), opts.lambda_init) : RVector(gamma / n);
    if (opts.observer)
        opts.observer(lambda);

    double residual = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= opts.max_iter; ++it) {
        const auto llt = detail::factor_gram(H, lambda, 1.0);
        const CMatrix a = llt.solve(H);
        // h_k^H a_k is real and positive for a PD Gram matrix.
        const RVector quad = (H.conjugate().array() * a.array()).colwise().sum().real().transpose();
        const RVector next = gain.array() / quad.array();
        residual = ((next - lambda).array().abs() / next.array()).maxCoeff();
        lambda = next;
        if (opts.observer)
            opts.observer(lambda);
        if (!std::isfinite(residual))
            break;
        if (residual <= opts.tol)
            return {lambda, it, residual};
    }
    throw ConvergenceError("solve_lambda: no convergence within " + std::to_string(opts.max_iter) +
                               " iterations (residual " + std::to_string(residual) + ")",
                           lambda, residual, opts.max_iter);
}

inline Evaluation evaluate(const CMatrix &H, const CMatrix &V, double sigma2)
{
    if (H.rows() != V.rows() || H.cols() != V.cols())
        throw std::invalid_argument("evaluate: channel and precoder shapes differ");
    const CMatrix g = H.adjoint() * V; // g(k, i) = h_k^H v_i
    const RMatrix gain = g.cwiseAbs2();
    Evaluation out;
    out.sinr.resize(H.cols());
    for (Eigen::Index k = 0; k < H.cols(); ++k) {
        const double signal = gain(k, k);
        const double interference = gain.row(k).sum() - signal;
        out.sinr(k) = signal / (interference + sigma2);
    }
    out.total_power = V.squaredNorm();
    return out;
}

// Powers p with SINR_k = gamma_k for all k given fixed directions, i.e. the
// solution of D p = sigma2 * 1. Rows are scaled by gamma_k so that zero
// targets give zero power.
inline RVector power_allocation(const CMatrix &H, const CMatrix &dirs, const RVector &gamma, double sigma2)
{
    detail::check_shapes(H, gamma.size(), "power_allocation");
    if (dirs.rows() != H.rows() || dirs.cols() != H.cols())
        throw std::invalid_argument("power_allocation: direction matrix has the wrong shape");
    if ((gamma.array() < 0.0).any())
        throw std::invalid_argument("power_allocation: SINR targets must be nonnegative");

    const RMatrix gain = (H.adjoint() * dirs).cwiseAbs2();
    RMatrix d = -(gamma.asDiagonal() * gain);
    d.diagonal() = gain.diagonal();
    const Eigen::PartialPivLU<RMatrix> lu(d);
    if (!(lu.rcond() > 1e-13))
        throw InfeasibleError("power_allocation: SINR coupling matrix is singular "
                              "(duplicate or degenerate channel directions?)");
    const RVector p = lu.solve(RVector(sigma2 * gamma));
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        if (!std::isfinite(p(k)) || p(k) < 0.0 || (gamma(k) > 0.0 && p(k) <= 0.0))
            throw InfeasibleError("power_allocation: SINR targets unreachable with these directions "
                                  "(user " + std::to_string(k) + " needs power " + detail::sci(p(k)) + ")");
    }
    return p;
}

namespace detail {

inline PrecoderSolution assemble(const CMatrix &H, const CMatrix &dirs, const RVector &p, double sigma2)
{
    PrecoderSolution sol;
    sol.V = dirs * p.cwiseSqrt().asDiagonal();
    sol.p = p;
    auto ev = evaluate(H, sol.V, sigma2);
    sol.sinr = std::move(ev.sinr);
    sol.total_power = ev.total_power;
    return sol;
}

} // namespace detail

// Optimal linear precoder: fixed-point multipliers, then exact powers.
inline PrecoderSolution olp(const CMatrix &H, const RVector &gamma, double sigma2, const SolverOptions &opts = {})
{
    const auto lam = solve_lambda(H, gamma, opts);
    const CMatrix dirs = directions(H, lam.lambda, 1.0);
    auto sol = detail::assemble(H, dirs, power_allocation(H, dirs, gamma, sigma2), sigma2);
    sol.lambda = lam.lambda;
    sol.iterations = lam.iterations;
    return sol;
}

// Weighted-RZF family: directions (sum alpha_i h_i h_i^H + N rho I)^{-1} h_k
// with exact powers. alpha = 1 is RZF, alpha_k = 1/l_k is position-aware RZF.
inline PrecoderSolution heuristic(const CMatrix &H, const RVector &alpha, double rho, const RVector &gamma,
                                  double sigma2)
{
    if (!(rho > 0.0))
        throw std::invalid_argument("heuristic: rho must be positive");
    const CMatrix dirs = directions(H, alpha, rho);
    return detail::assemble(H, dirs, power_allocation(H, dirs, gamma, sigma2), sigma2);
}

inline PrecoderSolution zf(const CMatrix &H, const RVector &gamma, double sigma2)
{
    detail::check_shapes(H, gamma.size(), "zf");
    if (H.cols() > H.rows())
        throw std::invalid_argument("zf: more users than antennas");
    const CMatrix gram = H.adjoint() * H;
    const Eigen::LLT<CMatrix> llt(gram);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e3 * std::numeric_limits<double>::epsilon()))
        throw FactorizationError("zf: channel matrix is rank deficient");
    const CMatrix dirs = H * llt.solve(CMatrix::Identity(H.cols(), H.cols()));
    // h_k^H d_k = 1, so the received signal power equals p_k.
    return detail::assemble(H, dirs, sigma2 * gamma, sigma2);
}

} // namespace mimo::exact

#endif
