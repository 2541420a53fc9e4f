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

#ifndef MIMO_COMMON_HPP
#define MIMO_COMMON_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace mimo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using Position = Eigen::Vector2d;

// Base class of every numerical failure raised by the library.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A fixed-point iteration ran out of iterations. Carries the last iterate.
class ConvergenceError : public SolverError {
public:
    ConvergenceError(const std::string &what, RVector last_iterate, double residual, int iterations)
        : SolverError(what), last_iterate_(std::move(last_iterate)), residual_(residual), iterations_(iterations) {}

    const RVector &last_iterate() const noexcept { return last_iterate_; }
    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    RVector last_iterate_;
    double residual_;
    int iterations_;
};

// Regularized Gram matrix (or HᴴH for zero forcing) could not be factorized.
class FactorizationError : public SolverError {
public:
    using SolverError::SolverError;
};

// SINR targets are unreachable with the chosen directions (singular D or a
// nonpositive power).
class InfeasibleError : public SolverError {
public:
    using SolverError::SolverError;
};

} // namespace mimo

#endif
