// Copyright 2026 The esscher authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace esscher {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A precondition, type invariant, or interface contract was violated.
struct ContractError : Error {
    using Error::Error;
};

/// An iterative procedure hit its iteration cap before reaching tolerance.
struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& msg, double last_residual = 0.0)
        : Error(msg), residual(last_residual) {}
    double residual;
};

/// The requested constraints cannot be met (e.g. targets outside spectra).
struct InfeasibleError : ContractError {
    using ContractError::ContractError;
};

inline bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

/// Exact base-2 logarithm of a power-of-two dimension.
inline int log2_exact(Eigen::Index n, const char* what = "dimension") {
    if (!is_power_of_two(n))
        throw ContractError(std::string(what) + " must be a power of two, got " +
                            std::to_string(n));
    int k = 0;
    while ((Eigen::Index{1} << k) < n) ++k;
    return k;
}

}  // namespace esscher
