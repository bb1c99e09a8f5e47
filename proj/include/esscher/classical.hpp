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

// Exponential tilting of finite distributions and the constrained
// minimum-relative-entropy solver with duality certification. The dual
//   g(lambda) = lambda . m - log E_P[exp(lambda . X)]
// is concave; its unique maximizer lambda* yields the tilted optimum
// Q* = esscher_transform(P, X, lambda*).

#include <cmath>
#include <limits>
#include <vector>

#include "esscher/dual_ascent.hpp"
#include "esscher/numerics.hpp"

namespace esscher::classical {

/// Probability vector over a finite sample space.
class FiniteDistribution {
public:
    explicit FiniteDistribution(RealVector weights) : w_(std::move(weights)) {
        require_finite(w_, "FiniteDistribution");
        if (w_.size() == 0) throw ContractError("FiniteDistribution: empty sample space");
        if (w_.minCoeff() < 0.0)
            throw ContractError("FiniteDistribution: negative weight " +
                                std::to_string(w_.minCoeff()));
        const double sum = w_.sum();
        if (std::abs(sum - 1.0) > 1e-12)
            throw ContractError("FiniteDistribution: weights sum to " + std::to_string(sum));
        strictly_positive_ = (w_.minCoeff() > 0.0);
    }

    Eigen::Index size() const { return w_.size(); }
    const RealVector& weights() const { return w_; }
    double operator()(Eigen::Index i) const { return w_(i); }
    bool strictly_positive() const { return strictly_positive_; }

private:
    RealVector w_;
    bool strictly_positive_;
};

/// Row omega holds X(omega) in R^d.
struct RandomVector {
    explicit RandomVector(RealMatrix v) : values(std::move(v)) {
        if (!values.allFinite()) throw ContractError("RandomVector: non-finite entries");
    }
    Eigen::Index omega_size() const { return values.rows(); }
    Eigen::Index dim() const { return values.cols(); }
    RealMatrix values;
};

struct ClassicalEsscherProblem {
    ClassicalEsscherProblem(FiniteDistribution p, RandomVector x, RealVector target)
        : P(std::move(p)), X(std::move(x)), m(std::move(target)) {
        if (X.omega_size() != P.size())
            throw ContractError("ClassicalEsscherProblem: |Omega| mismatch between P and X");
        if (m.size() != X.dim())
            throw ContractError("ClassicalEsscherProblem: m dimension mismatch");
        if (X.dim() + 1 > P.size())
            throw ContractError("ClassicalEsscherProblem: need d + 1 <= |Omega|, got d = " +
                                std::to_string(X.dim()) + ", |Omega| = " +
                                std::to_string(P.size()));
        for (Eigen::Index i = 0; i < m.size(); ++i) {
            const double lo = X.values.col(i).minCoeff();
            const double hi = X.values.col(i).maxCoeff();
            if (!(lo < m(i) && m(i) < hi))
                throw InfeasibleError("ClassicalEsscherProblem: m[" + std::to_string(i) + "] = " +
                                      std::to_string(m(i)) + " not strictly inside [" +
                                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
    }

    FiniteDistribution P;
    RandomVector X;
    RealVector m;
};

struct ClassicalEsscherSolution {
    RealVector lambda_star;
    FiniteDistribution Q_star;
    double dual_value = 0.0;
    double primal_value = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    int dropped_atoms = 0;  // zero-probability atoms removed before solving
};

/// Tilted distribution P_theta(w) = exp(theta.X(w)) P(w) / E_P[exp(theta.X)],
/// evaluated with max-shifted exponents.
inline FiniteDistribution esscher_transform(const FiniteDistribution& p, const RandomVector& x,
                                            const RealVector& theta) {
    if (x.omega_size() != p.size()) throw ContractError("esscher_transform: |Omega| mismatch");
    if (theta.size() != x.dim()) throw ContractError("esscher_transform: theta dimension mismatch");
    const RealVector s = x.values * theta;
    double shift = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (p(i) == 0.0) continue;
        if (!std::isfinite(s(i)))
            throw std::range_error("esscher_transform: exponent overflow at atom " +
                                   std::to_string(i));
        shift = std::max(shift, s(i));
    }
    RealVector w(p.size());
    for (Eigen::Index i = 0; i < w.size(); ++i)
        w(i) = p(i) == 0.0 ? 0.0 : p(i) * std::exp(s(i) - shift);
    const double z = w.sum();
    if (!(z > 0.0) || !std::isfinite(z))
        throw std::range_error("esscher_transform: normalizer underflow");
    return FiniteDistribution(w / z);
}

/// D(Q||P) in nats; +infinity when Q is not absolutely continuous w.r.t. P.
inline double relative_entropy(const FiniteDistribution& q, const FiniteDistribution& p) {
    if (q.size() != p.size()) throw ContractError("relative_entropy: size mismatch");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        if (q(i) == 0.0) continue;  // 0 log 0 = 0
        if (p(i) == 0.0) return std::numeric_limits<double>::infinity();
        sum += q(i) * std::log(q(i) / p(i));
    }
    return sum;
}

struct DualEvaluation {
    double value = 0.0;       // lambda.m - log E_P[exp(lambda.X)]
    RealVector gradient;      // m - E_{P_lambda}[X]
};

inline DualEvaluation dual_objective(const FiniteDistribution& p, const RandomVector& x,
                                     const RealVector& m, const RealVector& lambda) {
    const RealVector s = x.values * lambda;
    double shift = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (p(i) == 0.0) continue;
        if (!std::isfinite(s(i)))
            throw std::range_error("dual_objective: exponent overflow at atom " +
                                   std::to_string(i));
        shift = std::max(shift, s(i));
    }
    double z = 0.0;
    RealVector mean = RealVector::Zero(x.dim());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) == 0.0) continue;
        const double wi = p(i) * std::exp(s(i) - shift);
        z += wi;
        mean += wi * x.values.row(i).transpose();
    }
    DualEvaluation out;
    out.value = lambda.dot(m) - (shift + std::log(z));
    out.gradient = m - mean / z;
    return out;
}

struct SolverOptions {
    double tol = 1e-9;
    int max_iterations = 10000;
    bool newton = false;  // Newton direction with backtracking instead of plain ascent
};

namespace detail {

// P_lambda-covariance of X, the dual Hessian (negated).
inline RealMatrix tilted_covariance(const FiniteDistribution& p, const RandomVector& x,
                                    const RealVector& lambda) {
    const FiniteDistribution pl = esscher_transform(p, x, lambda);
    RealVector mean = x.values.transpose() * pl.weights();
    RealMatrix cov = RealMatrix::Zero(x.dim(), x.dim());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const RealVector c = x.values.row(i).transpose() - mean;
        cov += pl(i) * c * c.transpose();
    }
    return cov;
}

}  // namespace detail

/// Maximizes the concave dual with backtracking line search (Newton behind
/// the options flag). Zero-probability atoms of P are dropped beforehand.
inline ClassicalEsscherSolution solve_lambda(const ClassicalEsscherProblem& problem,
                                             const SolverOptions& options = {}) {
    // Reduce to the effective sample space where P > 0.
    std::vector<Eigen::Index> live;
    for (Eigen::Index i = 0; i < problem.P.size(); ++i)
        if (problem.P(i) > 0.0) live.push_back(i);
    const int dropped = static_cast<int>(problem.P.size() - live.size());
    RealVector pw(live.size());
    RealMatrix xv(live.size(), problem.X.dim());
    for (std::size_t k = 0; k < live.size(); ++k) {
        pw(static_cast<Eigen::Index>(k)) = problem.P(live[k]);
        xv.row(static_cast<Eigen::Index>(k)) = problem.X.values.row(live[k]);
    }
    const FiniteDistribution p(pw / pw.sum());
    const RandomVector x(xv);
    for (Eigen::Index i = 0; i < problem.m.size(); ++i) {
        const double lo = xv.col(i).minCoeff(), hi = xv.col(i).maxCoeff();
        if (!(lo < problem.m(i) && problem.m(i) < hi))
            throw InfeasibleError("solve_lambda: m[" + std::to_string(i) +
                                  "] infeasible on the effective sample space");
    }

    esscher::detail::ConcaveEval eval = [&](const RealVector& lambda) {
        const DualEvaluation e = dual_objective(p, x, problem.m, lambda);
        return std::make_pair(e.value, e.gradient);
    };
    esscher::detail::DirectionHook hook;
    if (options.newton)
        hook = [&](const RealVector& lambda, const RealVector& grad) -> RealVector {
            RealMatrix hess = detail::tilted_covariance(p, x, lambda);
            hess.diagonal().array() += 1e-14;
            return hess.ldlt().solve(grad);
        };
    esscher::detail::AscentResult res;
    try {
        res = esscher::detail::maximize_concave(eval, RealVector::Zero(problem.m.size()), options.tol,
                                       options.max_iterations,
                                       std::numeric_limits<double>::infinity(), hook);
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string("solve_lambda: ") + e.what(), e.residual);
    }

    // Re-inflate Q* over the original Omega (zeros on dropped atoms).
    const FiniteDistribution q_eff = esscher_transform(p, x, res.x);
    RealVector q_full = RealVector::Zero(problem.P.size());
    for (std::size_t k = 0; k < live.size(); ++k) q_full(live[k]) = q_eff(static_cast<Eigen::Index>(k));

    ClassicalEsscherSolution out{res.x, FiniteDistribution(q_full)};
    out.dual_value = res.value;
    out.primal_value = relative_entropy(out.Q_star, problem.P);
    out.gradient_norm = res.gradient.norm();
    out.iterations = res.iterations;
    out.dropped_atoms = dropped;
    return out;
}

struct DualityReport {
    double gap = 0.0;               // primal - dual, >= -1e-10 at optimum
    RealVector constraint_residuals;  // E_{Q*}[X] - m
};

inline DualityReport verify_duality(const ClassicalEsscherSolution& solution,
                                    const ClassicalEsscherProblem& problem) {
    DualityReport report;
    report.gap = solution.primal_value - solution.dual_value;
    report.constraint_residuals =
        problem.X.values.transpose() * solution.Q_star.weights() - problem.m;
    return report;
}

}  // namespace esscher::classical
