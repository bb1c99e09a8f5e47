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

// Exact quantum Esscher transform and the minimum-relative-entropy solver
// over density operators with moment constraints tr(sigma H_i) = m_i.
// The problem decomposes over supp(rho): the kernel component of the
// optimum is zero and on the support
//   sigma* = exp(lambda* . H + log rho) / tr(...)
// with lambda* maximizing the dual
//   g(lambda) = lambda . m - log tr exp(lambda . H + log rho),
// equivalently minimizing tr exp(lambda . (H - m) + log rho).

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "esscher/dual_ascent.hpp"
#include "esscher/numerics.hpp"

namespace esscher::quantum {

/// Observables normalized to unit operator norm on ingest; the scale
/// factors are retained so constraint targets can be rescaled consistently.
class ObservableSet {
public:
    ObservableSet(std::vector<HermitianMatrix> ops, std::vector<std::string> names = {})
        : names_(std::move(names)) {
        scales_ = RealVector::Ones(static_cast<Eigen::Index>(ops.size()));
        for (std::size_t i = 0; i < ops.size(); ++i) {
            if (ops[i].dim() != ops[0].dim())
                throw ContractError("ObservableSet: mixed dimensions");
            const double norm = operator_norm(ops[i].mat());
            if (norm > 1.0) {
                scales_(static_cast<Eigen::Index>(i)) = norm;
                ops_.emplace_back(ops[i].mat() / norm, 1e-10);
            } else {
                ops_.push_back(ops[i]);
            }
        }
        if (names_.empty())
            for (std::size_t i = 0; i < ops.size(); ++i) names_.push_back("H" + std::to_string(i));
        if (names_.size() != ops_.size()) throw ContractError("ObservableSet: name count mismatch");
    }

    Eigen::Index count() const { return static_cast<Eigen::Index>(ops_.size()); }
    Eigen::Index dim() const { return ops_.empty() ? 0 : ops_[0].dim(); }
    const std::vector<HermitianMatrix>& operators() const { return ops_; }
    const RealVector& scales() const { return scales_; }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<HermitianMatrix> ops_;
    std::vector<std::string> names_;
    RealVector scales_;
};

struct QuantumEsscherProblem {
    QuantumEsscherProblem(DensityOperator rho_in, ObservableSet h, RealVector target)
        : rho(std::move(rho_in)), H(std::move(h)), m(std::move(target)) {
        if (H.count() > 0 && H.dim() != rho.dim())
            throw ContractError("QuantumEsscherProblem: observable dimension mismatch");
        if (m.size() != H.count()) throw ContractError("QuantumEsscherProblem: m size mismatch");
        for (Eigen::Index i = 0; i < m.size(); ++i) {
            const Spectrum s = hermitian_eig(H.operators()[static_cast<std::size_t>(i)]);
            const double hi = s.eigenvalues(0), lo = s.eigenvalues(s.eigenvalues.size() - 1);
            const double mi = m(i) / H.scales()(i);
            if (!(lo < mi && mi < hi))
                throw InfeasibleError("QuantumEsscherProblem: m[" + std::to_string(i) + "] = " +
                                      std::to_string(m(i)) + " not strictly inside the spectrum of " +
                                      H.names()[static_cast<std::size_t>(i)]);
        }
    }

    /// Target rescaled to the normalized observables.
    RealVector scaled_m() const { return m.cwiseQuotient(H.scales()); }

    DensityOperator rho;
    ObservableSet H;
    RealVector m;
};

/// Direct-sum split of the space into supp(rho) and ker(rho), with the
/// ingested operators re-expressed in the support eigenbasis.
struct SupportDecomposition {
    Matrix support_projector;
    Matrix kernel_projector;
    Eigen::Index support_rank = 0;
    Matrix support_basis;  // dim x rank, columns span supp(rho)
    HermitianMatrix restricted_rho;
    std::vector<HermitianMatrix> restricted_H;
};

inline SupportDecomposition support_kernel_decompose(const DensityOperator& rho,
                                                     const ObservableSet& H,
                                                     double rank_tol = 1e-10) {
    const Spectrum s = hermitian_eig(rho.matrix());
    const double cutoff = rank_tol * std::max(s.eigenvalues(0), 0.0);
    Eigen::Index rank = 0;
    while (rank < s.eigenvalues.size() && s.eigenvalues(rank) > cutoff) ++rank;
    if (rank == 0) throw ContractError("support_kernel_decompose: rho is numerically zero");

    const Matrix basis = s.eigenvectors.leftCols(rank);
    const Matrix proj = basis * basis.adjoint();
    std::vector<HermitianMatrix> restricted_h;
    for (const HermitianMatrix& h : H.operators())
        restricted_h.emplace_back(Matrix(basis.adjoint() * h.mat() * basis), 1e-9);
    return SupportDecomposition{proj,
                                Matrix(identity(rho.dim()) - proj),
                                rank,
                                basis,
                                HermitianMatrix(Matrix(basis.adjoint() * rho.mat() * basis), 1e-9),
                                std::move(restricted_h)};
}

/// S(sigma||rho) in nats; +infinity when supp(sigma) escapes supp(rho)
/// beyond the rank tolerance. Computed spectrally on supp(rho).
inline double quantum_relative_entropy(const DensityOperator& sigma, const DensityOperator& rho,
                                       double rank_tol = 1e-10) {
    if (sigma.dim() != rho.dim())
        throw ContractError("quantum_relative_entropy: dimension mismatch");
    const Spectrum sr = hermitian_eig(rho.matrix());
    const double cutoff = rank_tol * std::max(sr.eigenvalues(0), 0.0);
    Eigen::Index rank = 0;
    while (rank < sr.eigenvalues.size() && sr.eigenvalues(rank) > cutoff) ++rank;
    const Matrix basis = sr.eigenvectors.leftCols(rank);
    const Matrix sigma_r = basis.adjoint() * sigma.mat() * basis;
    const double escaped = 1.0 - sigma_r.trace().real();
    if (escaped > rank_tol) return std::numeric_limits<double>::infinity();

    double entropy_term = 0.0;
    const Spectrum ss = hermitian_eig(Matrix(0.5 * (sigma_r + sigma_r.adjoint().eval())));
    for (Eigen::Index i = 0; i < ss.eigenvalues.size(); ++i)
        if (ss.eigenvalues(i) > 0.0) entropy_term += ss.eigenvalues(i) * std::log(ss.eigenvalues(i));

    RealVector log_eigs(rank);
    for (Eigen::Index i = 0; i < rank; ++i) log_eigs(i) = std::log(sr.eigenvalues(i));
    const Matrix log_rho_r = log_eigs.cast<Complex>().asDiagonal();
    const double cross_term = (sigma_r * log_rho_r).trace().real();
    return entropy_term - cross_term;
}

/// exp(theta . H + log rho) normalized by its trace (rho must be positive
/// definite; decompose onto the support first otherwise).
inline DensityOperator quantum_esscher_transform(const DensityOperator& rho,
                                                 const std::vector<HermitianMatrix>& ops,
                                                 const RealVector& theta) {
    if (theta.size() != static_cast<Eigen::Index>(ops.size()))
        throw ContractError("quantum_esscher_transform: theta size mismatch");
    const Spectrum s = hermitian_eig(rho.matrix());
    if (s.eigenvalues(s.eigenvalues.size() - 1) <= 0.0)
        throw ContractError(
            "quantum_esscher_transform: rho is singular; apply support_kernel_decompose first");
    Matrix a = matrix_log(rho.matrix()).mat();
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].dim() != rho.dim())
            throw ContractError("quantum_esscher_transform: observable dimension mismatch");
        a += theta(static_cast<Eigen::Index>(i)) * ops[i].mat();
    }
    const Spectrum sa = hermitian_eig(Matrix(0.5 * (a + a.adjoint().eval())));
    const double shift = sa.eigenvalues(0);  // exponent shift for overflow safety
    RealVector w(sa.eigenvalues.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(sa.eigenvalues(i) - shift);
    w /= w.sum();
    Matrix out = sa.eigenvectors * w.cast<Complex>().asDiagonal() * sa.eigenvectors.adjoint();
    return DensityOperator(rho.n_qubits(), HermitianMatrix(out, 1e-9));
}

struct LambdaGradient {
    double objective = 0.0;      // tr exp(lambda.(H-m) + log rho), may overflow to inf
    double log_objective = 0.0;  // always finite
    RealVector gradient;         // tr(exp(...)(H_i - m_i)), exact by trace cyclicity
    RealVector residuals;        // tr(sigma_lambda H_i) - m_i
};

/// Objective and exact gradient of the tilted partition function on a
/// positive definite (restricted) rho.
inline LambdaGradient lambda_gradient(const HermitianMatrix& rho_pd,
                                      const std::vector<HermitianMatrix>& ops,
                                      const RealVector& m, const RealVector& lambda) {
    const Eigen::Index d = m.size();
    if (lambda.size() != d || static_cast<Eigen::Index>(ops.size()) != d)
        throw ContractError("lambda_gradient: dimension mismatch");
    Matrix a = matrix_log(rho_pd).mat();
    for (Eigen::Index i = 0; i < d; ++i)
        a += lambda(i) * (ops[static_cast<std::size_t>(i)].mat() -
                          m(i) * identity(rho_pd.dim()));
    const Spectrum s = hermitian_eig(Matrix(0.5 * (a + a.adjoint().eval())));
    const double shift = s.eigenvalues(0);
    if (!std::isfinite(shift)) throw std::range_error("lambda_gradient: exponent overflow");
    RealVector t(s.eigenvalues.size());
    for (Eigen::Index k = 0; k < t.size(); ++k) t(k) = std::exp(s.eigenvalues(k) - shift);
    const double z = t.sum();

    LambdaGradient out;
    out.log_objective = shift + std::log(z);
    out.objective = std::exp(out.log_objective);
    out.gradient = RealVector(d);
    out.residuals = RealVector(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const Matrix b = s.eigenvectors.adjoint() *
                         (ops[static_cast<std::size_t>(i)].mat() -
                          m(i) * identity(rho_pd.dim())) *
                         s.eigenvectors;
        double acc = 0.0;
        for (Eigen::Index k = 0; k < t.size(); ++k) acc += t(k) * b(k, k).real();
        out.residuals(i) = acc / z;
        out.gradient(i) = acc * std::exp(shift);
    }
    return out;
}

struct QuantumEsscherSolution {
    RealVector lambda_star;  // multipliers for the normalized observables
    DensityOperator sigma_star;
    double dual_value = 0.0;
    double primal_value = 0.0;  // S(sigma*||rho)
    double gradient_norm = 0.0;
    double stationarity_residual = std::numeric_limits<double>::quiet_NaN();
    double kernel_component_norm = 0.0;
    Eigen::Index support_rank = 0;
    int iterations = 0;

    QuantumEsscherSolution(RealVector lambda, DensityOperator sigma)
        : lambda_star(std::move(lambda)), sigma_star(std::move(sigma)) {}
};

struct QuantumSolverOptions {
    double tol = 1e-9;
    int max_iterations = 10000;
    double rank_tol = 1e-10;
    double lambda_divergence_bound = 1e3;
};

inline QuantumEsscherSolution solve(const QuantumEsscherProblem& problem,
                                    const QuantumSolverOptions& options = {}) {
    const SupportDecomposition dec =
        support_kernel_decompose(problem.rho, problem.H, options.rank_tol);
    const RealVector m = problem.scaled_m();

    // The stated feasibility window is for the full space; re-check against
    // the restricted spectra before solving.
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const Spectrum s = hermitian_eig(dec.restricted_H[static_cast<std::size_t>(i)]);
        const double hi = s.eigenvalues(0), lo = s.eigenvalues(s.eigenvalues.size() - 1);
        if (!(lo < m(i) && m(i) < hi))
            throw InfeasibleError(
                "solve: m[" + std::to_string(i) +
                "] infeasible after restriction to supp(rho): needs (" + std::to_string(lo) +
                ", " + std::to_string(hi) + ")");
    }

    esscher::detail::ConcaveEval dual = [&](const RealVector& lambda) {
        const LambdaGradient g = lambda_gradient(dec.restricted_rho, dec.restricted_H, m, lambda);
        return std::make_pair(-g.log_objective, RealVector(-g.residuals));
    };
    esscher::detail::AscentResult res;
    try {
        res = esscher::detail::maximize_concave(dual, RealVector::Zero(m.size()), options.tol,
                                                options.max_iterations,
                                                options.lambda_divergence_bound);
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string("quantum solve: ") + e.what(), e.residual);
    }
    const LambdaGradient at_opt = lambda_gradient(dec.restricted_rho, dec.restricted_H, m, res.x);
    if (at_opt.gradient.norm() > options.tol || at_opt.residuals.norm() > options.tol)
        throw ConvergenceError("quantum solve: stationarity not reached", at_opt.gradient.norm());

    // sigma* = sigma*_supp (+) 0, assembled in the original basis.
    Matrix a = matrix_log(dec.restricted_rho).mat();
    for (Eigen::Index i = 0; i < m.size(); ++i)
        a += res.x(i) * dec.restricted_H[static_cast<std::size_t>(i)].mat();
    const Spectrum sa = hermitian_eig(Matrix(0.5 * (a + a.adjoint().eval())));
    RealVector w(sa.eigenvalues.size());
    const double shift = sa.eigenvalues(0);
    for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = std::exp(sa.eigenvalues(k) - shift);
    w /= w.sum();
    const Matrix sigma_supp =
        sa.eigenvectors * w.cast<Complex>().asDiagonal() * sa.eigenvectors.adjoint();
    Matrix sigma_full = dec.support_basis * sigma_supp * dec.support_basis.adjoint();

    QuantumEsscherSolution out(
        res.x, DensityOperator(problem.rho.n_qubits(), HermitianMatrix(sigma_full, 1e-9)));
    out.dual_value = res.value;  // lambda.m - log tr exp(lambda.H + log rho)
    out.primal_value = quantum_relative_entropy(out.sigma_star, problem.rho, options.rank_tol);
    out.gradient_norm = at_opt.gradient.norm();
    out.support_rank = dec.support_rank;
    out.iterations = res.iterations;
    out.kernel_component_norm = operator_norm(
        Matrix(dec.kernel_projector * out.sigma_star.mat() * dec.kernel_projector));
    if (out.kernel_component_norm > 1e-10)
        throw ContractError("solve: kernel component norm " +
                            std::to_string(out.kernel_component_norm));
    return out;
}

/// Max absolute central finite difference of the Lagrangian
///   L(sigma) = tr sigma (log sigma - log rho) - lambda.(tr(sigma H) - m)
///              - eta (tr sigma - 1)
/// over all Hermitian coordinate directions of the support block, with eta
/// reconstructed from the trace constraint.
inline double wirtinger_stationarity_check(const QuantumEsscherSolution& solution,
                                           const QuantumEsscherProblem& problem, double h = 1e-5,
                                           double rank_tol = 1e-10) {
    const SupportDecomposition dec = support_kernel_decompose(problem.rho, problem.H, rank_tol);
    const RealVector m = problem.scaled_m();
    const RealVector& lambda = solution.lambda_star;
    const Eigen::Index r = dec.support_rank;
    // A one-dimensional support is pinned by normalization: no free directions.
    if (r == 1) return 0.0;

    const Matrix log_rho = matrix_log(dec.restricted_rho).mat();
    Matrix a = log_rho;
    for (Eigen::Index i = 0; i < m.size(); ++i)
        a += lambda(i) * dec.restricted_H[static_cast<std::size_t>(i)].mat();
    const Spectrum sa = hermitian_eig(Matrix(0.5 * (a + a.adjoint().eval())));
    double z = 0.0;
    const double shift = sa.eigenvalues(0);
    for (Eigen::Index k = 0; k < r; ++k) z += std::exp(sa.eigenvalues(k) - shift);
    const double eta = 1.0 - (shift + std::log(z));

    const Matrix sigma =
        dec.support_basis.adjoint() * solution.sigma_star.mat() * dec.support_basis;
    auto lagrangian = [&](const Matrix& s) {
        const Spectrum sp = hermitian_eig(Matrix(0.5 * (s + s.adjoint().eval())));
        if (sp.eigenvalues(r - 1) <= 0.0)
            throw Error("wirtinger_stationarity_check: perturbation left the positive cone");
        double val = 0.0;
        for (Eigen::Index k = 0; k < r; ++k)
            val += sp.eigenvalues(k) * std::log(sp.eigenvalues(k));
        val -= (s * log_rho).trace().real();
        for (Eigen::Index i = 0; i < m.size(); ++i)
            val -= lambda(i) *
                   ((s * dec.restricted_H[static_cast<std::size_t>(i)].mat()).trace().real() -
                    m(i));
        val -= eta * (s.trace().real() - 1.0);
        return val;
    };

    double residual = 0.0;
    auto probe = [&](const Matrix& dir) {
        const double fp = lagrangian(sigma + h * dir);
        const double fm = lagrangian(sigma - h * dir);
        residual = std::max(residual, std::abs(fp - fm) / (2.0 * h));
    };
    for (Eigen::Index i = 0; i < r; ++i) {
        Matrix e = Matrix::Zero(r, r);
        e(i, i) = 1.0;
        probe(e);
    }
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = i + 1; j < r; ++j) {
            Matrix e = Matrix::Zero(r, r);
            e(i, j) = e(j, i) = 1.0;  // d/dx_ij on the Hermitian manifold
            probe(e);
            Matrix f = Matrix::Zero(r, r);
            f(i, j) = Complex(0, 1);  // d/dy_ij
            f(j, i) = Complex(0, -1);
            probe(f);
        }
    return residual;
}

}  // namespace esscher::quantum
