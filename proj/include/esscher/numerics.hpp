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

// Dense complex linear-algebra substrate: Hermitian eigendecomposition,
// matrix functions, tensor operations, norms, and unitary completion of
// contractions. Qubit convention throughout the library: qubit 0 is the
// MOST significant bit of a basis index, and ancilla registers occupy the
// most significant qubits, so an encoded block sits in the top-left corner.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "esscher/core.hpp"

namespace esscher {

inline Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

inline Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw ContractError(std::string(what) + ": non-finite entries");
}

inline void require_finite(const RealVector& v, const char* what) {
    if (!v.allFinite()) throw ContractError(std::string(what) + ": non-finite entries");
}

/// Largest absolute entry of M - M^dagger.
inline double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Square complex matrix certified Hermitian at construction
/// (defect <= 1e-12, then symmetrized).
class HermitianMatrix {
public:
    explicit HermitianMatrix(Matrix m, double tol = 1e-12) {
        if (m.rows() != m.cols())
            throw ContractError("HermitianMatrix: matrix is not square");
        require_finite(m, "HermitianMatrix");
        if (m.size() > 0) {
            const double defect = hermiticity_defect(m);
            if (defect > tol)
                throw ContractError("HermitianMatrix: hermiticity defect " +
                                    std::to_string(defect) + " exceeds " + std::to_string(tol));
        }
        m_ = 0.5 * (m + m.adjoint().eval());
    }

    Eigen::Index dim() const { return m_.rows(); }
    const Matrix& mat() const { return m_; }
    double trace_real() const { return m_.trace().real(); }

private:
    Matrix m_;
};

struct Spectrum {
    RealVector eigenvalues;  // descending
    Matrix eigenvectors;     // unitary, columns match eigenvalues
};

namespace detail {

// Full Frobenius check up to dim 512; deterministic column probes beyond.
inline double reconstruction_residual(const Matrix& m, const Spectrum& s) {
    const Eigen::Index n = m.rows();
    const double scale = std::max(1.0, m.norm());
    if (n <= 512) {
        Matrix rec = s.eigenvectors * s.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
                     s.eigenvectors.adjoint();
        return (rec - m).norm() / scale;
    }
    double worst = 0.0;
    const Eigen::Index probes = 32;
    for (Eigen::Index p = 0; p < probes; ++p) {
        const Eigen::Index j = (p * n) / probes;
        Vector vj = s.eigenvectors.adjoint() * Vector(Vector::Unit(n, j));
        vj = s.eigenvalues.cast<Complex>().asDiagonal() * vj;
        Vector rec = s.eigenvectors * vj;
        worst = std::max(worst, (rec - m.col(j)).norm() / scale);
    }
    return worst;
}

inline double unitarity_probe(const Matrix& u) {
    const Eigen::Index n = u.rows();
    if (n <= 512) return (u.adjoint() * u - identity(n)).cwiseAbs().maxCoeff();
    double worst = 0.0;
    const Eigen::Index probes = 32;
    for (Eigen::Index p = 0; p < probes; ++p) {
        const Eigen::Index j = (p * n) / probes;
        Vector col = u.adjoint() * (u * Vector(Vector::Unit(n, j)));
        col(j) -= 1.0;
        worst = std::max(worst, col.cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace detail

/// Max-entry residual of U^dagger U - I (full up to dim 512, probed beyond).
inline double unitarity_residual(const Matrix& u) {
    if (u.rows() != u.cols()) throw ContractError("unitarity_residual: not square");
    return detail::unitarity_probe(u);
}

inline void require_unitary(const Matrix& u, const char* what, double tol = 1e-9) {
    const double res = unitarity_residual(u);
    if (res > tol)
        throw ContractError(std::string(what) + ": unitarity residual " + std::to_string(res));
}

/// Hermitian eigendecomposition, eigenvalues descending. Deterministic for
/// identical input; degenerate blocks keep the solver's order and each
/// eigenvector's first component above 1e-12 in magnitude is made real
/// positive.
inline Spectrum hermitian_eig(const Matrix& m) {
    if (m.rows() != m.cols()) throw ContractError("hermitian_eig: not square");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError(
            "hermitian_eig: QL iteration did not converge for dim " + std::to_string(m.rows()),
            hermiticity_defect(m));
    const Eigen::Index n = m.rows();
    // Descending order; stable on ties so degenerate blocks keep the
    // solver's (ascending-index) arrangement.
    std::vector<Eigen::Index> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return solver.eigenvalues()(a) > solver.eigenvalues()(b);
    });
    Spectrum s;
    s.eigenvalues = RealVector(n);
    s.eigenvectors = Matrix(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        s.eigenvalues(k) = solver.eigenvalues()(order[k]);
        Vector col = solver.eigenvectors().col(order[k]);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(col(i)) > 1e-12) {
                col *= std::conj(col(i)) / std::abs(col(i));
                break;
            }
        }
        s.eigenvectors.col(k) = col;
    }
    const double res = detail::reconstruction_residual(m, s);
    if (res > 1e-9)
        throw ConvergenceError("hermitian_eig: reconstruction residual " + std::to_string(res),
                               res);
    return s;
}

inline Spectrum hermitian_eig(const HermitianMatrix& m) { return hermitian_eig(m.mat()); }

/// V f(Lambda) V^dagger with f applied to the eigenvalues.
inline HermitianMatrix matrix_function(const HermitianMatrix& m,
                                       const std::function<double(double)>& f) {
    const Spectrum s = hermitian_eig(m);
    RealVector fv(s.eigenvalues.size());
    for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(s.eigenvalues(i));
    require_finite(fv, "matrix_function: f(eigenvalues)");
    Matrix out = s.eigenvectors * fv.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
    return HermitianMatrix(out, 1e-9);
}

inline HermitianMatrix matrix_exp(const HermitianMatrix& m) {
    // Shift by the top eigenvalue so exponentials stay in [0, 1].
    const Spectrum s = hermitian_eig(m);
    const double shift = s.eigenvalues(0);
    RealVector fv(s.eigenvalues.size());
    for (Eigen::Index i = 0; i < fv.size(); ++i)
        fv(i) = std::exp(s.eigenvalues(i) - shift) * std::exp(shift);
    require_finite(fv, "matrix_exp");
    Matrix out = s.eigenvectors * fv.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
    return HermitianMatrix(out, 1e-9);
}

/// Natural matrix logarithm; requires a strictly positive spectrum.
inline HermitianMatrix matrix_log(const HermitianMatrix& m) {
    const Spectrum s = hermitian_eig(m);
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
        if (s.eigenvalues(i) <= 0.0)
            throw ContractError("matrix_log: eigenvalue " + std::to_string(i) + " = " +
                                std::to_string(s.eigenvalues(i)) + " is not positive");
    }
    Matrix out = s.eigenvectors *
                 s.eigenvalues.array().log().matrix().cast<Complex>().asDiagonal() *
                 s.eigenvectors.adjoint();
    return HermitianMatrix(out, 1e-9);
}

/// Positive semidefinite trace-one operator on n qubits. Eigenvalues in
/// [-1e-10, 0) are clamped to zero on ingest and the trace renormalized;
/// anything lower is rejected.
class DensityOperator {
public:
    DensityOperator(int n_qubits, HermitianMatrix m) : n_qubits_(n_qubits), mat_(ingest(n_qubits, std::move(m))) {}

    static DensityOperator from_matrix(const Matrix& m) {
        const int n = log2_exact(m.rows(), "DensityOperator dimension");
        return DensityOperator(n, HermitianMatrix(m));
    }

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return mat_.dim(); }
    const HermitianMatrix& matrix() const { return mat_; }
    const Matrix& mat() const { return mat_.mat(); }

private:
    static HermitianMatrix ingest(int n_qubits, HermitianMatrix m) {
        if (m.dim() != (Eigen::Index{1} << n_qubits))
            throw ContractError("DensityOperator: dim " + std::to_string(m.dim()) +
                                " does not match 2^" + std::to_string(n_qubits));
        const double tr = m.trace_real();
        if (std::abs(tr - 1.0) > 1e-10)
            throw ContractError("DensityOperator: trace " + std::to_string(tr) + " is not 1");
        const Spectrum s = hermitian_eig(m);
        const double lambda_min = s.eigenvalues(s.eigenvalues.size() - 1);
        if (lambda_min < -1e-10)
            throw ContractError("DensityOperator: eigenvalue " + std::to_string(lambda_min) +
                                " below -1e-10");
        if (lambda_min >= 0.0) {
            Matrix normalized = m.mat() / tr;
            return HermitianMatrix(normalized, 1e-9);
        }
        RealVector clamped = s.eigenvalues.cwiseMax(0.0);
        clamped /= clamped.sum();
        Matrix rebuilt = s.eigenvectors * clamped.cast<Complex>().asDiagonal() *
                         s.eigenvectors.adjoint();
        return HermitianMatrix(rebuilt, 1e-9);
    }

    int n_qubits_;
    HermitianMatrix mat_;
};

/// Standard Kronecker product; the left factor occupies the more
/// significant qubits.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Reduced matrix over the kept qubits (trace preserved). Qubit 0 is the
/// most significant; kept qubits retain their relative order.
inline Matrix partial_trace(const Matrix& state, const std::vector<int>& keep_qubits,
                            int total_qubits) {
    const Eigen::Index dim = Eigen::Index{1} << total_qubits;
    if (state.rows() != dim || state.cols() != dim)
        throw ContractError("partial_trace: state dim does not match 2^total_qubits");
    std::vector<int> keep = keep_qubits;
    std::sort(keep.begin(), keep.end());
    for (int q : keep)
        if (q < 0 || q >= total_qubits)
            throw ContractError("partial_trace: qubit index " + std::to_string(q) +
                                " out of range");
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
        throw ContractError("partial_trace: duplicate qubit index");
    std::vector<int> traced;
    for (int q = 0; q < total_qubits; ++q)
        if (!std::binary_search(keep.begin(), keep.end(), q)) traced.push_back(q);

    const int nk = static_cast<int>(keep.size());
    const int nt = static_cast<int>(traced.size());
    const Eigen::Index dk = Eigen::Index{1} << nk;
    const Eigen::Index dt = Eigen::Index{1} << nt;

    auto assemble = [&](Eigen::Index kept_bits, Eigen::Index traced_bits) {
        Eigen::Index full = 0;
        for (int b = 0; b < nk; ++b)
            if ((kept_bits >> (nk - 1 - b)) & 1) full |= Eigen::Index{1} << (total_qubits - 1 - keep[b]);
        for (int b = 0; b < nt; ++b)
            if ((traced_bits >> (nt - 1 - b)) & 1)
                full |= Eigen::Index{1} << (total_qubits - 1 - traced[b]);
        return full;
    };

    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index i = 0; i < dk; ++i)
        for (Eigen::Index j = 0; j < dk; ++j) {
            Complex acc(0, 0);
            for (Eigen::Index t = 0; t < dt; ++t) acc += state(assemble(i, t), assemble(j, t));
            out(i, j) = acc;
        }
    return out;
}

/// Largest singular value, computed as sqrt of the top eigenvalue of M^dagger M.
inline double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Matrix gram = m.adjoint() * m;
    const Spectrum s = hermitian_eig(0.5 * (gram + gram.adjoint().eval()));
    return std::sqrt(std::max(0.0, s.eigenvalues(0)));
}

/// Half the trace norm of rho - sigma.
inline double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) throw ContractError("trace_distance: dimension mismatch");
    const Spectrum s = hermitian_eig(Matrix(rho.mat() - sigma.mat()));
    return 0.5 * s.eigenvalues.cwiseAbs().sum();
}

/// Unitary dilation of a contraction M (||M|| <= 1):
///   U = [[M, sqrt(I-MM^dag)], [sqrt(I-M^dag M), -M^dag]].
/// The top-left block is M itself, bit-identical.
inline Matrix unitary_completion(const Matrix& m) {
    if (m.rows() != m.cols()) throw ContractError("unitary_completion: not square");
    require_finite(m, "unitary_completion");
    const Eigen::Index n = m.rows();
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double norm = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    if (norm > 1.0 + 1e-12)
        throw ContractError("unitary_completion: operator norm " + std::to_string(norm) +
                            " exceeds 1");
    RealVector defect(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = std::min(svd.singularValues()(i), 1.0);
        defect(i) = std::sqrt(std::max(0.0, 1.0 - s * s));
    }
    const Matrix du = svd.matrixU() * defect.cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
    const Matrix dv = svd.matrixV() * defect.cast<Complex>().asDiagonal() * svd.matrixV().adjoint();
    Matrix u(2 * n, 2 * n);
    u.topLeftCorner(n, n) = m;
    u.topRightCorner(n, n) = du;
    u.bottomLeftCorner(n, n) = dv;
    u.bottomRightCorner(n, n) = -m.adjoint();
    const double res = unitarity_residual(u);
    if (res > 1e-9)
        throw ContractError("unitary_completion: unitarity residual " + std::to_string(res));
    return u;
}

}  // namespace esscher
