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

// Block-encoding data model and algebra. A unitary U on a + n qubits is an
// (alpha, a, eps)-encoding of an n-qubit matrix A when
//   || A - alpha (<0^a| x I_n) U (|0^a> x I_n) || <= eps.
// Ancillas occupy the MOST significant qubits everywhere in this library,
// so the encoded block is U's top-left 2^n x 2^n corner. Constructors that
// know the matrix they were built from record it (`encodes`) so the audit
//   measured_error(be, *be.encodes) <= be.eps_claimed + 1e-9
// can be replayed for every encoding the library ever produces.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "esscher/numerics.hpp"

namespace esscher::be {

struct BlockEncoding {
    Matrix unitary;
    double alpha = 1.0;
    int ancillas = 0;
    double eps_claimed = 0.0;
    int system_qubits = 0;
    std::string provenance;
    std::optional<Matrix> encodes;  // construction target, when known

    Eigen::Index system_dim() const { return Eigen::Index{1} << system_qubits; }
};

inline void validate(const BlockEncoding& be) {
    const Eigen::Index dim = Eigen::Index{1} << (be.system_qubits + be.ancillas);
    if (be.unitary.rows() != dim || be.unitary.cols() != dim)
        throw ContractError("BlockEncoding(" + be.provenance + "): dimension " +
                            std::to_string(be.unitary.rows()) + " != 2^(n+a) = " +
                            std::to_string(dim));
    if (!(be.alpha > 0.0))
        throw ContractError("BlockEncoding(" + be.provenance + "): alpha must be positive");
    if (be.eps_claimed < 0.0)
        throw ContractError("BlockEncoding(" + be.provenance + "): negative eps");
    require_unitary(be.unitary, ("BlockEncoding(" + be.provenance + ")").c_str());
}

/// The encoded block: rows/columns with every ancilla in |0>.
inline Matrix extract_block(const BlockEncoding& be) {
    return be.unitary.topLeftCorner(be.system_dim(), be.system_dim());
}

/// Spectral-norm defect || A - alpha * block ||.
inline double measured_error(const BlockEncoding& be, const Matrix& a) {
    if (a.rows() != be.system_dim() || a.cols() != be.system_dim())
        throw ContractError("measured_error: matrix dim " + std::to_string(a.rows()) +
                            " does not match system dim " + std::to_string(be.system_dim()));
    return operator_norm(Matrix(a - be.alpha * extract_block(be)));
}

/// Replay of the construction audit. Encodings without a recorded target
/// pass vacuously.
inline bool audit(const BlockEncoding& be, double slack = 1e-9) {
    if (!be.encodes) return true;
    return measured_error(be, *be.encodes) <= be.eps_claimed + slack;
}

/// I_{a'} (x) U: extra ancillas on top, block preserved bit-exactly.
inline BlockEncoding pad_ancillas(const BlockEncoding& be, int extra) {
    if (extra < 1) throw ContractError("pad_ancillas: extra must be >= 1");
    BlockEncoding out = be;
    out.unitary = kron(identity(Eigen::Index{1} << extra), be.unitary);
    out.ancillas = be.ancillas + extra;
    out.provenance = be.provenance + "+pad";
    return out;
}

/// Unitary preparing a purification of an n-qubit density operator:
/// O_rho |0...0> = |rho> on n_rho + n qubits, tr_{n_rho} |rho><rho| = rho.
struct PurifiedAccess {
    Matrix O_rho;
    int n = 0;
    int n_rho = 0;

    Vector purification() const { return O_rho.col(0); }

    /// The encoded density operator, by tracing out the first n_rho qubits.
    Matrix reduced_density() const {
        const Vector psi = O_rho.col(0);
        std::vector<int> keep;
        for (int q = n_rho; q < n_rho + n; ++q) keep.push_back(q);
        return partial_trace(psi * psi.adjoint(), keep, n_rho + n);
    }
};

inline void validate(const PurifiedAccess& access) {
    const Eigen::Index dim = Eigen::Index{1} << (access.n + access.n_rho);
    if (access.O_rho.rows() != dim || access.O_rho.cols() != dim)
        throw ContractError("PurifiedAccess: dimension mismatch");
    require_unitary(access.O_rho, "PurifiedAccess");
    const Matrix rho = access.reduced_density();
    if (std::abs(rho.trace().real() - 1.0) > 1e-10)
        throw ContractError("PurifiedAccess: reduced state is not normalized");
    const Spectrum s = hermitian_eig(Matrix(0.5 * (rho + rho.adjoint().eval())));
    if (s.eigenvalues(s.eigenvalues.size() - 1) < -1e-10)
        throw ContractError("PurifiedAccess: reduced state is not PSD");
}

/// SWAP of two n-qubit registers.
inline Matrix swap_registers(int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    Matrix s = Matrix::Zero(dim * dim, dim * dim);
    for (Eigen::Index x = 0; x < dim; ++x)
        for (Eigen::Index y = 0; y < dim; ++y) s(y * dim + x, x * dim + y) = 1.0;
    return s;
}

/// (O_rho^dag (x) I_n)(I_{n_rho} (x) SWAP_n)(O_rho (x) I_n): an exact
/// (1, n + n_rho, 0)-encoding of the purified density operator. SWAP_n acts
/// on the last two n-qubit registers of the n_rho + n + n qubit space.
inline BlockEncoding be_from_purification(const PurifiedAccess& access) {
    validate(access);
    const int n = access.n;
    const Eigen::Index sys = Eigen::Index{1} << n;
    const Matrix swap_block = kron(identity(Eigen::Index{1} << access.n_rho), swap_registers(n));
    Matrix u = kron(access.O_rho.adjoint(), identity(sys)) * swap_block *
               kron(access.O_rho, identity(sys));

    BlockEncoding out;
    out.unitary = std::move(u);
    out.alpha = 1.0;
    out.ancillas = n + access.n_rho;
    out.eps_claimed = 0.0;
    out.system_qubits = n;
    out.provenance = "purified_access";
    out.encodes = access.reduced_density();
    validate(out);
    if (measured_error(out, *out.encodes) > 1e-10)
        throw ContractError("be_from_purification: block deviates from the reduced state");
    return out;
}

/// Single-ancilla encoding of A built by unitary dilation of A / alpha
/// (requires ||A|| <= alpha). When `claimed` is set, the encoding is
/// declared to target that matrix with the given error claim, which models
/// inputs carrying a known block-encoding error.
inline BlockEncoding be_from_matrix(const Matrix& a, double alpha, double eps_claimed = 0.0,
                                    std::optional<Matrix> claimed = std::nullopt) {
    const int n = log2_exact(a.rows(), "be_from_matrix dimension");
    BlockEncoding out;
    out.unitary = unitary_completion(a / alpha);
    out.alpha = alpha;
    out.ancillas = 1;
    out.eps_claimed = eps_claimed;
    out.system_qubits = n;
    out.provenance = "matrix_dilation";
    out.encodes = claimed ? std::move(claimed) : std::optional<Matrix>(a);
    validate(out);
    return out;
}

/// Unitaries (P_L, P_R) whose first-column amplitude products encode y:
/// sum_{j<m} |y_j - beta c_j^* d_j| <= eps_sp and c_j^* d_j = 0 for j >= m.
struct StatePreparationPair {
    Matrix P_L;
    Matrix P_R;
    double beta = 1.0;
    int b = 0;
    double eps_sp = 0.0;
    Vector target;  // the vector y the pair was built for

    Vector c() const { return P_L.col(0); }
    Vector d() const { return P_R.col(0); }
};

namespace detail {

// Deterministic unitary with first column v (phase-corrected Householder).
inline Matrix column_zero_unitary(const Vector& v) {
    const Eigen::Index dim = v.size();
    const double nrm = v.norm();
    if (std::abs(nrm - 1.0) > 1e-12)
        throw ContractError("column_zero_unitary: input is not a unit vector");
    const Complex v0 = v(0);
    const Complex phase = std::abs(v0) > 0.0 ? v0 / std::abs(v0) : Complex(1, 0);
    const Vector vp = v / phase;  // first component now real nonnegative
    Vector u = vp;
    u(0) -= 1.0;
    const double uu = u.squaredNorm();
    Matrix h = identity(dim);
    if (uu > 1e-30) h -= (2.0 / uu) * (u * u.adjoint());
    return phase * h;
}

}  // namespace detail

/// Exact state-preparation pair for y (achieved eps 0); `eps_sp_claimed`
/// lets the caller budget a larger claimed error. Surplus normalization
/// beyond ||y||_1/beta is parked on disjoint indices m (left) and m+1
/// (right) so the products vanish there.
inline StatePreparationPair make_state_preparation_pair(const Vector& y, double beta, int b,
                                                        double eps_sp_claimed = 0.0) {
    const Eigen::Index m = y.size();
    const Eigen::Index dim = Eigen::Index{1} << b;
    const double l1 = y.cwiseAbs().sum();
    if (beta < l1 - 1e-12)
        throw ContractError("make_state_preparation_pair: beta " + std::to_string(beta) +
                            " below ||y||_1 = " + std::to_string(l1));
    if (m > dim)
        throw ContractError("make_state_preparation_pair: m = " + std::to_string(m) +
                            " exceeds 2^b = " + std::to_string(dim));
    Vector c = Vector::Zero(dim), d = Vector::Zero(dim);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double mag = std::sqrt(std::abs(y(j)) / beta);
        const Complex phase =
            std::abs(y(j)) > 0.0 ? y(j) / std::abs(y(j)) : Complex(1, 0);
        c(j) = mag;
        d(j) = phase * mag;
    }
    const double remainder = std::max(0.0, 1.0 - l1 / beta);
    if (remainder > 1e-14) {
        if (m + 2 > dim)
            throw ContractError(
                "make_state_preparation_pair: no disjoint indices left to park surplus "
                "normalization; increase b");
        c(m) = std::sqrt(remainder);
        d(m + 1) = std::sqrt(remainder);
    }
    // Tiny rounding defects folded into the parked component.
    if (c.norm() > 0) c /= c.norm();
    if (d.norm() > 0) d /= d.norm();

    StatePreparationPair pair;
    pair.P_L = detail::column_zero_unitary(c);
    pair.P_R = detail::column_zero_unitary(d);
    pair.beta = beta;
    pair.b = b;
    pair.eps_sp = eps_sp_claimed;
    pair.target = y;

    double achieved = 0.0;
    for (Eigen::Index j = 0; j < m; ++j)
        achieved += std::abs(y(j) - beta * std::conj(pair.c()(j)) * pair.d()(j));
    if (achieved > 1e-12)
        throw ContractError("make_state_preparation_pair: achieved eps " +
                            std::to_string(achieved));
    for (Eigen::Index j = m; j < dim; ++j)
        if (std::abs(std::conj(pair.c()(j)) * pair.d()(j)) != 0.0)
            throw ContractError("make_state_preparation_pair: nonzero product beyond m");
    return pair;
}

/// Generalized linear combination sum_j y_j A_j of block-encodings with
/// per-term subnormalizations alpha_j, using a state-preparation pair for
/// alpha (.) y. Metadata: (beta, a+b, (beta/min_j alpha_j) eps_BE + eps_SP).
inline BlockEncoding linear_combination(const std::vector<BlockEncoding>& bes, const Vector& y,
                                        const StatePreparationPair& pair) {
    const Eigen::Index m = static_cast<Eigen::Index>(bes.size());
    if (m == 0) throw ContractError("linear_combination: empty input");
    if (y.size() != m) throw ContractError("linear_combination: y size mismatch");
    const int a = bes[0].ancillas;
    const int n = bes[0].system_qubits;
    for (const BlockEncoding& be : bes) {
        if (be.ancillas != a)
            throw ContractError(
                "linear_combination: unequal ancilla counts; pad the inputs first (" +
                std::to_string(be.ancillas) + " vs " + std::to_string(a) + ")");
        if (be.system_qubits != n)
            throw ContractError("linear_combination: system size mismatch");
    }
    // The pair must target alpha (.) y.
    Vector expected(m);
    for (Eigen::Index j = 0; j < m; ++j) expected(j) = bes[static_cast<std::size_t>(j)].alpha * y(j);
    if (pair.target.size() != m ||
        (pair.target - expected).cwiseAbs().sum() > 1e-9)
        throw ContractError("linear_combination: pair does not target alpha (.) y");

    const Eigen::Index block_dim = Eigen::Index{1} << (a + n);
    const Eigen::Index sel_dim = Eigen::Index{1} << pair.b;
    if (m > sel_dim) throw ContractError("linear_combination: m exceeds 2^b");

    // W = sum_{j<m} |j><j| (x) U_j + sum_{j>=m} |j><j| (x) I; then
    // tilde W = (P_L^dag (x) I) W (P_R (x) I), assembled blockwise.
    Matrix w_tilde = Matrix::Zero(sel_dim * block_dim, sel_dim * block_dim);
    for (Eigen::Index row = 0; row < sel_dim; ++row)
        for (Eigen::Index col = 0; col < sel_dim; ++col) {
            Matrix block = Matrix::Zero(block_dim, block_dim);
            for (Eigen::Index l = 0; l < sel_dim; ++l) {
                const Complex coeff = std::conj(pair.P_L(l, row)) * pair.P_R(l, col);
                if (std::abs(coeff) == 0.0) continue;
                if (l < m)
                    block += coeff * bes[static_cast<std::size_t>(l)].unitary;
                else
                    block += coeff * identity(block_dim);
            }
            w_tilde.block(row * block_dim, col * block_dim, block_dim, block_dim) = block;
        }

    double min_alpha = bes[0].alpha, max_eps = 0.0;
    for (const BlockEncoding& be : bes) {
        min_alpha = std::min(min_alpha, be.alpha);
        max_eps = std::max(max_eps, be.eps_claimed);
    }

    BlockEncoding out;
    out.unitary = std::move(w_tilde);
    out.alpha = pair.beta;
    out.ancillas = a + pair.b;
    out.eps_claimed = (pair.beta / min_alpha) * max_eps + pair.eps_sp;
    out.system_qubits = n;
    out.provenance = "linear_combination";
    bool have_targets = true;
    for (const BlockEncoding& be : bes) have_targets = have_targets && be.encodes.has_value();
    if (have_targets) {
        Matrix target = Matrix::Zero(bes[0].encodes->rows(), bes[0].encodes->cols());
        for (Eigen::Index j = 0; j < m; ++j)
            target += y(j) * *bes[static_cast<std::size_t>(j)].encodes;
        out.encodes = std::move(target);
    }
    validate(out);
    return out;
}

}  // namespace esscher::be
