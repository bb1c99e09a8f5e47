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

// Seeded instance generation. All draws go through Rng so that output is
// deterministic across platforms (std:: distributions are not portable).

#include <cstdint>
#include <random>

#include "esscher/quest.hpp"

namespace esscher {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    Complex gaussian_complex() {
        const double re = gaussian();
        const double im = gaussian();
        return Complex(re, im);
    }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Ginibre matrix with iid complex Gaussian entries.
inline Matrix random_ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    Matrix g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = rng.gaussian_complex();
    return g;
}

/// Haar-like random unitary: QR of a Ginibre matrix with the R-diagonal
/// phases absorbed into Q.
inline Matrix random_unitary(Rng& rng, Eigen::Index dim) {
    const Matrix g = random_ginibre(rng, dim, dim);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        const double a = std::abs(d);
        q.col(i) *= (a > 0 ? d / a : Complex(1, 0));
    }
    return q;
}

/// GUE-like random Hermitian, entries O(1).
inline HermitianMatrix random_hermitian(Rng& rng, Eigen::Index dim) {
    const Matrix g = random_ginibre(rng, dim, dim);
    return HermitianMatrix(0.5 * (g + g.adjoint().eval()));
}

/// Random Hermitian rescaled to unit operator norm.
inline HermitianMatrix random_observable(Rng& rng, Eigen::Index dim) {
    HermitianMatrix h = random_hermitian(rng, dim);
    const double norm = operator_norm(h.mat());
    return HermitianMatrix(h.mat() / norm);
}

/// Random density operator whose spectrum lies in [1/kappa, 1] after trace
/// normalization. Requires kappa >= dim so the simplex slice is nonempty.
inline DensityOperator random_density(Rng& rng, int n_qubits, double kappa) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (kappa < static_cast<double>(dim))
        throw ContractError("random_density: kappa must be >= 2^n for a trace-one spectrum in [1/kappa, 1]");
    const double lo = 1.0 / kappa;
    const double excess = 1.0 - static_cast<double>(dim) * lo;
    RealVector spectrum(dim);
    for (int attempt = 0; attempt < 256; ++attempt) {
        RealVector u(dim);
        for (Eigen::Index i = 0; i < dim; ++i) u(i) = rng.uniform(0.05, 1.0);
        u *= excess / u.sum();
        if ((u.array() <= 1.0 - lo).all()) {
            spectrum = u.array() + lo;
            break;
        }
        if (attempt == 255) throw Error("random_density: spectrum sampling failed");
    }
    const Matrix v = random_unitary(rng, dim);
    Matrix m = v * spectrum.cast<Complex>().asDiagonal() * v.adjoint();
    return DensityOperator(n_qubits, HermitianMatrix(m, 1e-10));
}

/// Canonical purification |rho> = sum_k sqrt(p_k) |k>|v_k> with n_rho = n
/// ancillas, prepared by a deterministic column-zero unitary.
inline be::PurifiedAccess purify(const DensityOperator& rho) {
    const Spectrum s = hermitian_eig(rho.matrix());
    const Eigen::Index dim = rho.dim();
    Vector psi = Vector::Zero(dim * dim);
    for (Eigen::Index k = 0; k < dim; ++k)
        psi.segment(k * dim, dim) =
            std::sqrt(std::max(0.0, s.eigenvalues(k))) * s.eigenvectors.col(k);
    psi /= psi.norm();
    return be::PurifiedAccess{be::detail::column_zero_unitary(psi), rho.n_qubits(),
                              rho.n_qubits()};
}

/// Seeded Algorithm-1 instance: conditioned rho with purified access, d
/// exactly-encoded unit-norm observables, and moderate tilt parameters.
inline quest::QuestInput random_quest_input(Rng& rng, int n_qubits, Eigen::Index d, double kappa,
                                            double epsilon) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    const DensityOperator rho = random_density(rng, n_qubits, kappa);
    std::vector<be::BlockEncoding> observables;
    for (Eigen::Index j = 0; j < d; ++j) {
        const HermitianMatrix h = random_observable(rng, dim);
        observables.push_back(be::be_from_matrix(h.mat(), 1.0));
    }
    RealVector theta(d);
    for (Eigen::Index j = 0; j < d; ++j) theta(j) = rng.uniform(-0.75, 0.75);
    return quest::QuestInput{purify(rho), kappa, std::move(observables), std::move(theta),
                             epsilon};
}

/// Random rank-deficient density operator: `rank` nonzero eigenvalues, the
/// nonzero part conditioned like random_density.
inline DensityOperator random_rank_deficient_density(Rng& rng, int n_qubits, int rank,
                                                     double kappa) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (rank <= 0 || rank > dim) throw ContractError("random_rank_deficient_density: bad rank");
    if (kappa < static_cast<double>(rank))
        throw ContractError("random_rank_deficient_density: kappa must be >= rank");
    const double lo = 1.0 / kappa;
    const double excess = 1.0 - static_cast<double>(rank) * lo;
    RealVector spectrum = RealVector::Zero(dim);
    RealVector u(rank);
    for (int i = 0; i < rank; ++i) u(i) = rng.uniform(0.05, 1.0);
    u *= excess / u.sum();
    for (int i = 0; i < rank; ++i) spectrum(i) = lo + std::min(u(i), 1.0 - lo);
    spectrum /= spectrum.sum();
    const Matrix v = random_unitary(rng, dim);
    Matrix m = v * spectrum.cast<Complex>().asDiagonal() * v.adjoint();
    return DensityOperator(n_qubits, HermitianMatrix(m, 1e-10));
}

}  // namespace esscher
