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

// Polynomial eigenvalue transformation of block-encoded Hermitian matrices,
// realized semantically: the output unitary is a dilation whose top-left
// block is exactly P(A~/alpha), where A~ is the (symmetrized) encoded block.
// Ancilla and error bookkeeping follows the alternating-phase circuit it
// stands in for: two extra ancillas and a claimed error of
// 4 d sqrt(eps/alpha) per application, with query counts DEFINED as the
// polynomial degree (one input query per degree).

#include <optional>
#include <string>

#include "esscher/blockenc.hpp"
#include "esscher/polyapprox.hpp"

namespace esscher::qet {

struct QetResult {
    be::BlockEncoding be;
    int degree_used = 0;
    double claimed_error = 0.0;
    std::optional<HermitianMatrix> target;  // oracle ground truth, when known
    double measured_error = std::numeric_limits<double>::quiet_NaN();
    std::string asymptotic_queries;  // the literature scaling, for reports
};

namespace detail {

inline void enforce_audit(QetResult& result) {
    if (!result.target) return;
    result.measured_error = be::measured_error(result.be, result.target->mat());
    if (result.measured_error > result.claimed_error + 1e-9)
        throw ContractError("qet: measured error " + std::to_string(result.measured_error) +
                            " exceeds claimed " + std::to_string(result.claimed_error) + " (" +
                            result.be.provenance + ")");
}

}  // namespace detail

/// Eigenvalue transform of the encoded block by a bounded polynomial
/// (sup |p| <= 1/2 on its certified domain). Produces a
/// (1, a+2, 4 d sqrt(eps/alpha))-encoding of p(A/alpha). When the caller
/// knows the true encoded matrix, passing it pins the oracle target
/// p(A_true/alpha) and the audit is enforced immediately.
inline QetResult apply_polynomial(const be::BlockEncoding& input, const poly::BoundedPolynomial& p,
                                  std::optional<HermitianMatrix> true_matrix = std::nullopt) {
    if (p.sup_bound > 0.5 + 1e-9)
        throw ContractError("apply_polynomial: polynomial sup " + std::to_string(p.sup_bound) +
                            " exceeds 1/2; rescale_for_qet first");
    const Matrix raw = be::extract_block(input);
    const double defect = hermiticity_defect(raw);
    if (defect > 1e-8)
        throw ContractError("apply_polynomial: encoded block hermiticity defect " +
                            std::to_string(defect));
    const Matrix block = 0.5 * (raw + raw.adjoint().eval());

    const Spectrum s = hermitian_eig(block);
    RealVector transformed(s.eigenvalues.size());
    for (Eigen::Index k = 0; k < transformed.size(); ++k)
        transformed(k) = poly::eval(p, s.eigenvalues(k));
    const Matrix image =
        s.eigenvectors * transformed.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();

    const int d = static_cast<int>(p.degree());
    QetResult result;
    result.be.unitary = kron(identity(Eigen::Index{1} << (input.ancillas + 1)),
                             unitary_completion(image));
    result.be.alpha = 1.0;
    result.be.ancillas = input.ancillas + 2;
    result.be.system_qubits = input.system_qubits;
    result.be.provenance = "qet(" + input.provenance + ")";
    result.degree_used = d;
    result.claimed_error = 4.0 * d * std::sqrt(input.eps_claimed / input.alpha);
    result.be.eps_claimed = result.claimed_error;
    be::validate(result.be);

    if (true_matrix) {
        const Spectrum st = hermitian_eig(*true_matrix);
        RealVector ft(st.eigenvalues.size());
        for (Eigen::Index k = 0; k < ft.size(); ++k)
            ft(k) = poly::eval(p, st.eigenvalues(k) / input.alpha);
        Matrix target = st.eigenvectors * ft.cast<Complex>().asDiagonal() *
                        st.eigenvectors.adjoint();
        result.target = HermitianMatrix(target, 1e-9);
        result.be.encodes = result.target->mat();
        detail::enforce_audit(result);
    }
    return result;
}

/// Block-encoding of f(A) from a series spec for x -> f(alpha x):
/// truncate, rescale by 2(1+B), transform. Output metadata
/// (2(1+B), a+2, eps_poly + 2(1+B) 4 d sqrt(eps/alpha)).
inline QetResult be_function(const be::BlockEncoding& input, const poly::TaylorSpec& spec,
                             double eps_poly,
                             std::optional<HermitianMatrix> true_matrix = std::nullopt,
                             double rescale_factor = 0.0) {
    const poly::BoundedPolynomial truncated = poly::truncate(spec, eps_poly);
    const double scale = rescale_factor > 0.0 ? rescale_factor : 2.0 * (1.0 + spec.B);
    poly::BoundedPolynomial p = truncated;
    p.coefficients /= scale;
    p.eps_poly /= scale;
    p.sup_bound = truncated.sup_bound / scale;
    if (p.sup_bound > 0.5 + 1e-12)
        throw Error("be_function: rescaled sup " + std::to_string(p.sup_bound) + " exceeds 1/2");

    // Window hypothesis: the encoded spectrum must land in [x0-r, x0+r].
    const Matrix raw = be::extract_block(input);
    const Spectrum sb = hermitian_eig(Matrix(0.5 * (raw + raw.adjoint().eval())));
    const double slack = input.eps_claimed / input.alpha + 1e-9;
    if (sb.eigenvalues(0) > spec.x0 + spec.r + slack ||
        sb.eigenvalues(sb.eigenvalues.size() - 1) < spec.x0 - spec.r - slack)
        throw ContractError("be_function: encoded spectrum [" +
                            std::to_string(sb.eigenvalues(sb.eigenvalues.size() - 1)) + ", " +
                            std::to_string(sb.eigenvalues(0)) + "] escapes the series window of " +
                            spec.name);

    QetResult result = apply_polynomial(input, p);
    result.be.alpha = scale;
    result.claimed_error =
        eps_poly + scale * 4.0 * result.degree_used *
                       std::sqrt(input.eps_claimed / input.alpha);
    result.be.eps_claimed = result.claimed_error;
    result.be.provenance = "be_function[" + spec.name + "](" + input.provenance + ")";

    if (true_matrix) {
        // Target: f(A_true) = f(alpha x) evaluated on the true spectrum / alpha.
        const Spectrum st = hermitian_eig(*true_matrix);
        RealVector ft(st.eigenvalues.size());
        for (Eigen::Index k = 0; k < ft.size(); ++k)
            ft(k) = spec.f(st.eigenvalues(k) / input.alpha);
        Matrix target =
            st.eigenvectors * ft.cast<Complex>().asDiagonal() * st.eigenvectors.adjoint();
        result.target = HermitianMatrix(target, 1e-9);
        result.be.encodes = result.target->mat();
        detail::enforce_audit(result);
    }
    return result;
}

/// log(rho) from an exact encoding of rho with spectrum in [1/kappa, 1]:
/// a (2(1 + ln 2 kappa), a+2, eps_poly)-encoding.
inline QetResult be_log_rho(const be::BlockEncoding& be_rho, double kappa, double eps_poly) {
    if (std::abs(be_rho.alpha - 1.0) > 1e-12 || be_rho.eps_claimed > 1e-12)
        throw ContractError("be_log_rho: requires an exact (1, a, 0) encoding of rho");
    const Matrix raw = be::extract_block(be_rho);
    const Spectrum s = hermitian_eig(Matrix(0.5 * (raw + raw.adjoint().eval())));
    if (s.eigenvalues(s.eigenvalues.size() - 1) < 1.0 / kappa - 1e-9 ||
        s.eigenvalues(0) > 1.0 + 1e-9)
        throw ContractError("be_log_rho: spectrum [" +
                            std::to_string(s.eigenvalues(s.eigenvalues.size() - 1)) + ", " +
                            std::to_string(s.eigenvalues(0)) + "] outside [1/kappa, 1] for kappa " +
                            std::to_string(kappa));

    std::optional<HermitianMatrix> truth;
    if (be_rho.encodes) truth = HermitianMatrix(*be_rho.encodes, 1e-9);
    QetResult result = be_function(be_rho, poly::log_spec(kappa), eps_poly, truth);
    result.asymptotic_queries = "O(kappa log(log(kappa)/eps_poly)) queries to U_rho";
    // Exact input: the composite error formula collapses to eps_poly.
    result.claimed_error = eps_poly;
    result.be.eps_claimed = eps_poly;
    if (result.target) detail::enforce_audit(result);
    return result;
}

/// exp(H)/exp(alpha) from an (alpha, a, eps)-encoding of H: a
/// (4, a+2, eps_poly + 16 t sqrt(eps/alpha))-encoding. With half_exponent
/// the construction runs on H/2 (the input read as an (alpha/2, a, eps/2)
/// encoding) and rescales by 2 instead of 4, yielding a
/// (2 e^{alpha/2}-subnormalized) encoding of exp(H/2) used for normalized
/// state extraction.
inline QetResult be_exp(const be::BlockEncoding& be_h, double eps_poly,
                        bool half_exponent = false) {
    const double alpha = half_exponent ? 0.5 * be_h.alpha : be_h.alpha;
    const double eps_in = half_exponent ? 0.5 * be_h.eps_claimed : be_h.eps_claimed;
    const poly::TaylorSpec spec = poly::exp_spec(alpha);
    const double scale = half_exponent ? 2.0 : 4.0;

    be::BlockEncoding shifted = be_h;  // same unitary, reinterpreted metadata
    shifted.alpha = alpha;
    shifted.eps_claimed = eps_in;
    shifted.encodes.reset();

    std::optional<HermitianMatrix> truth;
    if (be_h.encodes) truth = HermitianMatrix(Matrix(*be_h.encodes / (half_exponent ? 2.0 : 1.0)), 1e-9);

    QetResult result = be_function(shifted, spec, eps_poly, truth, scale);
    const int t = result.degree_used;
    result.claimed_error = eps_poly + scale * 4.0 * t * std::sqrt(eps_in / alpha);
    result.be.eps_claimed = result.claimed_error;
    result.asymptotic_queries =
        "O(sqrt(max(alpha, log(1/eps_poly)) log(1/eps_poly))) queries to U_H";
    if (result.target) {
        // be_function already targeted exp(A~) with subnormalization `scale`
        // in the x/alpha frame; expressed against exp(H)/exp(alpha) the
        // claims are identical, so only the audit is re-run.
        detail::enforce_audit(result);
    }
    return result;
}

}  // namespace esscher::qet
