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

// Taylor-based bounded polynomial approximations with explicit (not
// asymptotic) degree selection: the truncation degree is the smallest d
// whose closed-form tail bound sum_{l>d} r^l |a_l| falls below the target,
// and every shipped polynomial re-measures its error and sup on dense grids.
//
// A truncated series is certified only where it converges: on
// [x0-r-delta, x0+r+delta] the partial sums stay within the series bound.
// sup_bound is therefore measured on the intersection of that window with
// [-1, 1] (all of [-1, 1] for the exp series, whose window covers it).

#include <cmath>
#include <functional>
#include <string>

#include "esscher/core.hpp"

namespace esscher::poly {

constexpr int kGridPoints = 10001;
constexpr int kDegreeCap = 1000000;

/// A power series around x0 with convergence data: target function f,
/// coefficients a_l, window radius r, margin delta, rescale bound B, and a
/// closed-form tail bound on sum_{l>d} r^l |a_l|.
struct TaylorSpec {
    std::string name;
    double x0 = 0.0;
    double r = 1.0;
    double delta = 0.1;
    double B = 1.0;             // bound used for the 2(1+B) rescaling
    double series_bound = 1.0;  // certified bound on sum (r+delta)^l |a_l|
    std::function<double(int)> coeff;
    std::function<double(double)> f;
    std::function<double(int)> tail;  // upper bound on sum_{l>d} r^l |a_l|
};

inline void validate_spec(const TaylorSpec& spec) {
    if (!(spec.x0 >= -1.0 && spec.x0 <= 1.0))
        throw ContractError("TaylorSpec " + spec.name + ": x0 outside [-1, 1]");
    if (!(spec.r > 0.0 && spec.r <= 2.0))
        throw ContractError("TaylorSpec " + spec.name + ": r outside (0, 2]");
    if (!(spec.delta > 0.0 && spec.delta <= spec.r))
        throw ContractError("TaylorSpec " + spec.name + ": delta outside (0, r]");
    // Numerical check of the series bound up to the truncation horizon.
    double sum = 0.0;
    const double q = spec.r + spec.delta;
    double power = 1.0;
    for (int l = 0; l <= 4096; ++l) {
        const double term = power * std::abs(spec.coeff(l));
        sum += term;
        power *= q;
        if (l > 64 && term < 1e-18) break;
        if (!std::isfinite(power)) break;
    }
    if (sum > spec.series_bound + 1e-9)
        throw ContractError("TaylorSpec " + spec.name + ": series bound " +
                            std::to_string(spec.series_bound) + " violated, sum " +
                            std::to_string(sum));
}

/// Real polynomial in powers of (x - x0) with measured approximation error
/// and measured sup over its certified slice of [-1, 1].
struct BoundedPolynomial {
    double x0 = 0.0;
    RealVector coefficients;
    double eps_poly = 0.0;   // grid error on [x0-r, x0+r]
    double sup_bound = 0.0;  // grid sup on [bound_lo, bound_hi]
    double bound_lo = -1.0;
    double bound_hi = 1.0;

    Eigen::Index degree() const { return coefficients.size() - 1; }
};

/// Horner evaluation in (x - x0).
inline double eval(const BoundedPolynomial& p, double x) {
    const double t = x - p.x0;
    double acc = 0.0;
    for (Eigen::Index l = p.coefficients.size() - 1; l >= 0; --l)
        acc = acc * t + p.coefficients(l);
    return acc;
}

namespace detail {

// Sup over a uniform grid plus a Chebyshev-node refinement pass; the
// refinement must not find excursions above 1.01x the uniform-grid sup.
inline double measured_sup(const BoundedPolynomial& p, double lo, double hi) {
    if (!(hi > lo)) return std::abs(eval(p, lo));
    double uniform = 0.0;
    for (int k = 0; k < kGridPoints; ++k) {
        const double x = lo + (hi - lo) * k / (kGridPoints - 1);
        uniform = std::max(uniform, std::abs(eval(p, x)));
    }
    double refined = 0.0;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int k = 0; k < kGridPoints; ++k) {
        const double x = mid + half * std::cos(M_PI * k / (kGridPoints - 1));
        refined = std::max(refined, std::abs(eval(p, x)));
    }
    if (refined > 1.01 * uniform + 1e-15)
        throw Error("measured_sup: inter-grid excursion, uniform " + std::to_string(uniform) +
                    " vs refined " + std::to_string(refined));
    return std::max(uniform, refined);
}

inline double measured_error(const BoundedPolynomial& p, const std::function<double(double)>& f,
                             double lo, double hi) {
    double worst = 0.0;
    for (int k = 0; k < kGridPoints; ++k) {
        const double x = lo + (hi - lo) * k / (kGridPoints - 1);
        worst = std::max(worst, std::abs(eval(p, x) - f(x)));
    }
    return worst;
}

}  // namespace detail

/// Smallest degree whose analytic tail bound meets eps. Does not build the
/// polynomial (used by cost reports).
inline int truncation_degree(const TaylorSpec& spec, double eps) {
    for (int d = 0; d <= kDegreeCap; ++d)
        if (spec.tail(d) <= eps) return d;
    throw Error("truncation_degree: tail bound not achievable within degree cap for " +
                spec.name);
}

/// Truncated series P_d with d from the analytic tail bound; grid error and
/// sup are measured and checked against the spec's bounds.
inline BoundedPolynomial truncate(const TaylorSpec& spec, double eps) {
    validate_spec(spec);
    const double eps_hi = spec.B >= 0.5 ? 1.0 / (2.0 * spec.B) : 1.0;
    if (!(eps > 0.0 && eps <= eps_hi))
        throw ContractError("truncate: eps " + std::to_string(eps) + " outside (0, " +
                            std::to_string(eps_hi) + "] for " + spec.name);
    const int d = truncation_degree(spec, eps);
    BoundedPolynomial p;
    p.x0 = spec.x0;
    p.coefficients = RealVector(d + 1);
    for (int l = 0; l <= d; ++l) p.coefficients(l) = spec.coeff(l);
    p.bound_lo = std::max(-1.0, spec.x0 - spec.r - spec.delta);
    p.bound_hi = std::min(1.0, spec.x0 + spec.r + spec.delta);
    p.eps_poly = detail::measured_error(p, spec.f, spec.x0 - spec.r, spec.x0 + spec.r);
    if (p.eps_poly > eps)
        throw Error("truncate: measured grid error " + std::to_string(p.eps_poly) +
                    " exceeds the tail bound target " + std::to_string(eps) + " for " + spec.name);
    p.sup_bound = detail::measured_sup(p, p.bound_lo, p.bound_hi);
    if (p.sup_bound > 1.0 + spec.B + 1e-9)
        throw Error("truncate: sup " + std::to_string(p.sup_bound) + " exceeds 1+B for " +
                    spec.name);
    return p;
}

/// ln x expanded about x0 = 1 with r = 1 - 1/kappa, delta = 1/(2 kappa);
/// the series bound evaluates to B = ln(2 kappa).
inline TaylorSpec log_spec(double kappa) {
    if (!(kappa > 1.0)) throw ContractError("log_spec: kappa must exceed 1");
    TaylorSpec spec;
    spec.name = "log(kappa=" + std::to_string(kappa) + ")";
    spec.x0 = 1.0;
    spec.r = 1.0 - 1.0 / kappa;
    spec.delta = 1.0 / (2.0 * kappa);
    spec.B = std::log(2.0 * kappa);
    spec.series_bound = spec.B;
    spec.coeff = [](int l) { return l == 0 ? 0.0 : (l % 2 == 1 ? 1.0 : -1.0) / l; };
    spec.f = [](double x) { return std::log(x); };
    const double r = spec.r;
    spec.tail = [r, kappa](int d) {
        // sum_{l>d} r^l / l <= r^{d+1} / ((d+1)(1-r)), and 1/(1-r) = kappa
        return kappa * std::pow(r, d + 1) / (d + 1);
    };
    return spec;
}

/// exp(alpha x)/exp(alpha) on [-1, 1] (x0 = 0, r = 1). The rescale bound is
/// B = 1 = sup |f|; the series bound exp(alpha delta) is certified
/// separately with delta = 0.1.
inline TaylorSpec exp_spec(double alpha) {
    if (!(alpha > 0.0)) throw ContractError("exp_spec: alpha must be positive");
    TaylorSpec spec;
    spec.name = "exp(alpha=" + std::to_string(alpha) + ")";
    spec.x0 = 0.0;
    spec.r = 1.0;
    spec.delta = 0.1;
    spec.B = 1.0;
    spec.series_bound = std::exp(alpha * spec.delta);
    spec.coeff = [alpha](int l) {
        return std::exp(l * std::log(alpha) - std::lgamma(l + 1.0) - alpha);
    };
    spec.f = [alpha](double x) { return std::exp(alpha * (x - 1.0)); };
    spec.tail = [alpha](int d) {
        if (d + 2 <= alpha) return std::numeric_limits<double>::infinity();
        const double log_term = (d + 1) * std::log(alpha) - std::lgamma(d + 2.0) - alpha;
        return std::exp(log_term) / (1.0 - alpha / (d + 2));
    };
    return spec;
}

/// Coefficients divided by 2(1+B); the result must clear the |P| <= 1/2
/// gate on its certified domain.
inline BoundedPolynomial rescale_for_qet(const BoundedPolynomial& p, double B) {
    BoundedPolynomial out = p;
    const double scale = 2.0 * (1.0 + B);
    out.coefficients /= scale;
    out.eps_poly /= scale;
    out.sup_bound = detail::measured_sup(out, out.bound_lo, out.bound_hi);
    if (out.sup_bound > 0.5 + 1e-12)
        throw Error("rescale_for_qet: sup " + std::to_string(out.sup_bound) +
                    " exceeds 1/2 after rescaling");
    return out;
}

/// Ad-hoc polynomial from explicit coefficients (tests, fixed transforms);
/// sup measured on all of [-1, 1], no approximation target.
inline BoundedPolynomial make_polynomial(RealVector coefficients, double x0 = 0.0) {
    BoundedPolynomial p;
    p.x0 = x0;
    p.coefficients = std::move(coefficients);
    p.bound_lo = -1.0;
    p.bound_hi = 1.0;
    p.eps_poly = 0.0;
    p.sup_bound = detail::measured_sup(p, -1.0, 1.0);
    return p;
}

}  // namespace esscher::poly
