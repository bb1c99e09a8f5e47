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

#include <catch2/catch_amalgamated.hpp>

#include "esscher/generate.hpp"
#include "esscher/polyapprox.hpp"

using namespace esscher;
using namespace esscher::poly;

TEST_CASE("truncate: constant series gives degree 0 and zero error", "[polyapprox]") {
    TaylorSpec spec;
    spec.name = "const";
    spec.x0 = 0.0;
    spec.r = 1.0;
    spec.delta = 0.1;
    spec.B = 1.0;
    spec.series_bound = 0.7;
    spec.coeff = [](int l) { return l == 0 ? 0.7 : 0.0; };
    spec.f = [](double) { return 0.7; };
    spec.tail = [](int) { return 0.0; };
    const BoundedPolynomial p = truncate(spec, 1e-8);
    CHECK(p.degree() == 0);
    CHECK(p.eps_poly == 0.0);
}

TEST_CASE("truncate: geometric series degree matches the closed-form tail", "[polyapprox]") {
    const double q = 0.6, r = 1.0, delta = 0.1;
    TaylorSpec spec;
    spec.name = "geometric";
    spec.x0 = 0.0;
    spec.r = r;
    spec.delta = delta;
    spec.B = 1.0 / (1.0 - q * (r + delta));
    spec.series_bound = spec.B;
    spec.coeff = [q](int l) { return std::pow(q, l); };
    spec.f = [q](double x) { return 1.0 / (1.0 - q * x); };
    spec.tail = [q, r](int d) { return std::pow(q * r, d + 1) / (1.0 - q * r); };
    const double eps = 1e-6;
    const BoundedPolynomial p = truncate(spec, eps);
    int expected = 0;
    while (std::pow(q, expected + 1) / (1.0 - q) > eps) ++expected;
    CHECK(p.degree() == expected);
    CHECK(p.eps_poly <= eps);
}

TEST_CASE("log_spec: pinned window parameters and series bound", "[polyapprox]") {
    const TaylorSpec spec = log_spec(2.0);
    CHECK(spec.B == Catch::Approx(std::log(4.0)));
    CHECK(spec.r == Catch::Approx(0.5));
    CHECK(spec.delta == Catch::Approx(0.25));

    // Numerical series check: sum (r+delta)^l / l converges to log(2 kappa).
    double sum = 0.0;
    const double a = spec.r + spec.delta;
    double power = a;
    for (int l = 1; l <= 4096; ++l) {
        sum += power / l;
        power *= a;
    }
    CHECK(sum == Catch::Approx(std::log(4.0)).margin(1e-9));
}

TEST_CASE("log polynomial: grid error within eps across the acceptance set", "[polyapprox]") {
    for (double kappa : {2.0, 4.0, 16.0}) {
        for (double eps : {1e-4, 1e-6, 1e-8}) {
            const TaylorSpec spec = log_spec(kappa);
            const BoundedPolynomial p = truncate(spec, eps);
            CHECK(p.eps_poly <= eps);
            // The acceptance window [1/kappa, 1] sits inside [x0-r, x0+r].
            double worst = 0.0;
            for (int k = 0; k < 2001; ++k) {
                const double x = 1.0 / kappa + (1.0 - 1.0 / kappa) * k / 2000.0;
                worst = std::max(worst, std::abs(eval(p, x) - std::log(x)));
            }
            CHECK(worst <= eps);
            CHECK(p.sup_bound <= 1.0 + spec.B + 1e-9);
        }
    }
}

TEST_CASE("exp_spec: endpoint values and degree growth in alpha", "[polyapprox]") {
    const double eps = 1e-6;
    int prev_degree = 0;
    for (double alpha : {1.0, 2.0, 4.0, 8.0}) {
        const TaylorSpec spec = exp_spec(alpha);
        const BoundedPolynomial p = truncate(spec, eps);
        CHECK(std::abs(eval(p, 1.0) - 1.0) <= eps);
        CHECK(std::abs(eval(p, -1.0) - std::exp(-2.0 * alpha)) <= eps);
        CHECK(p.degree() >= prev_degree);
        prev_degree = static_cast<int>(p.degree());
    }
}

TEST_CASE("exp polynomial: grid error on [-1, 1] across the acceptance set", "[polyapprox]") {
    for (double alpha : {1.0, 2.0, 4.0}) {
        for (double eps : {1e-4, 1e-6, 1e-8}) {
            const BoundedPolynomial p = truncate(exp_spec(alpha), eps);
            double worst = 0.0;
            for (int k = 0; k < 2001; ++k) {
                const double x = -1.0 + 2.0 * k / 2000.0;
                worst = std::max(worst, std::abs(eval(p, x) - std::exp(alpha * (x - 1.0))));
            }
            CHECK(worst <= eps);
            CHECK(p.sup_bound <= 2.0 + 1e-9);  // 1 + B with B = 1
        }
    }
}

TEST_CASE("eval: constants, center value, naive power-sum oracle", "[polyapprox]") {
    const BoundedPolynomial c = make_polynomial((RealVector(1) << 0.3).finished());
    CHECK(eval(c, 0.77) == 0.3);

    Rng rng(301);
    RealVector coeffs(6);
    for (int i = 0; i < 6; ++i) coeffs(i) = rng.uniform(-0.2, 0.2);
    const double x0 = 0.25;
    const BoundedPolynomial p = make_polynomial(coeffs, x0);
    CHECK(eval(p, x0) == Catch::Approx(coeffs(0)));
    for (int rep = 0; rep < 20; ++rep) {
        const double x = rng.uniform(-1.0, 1.0);
        double naive = 0.0;
        for (int l = 0; l < 6; ++l) naive += coeffs(l) * std::pow(x - x0, l);
        CHECK(std::abs(eval(p, x) - naive) < 1e-12);
    }
}

TEST_CASE("rescale_for_qet: exact scaling, log gate, zero polynomial", "[polyapprox]") {
    const double B = 1.7;
    const BoundedPolynomial flat = make_polynomial((RealVector(1) << 1.0 + B).finished());
    const BoundedPolynomial scaled = rescale_for_qet(flat, B);
    CHECK(scaled.sup_bound == Catch::Approx(0.5));

    const TaylorSpec spec = log_spec(2.0);
    const BoundedPolynomial lp = rescale_for_qet(truncate(spec, 1e-6), spec.B);
    CHECK(lp.sup_bound <= 0.5 + 1e-12);

    const BoundedPolynomial zero = rescale_for_qet(
        make_polynomial((RealVector(2) << 0.0, 0.0).finished()), 1.0);
    CHECK(zero.sup_bound == 0.0);
}

TEST_CASE("rescale_for_qet: every shipped spec clears the 1/2 gate", "[polyapprox]") {
    for (double kappa : {2.0, 4.0, 16.0}) {
        const TaylorSpec spec = log_spec(kappa);
        const BoundedPolynomial p = rescale_for_qet(truncate(spec, 1e-6), spec.B);
        CHECK(p.sup_bound <= 0.5 + 1e-12);
    }
    for (double alpha : {1.0, 2.0, 4.0}) {
        const TaylorSpec spec = exp_spec(alpha);
        const BoundedPolynomial p = rescale_for_qet(truncate(spec, 1e-6), spec.B);
        CHECK(p.sup_bound <= 0.5 + 1e-12);
    }
}

TEST_CASE("rescale_for_qet: bound violation raises", "[polyapprox]") {
    // sup 2.0 rescaled by 2(1+0.1) = 2.2 leaves sup > 1/2.
    const BoundedPolynomial big = make_polynomial((RealVector(1) << 2.0).finished());
    CHECK_THROWS_AS(rescale_for_qet(big, 0.1), Error);
}

TEST_CASE("truncate: eps precondition window", "[polyapprox]") {
    const TaylorSpec spec = log_spec(4.0);  // B = ln 8 > 1/2
    CHECK_THROWS_AS(truncate(spec, 0.9), ContractError);
    CHECK_THROWS_AS(truncate(spec, 0.0), ContractError);
}

TEST_CASE("TaylorSpec: invariant violations are rejected", "[polyapprox]") {
    TaylorSpec bad = log_spec(2.0);
    bad.series_bound = 0.1;  // real sum is log 4
    CHECK_THROWS_AS(validate_spec(bad), ContractError);

    TaylorSpec bad2 = log_spec(2.0);
    bad2.delta = bad2.r + 0.1;
    CHECK_THROWS_AS(validate_spec(bad2), ContractError);
}
