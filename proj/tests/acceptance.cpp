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

// Acceptance suite: ten criteria, one pass/fail line each, nonzero exit on
// any failure. Every tolerance is pinned here, in code.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "esscher/classical.hpp"
#include "esscher/generate.hpp"
#include "esscher/quantum.hpp"
#include "esscher/quest.hpp"
#include "oracles.hpp"

using namespace esscher;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw CheckFailure(what);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// shared fixtures

struct QuantumFixture {
    DensityOperator rho;
    quantum::ObservableSet H;
    RealVector m;
    bool rank_deficient;
};

QuantumFixture quantum_fixture(Rng& rng, int n, Eigen::Index d, double kappa,
                               bool rank_deficient) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    const int rank = rank_deficient ? static_cast<int>(dim) - 1 : static_cast<int>(dim);
    const DensityOperator rho = rank_deficient
                                    ? random_rank_deficient_density(rng, n, rank, kappa)
                                    : random_density(rng, n, kappa);
    std::vector<HermitianMatrix> ops;
    for (;;) {
        ops.clear();
        for (Eigen::Index j = 0; j < d; ++j) ops.push_back(random_observable(rng, dim));
        if (d < 2) break;
        const Matrix comm = ops[0].mat() * ops[1].mat() - ops[1].mat() * ops[0].mat();
        if (operator_norm(comm) > 0.01) break;  // non-commuting pair required
    }
    // Interior target: moments of a perturbed state supported inside supp(rho).
    const Spectrum s = hermitian_eig(rho.matrix());
    Eigen::Index r = 0;
    while (r < dim && s.eigenvalues(r) > 1e-12) ++r;
    const Matrix basis = s.eigenvectors.leftCols(r);
    RealVector mix(r);
    for (Eigen::Index k = 0; k < r; ++k) mix(k) = rng.uniform(0.2, 1.0);
    mix /= mix.sum();
    const Matrix support_state = basis * mix.cast<Complex>().asDiagonal() * basis.adjoint();
    const Matrix rho_prime = 0.7 * rho.mat() + 0.3 * support_state;
    RealVector m(d);
    for (Eigen::Index j = 0; j < d; ++j)
        m(j) = (rho_prime * ops[static_cast<std::size_t>(j)].mat()).trace().real();
    return {rho, quantum::ObservableSet(ops), m, rank_deficient};
}

quest::QuestInput fixed_quest_instance(double epsilon) {
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 0.75;
    rho(1, 1) = 0.25;
    quest::QuestInput input;
    input.access = purify(DensityOperator::from_matrix(rho));
    input.kappa = 4.0;
    input.observables = {be::be_from_matrix(pauli_z(), 1.0)};
    input.theta = RealVector(1);
    input.theta << 0.5;
    input.epsilon = epsilon;
    return input;
}

std::vector<quest::QuestInput> seeded_quest_instances(double epsilon) {
    // Ten 1-2 qubit instances, total dimension capped at 2^11: two-qubit
    // runs carry a single observable.
    std::vector<quest::QuestInput> out;
    for (int i = 0; i < 10; ++i) {
        Rng rng(9000 + i);
        const int n = (i < 5) ? 1 : 2;
        const Eigen::Index d = (n == 1) ? 1 + (i % 2) : 1;
        const double kappa = (n == 1) ? 4.0 : 8.0;
        out.push_back(random_quest_input(rng, n, d, kappa, epsilon));
    }
    return out;
}

// ---------------------------------------------------------------------------
// criteria

std::string criterion_1_classical_duality() {
    Rng rng(7001);
    double max_gap = 0.0, max_residual = 0.0, max_brute_diff = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Eigen::Index omega = 4 + (i % 5);       // |Omega| in 4..8
        const Eigen::Index d = 1 + (i % 3);           // d in 1..3
        RealVector w(omega);
        for (Eigen::Index k = 0; k < omega; ++k) w(k) = rng.uniform(0.05, 1.0);
        w /= w.sum();
        RealMatrix x(omega, d);
        for (Eigen::Index r = 0; r < omega; ++r)
            for (Eigen::Index c = 0; c < d; ++c) x(r, c) = rng.uniform(-1.0, 1.0);
        RealVector theta(d);
        for (Eigen::Index c = 0; c < d; ++c) theta(c) = rng.uniform(-0.4, 0.4);
        const classical::FiniteDistribution P(w);
        const classical::RandomVector X(x);
        const RealVector m =
            x.transpose() * classical::esscher_transform(P, X, theta).weights();

        const classical::ClassicalEsscherProblem problem(P, X, m);
        const classical::ClassicalEsscherSolution sol = classical::solve_lambda(problem);
        const classical::DualityReport rep = classical::verify_duality(sol, problem);
        max_gap = std::max(max_gap, std::abs(sol.primal_value - sol.dual_value));
        max_residual = std::max(max_residual, rep.constraint_residuals.cwiseAbs().maxCoeff());

        const oracle::SimplexMinimum brute =
            oracle::projected_gradient_min_relent(w, x, m, 20000, 1e-6);
        max_brute_diff = std::max(max_brute_diff, std::abs(brute.objective - sol.primal_value));
    }
    require(max_gap <= 1e-8, "duality gap " + fmt(max_gap) + " above 1e-8");
    require(max_residual <= 1e-8, "constraint residual " + fmt(max_residual) + " above 1e-8");
    require(max_brute_diff <= 1e-6,
            "projected-gradient cross-check differs by " + fmt(max_brute_diff));
    return "100 instances: max gap " + fmt(max_gap) + ", max residual " + fmt(max_residual) +
           ", brute-force objective diff " + fmt(max_brute_diff);
}

std::vector<std::pair<quantum::QuantumEsscherProblem, quantum::QuantumEsscherSolution>>
    g_criterion2_solutions;

std::string criterion_2_quantum_solver() {
    Rng rng(7002);
    double max_residual = 0.0, max_gap = 0.0, max_kernel = 0.0;
    int rank_deficient_count = 0;
    for (int i = 0; i < 50; ++i) {
        const int n = 1 + (i % 2);
        const Eigen::Index d = 1 + ((i / 2) % 2);
        const double kappa = (n == 1) ? 4.0 : 8.0;
        const bool rank_deficient = (n == 2) && (i % 5 == 4);
        const QuantumFixture fx = quantum_fixture(rng, n, d, kappa, rank_deficient);
        quantum::QuantumEsscherProblem problem(fx.rho, fx.H, fx.m);
        quantum::QuantumSolverOptions opts;
        opts.tol = 1e-9;
        const quantum::QuantumEsscherSolution sol = quantum::solve(problem, opts);

        const RealVector m = problem.scaled_m();
        for (Eigen::Index j = 0; j < d; ++j) {
            const double res =
                (sol.sigma_star.mat() * fx.H.operators()[static_cast<std::size_t>(j)].mat())
                    .trace()
                    .real() -
                m(j);
            max_residual = std::max(max_residual, std::abs(res));
        }
        max_gap = std::max(max_gap, std::abs(sol.primal_value - sol.dual_value));
        if (rank_deficient) {
            ++rank_deficient_count;
            max_kernel = std::max(max_kernel, sol.kernel_component_norm);
        }
        g_criterion2_solutions.emplace_back(std::move(problem), sol);
    }
    require(max_residual <= 1e-6, "constraint residual " + fmt(max_residual) + " above 1e-6");
    require(max_gap <= 1e-6, "duality gap " + fmt(max_gap) + " above 1e-6");
    require(max_kernel <= 1e-10, "kernel component " + fmt(max_kernel) + " above 1e-10");
    require(rank_deficient_count >= 5, "too few rank-deficient cases exercised");
    return "50 instances (" + std::to_string(rank_deficient_count) +
           " rank-deficient): max residual " + fmt(max_residual) + ", max gap " + fmt(max_gap) +
           ", max kernel norm " + fmt(max_kernel);
}

std::string criterion_3_wirtinger() {
    require(!g_criterion2_solutions.empty(), "criterion 2 must run first");
    Rng rng(7003);
    double max_residual = 0.0, min_perturbed = std::numeric_limits<double>::infinity();
    for (const auto& [problem, sol] : g_criterion2_solutions) {
        const double residual = quantum::wirtinger_stationarity_check(sol, problem, 1e-5);
        max_residual = std::max(max_residual, residual);

        // Perturb along a trace- and constraint-preserving direction kept
        // inside the support.
        const quantum::SupportDecomposition dec =
            quantum::support_kernel_decompose(problem.rho, problem.H);
        if (dec.support_rank < 2) continue;
        std::vector<Matrix> cops;
        for (const auto& h : dec.restricted_H) cops.push_back(h.mat());
        const std::vector<Matrix> dirs =
            oracle::constraint_preserving_directions(cops, dec.support_rank);
        if (dirs.empty()) continue;
        const Matrix dir = dirs[static_cast<std::size_t>(rng.raw() % dirs.size())];
        const Matrix sigma_supp =
            dec.support_basis.adjoint() * sol.sigma_star.mat() * dec.support_basis;
        const Spectrum ss = hermitian_eig(Matrix(0.5 * (sigma_supp + sigma_supp.adjoint().eval())));
        const double lambda_min = ss.eigenvalues(ss.eigenvalues.size() - 1);
        const double delta = std::min(1e-2, 0.4 * lambda_min);
        const Matrix perturbed_supp = sigma_supp + delta * dir;
        const Matrix perturbed_full =
            dec.support_basis * perturbed_supp * dec.support_basis.adjoint();
        quantum::QuantumEsscherSolution perturbed = sol;
        perturbed.sigma_star = DensityOperator(
            problem.rho.n_qubits(), HermitianMatrix(perturbed_full, 1e-9));
        const double perturbed_residual =
            quantum::wirtinger_stationarity_check(perturbed, problem, 1e-5);
        min_perturbed = std::min(min_perturbed, perturbed_residual);
    }
    require(max_residual <= 1e-5, "stationarity residual " + fmt(max_residual) + " above 1e-5");
    require(min_perturbed > 1e-4,
            "perturbed stationarity residual " + fmt(min_perturbed) + " not above 1e-4");
    return "max residual " + fmt(max_residual) + " at the optimum, min " + fmt(min_perturbed) +
           " after 1e-2 perturbation";
}

std::string criterion_4_classical_reduction() {
    Rng rng(7004);
    double max_lambda_diff = 0.0, max_state_diff = 0.0;
    for (int i = 0; i < 25; ++i) {
        const Eigen::Index omega = 4;
        const Eigen::Index d = 1 + (i % 2);
        RealVector p(omega);
        for (Eigen::Index k = 0; k < omega; ++k) p(k) = rng.uniform(0.08, 1.0);
        p /= p.sum();
        RealMatrix x(omega, d);
        for (Eigen::Index r = 0; r < omega; ++r)
            for (Eigen::Index c = 0; c < d; ++c) x(r, c) = rng.uniform(-0.95, 0.95);
        RealVector theta(d);
        for (Eigen::Index c = 0; c < d; ++c) theta(c) = rng.uniform(-0.5, 0.5);
        const classical::FiniteDistribution P(p);
        const classical::RandomVector X(x);
        const RealVector m =
            x.transpose() * classical::esscher_transform(P, X, theta).weights();

        classical::SolverOptions copts;
        copts.tol = 1e-11;
        const classical::ClassicalEsscherSolution csol =
            classical::solve_lambda(classical::ClassicalEsscherProblem(P, X, m), copts);

        std::vector<HermitianMatrix> ops;
        for (Eigen::Index c = 0; c < d; ++c)
            ops.emplace_back(Matrix(x.col(c).cast<Complex>().asDiagonal()), 1e-10);
        quantum::QuantumSolverOptions qopts;
        qopts.tol = 1e-11;
        const quantum::QuantumEsscherSolution qsol = quantum::solve(
            quantum::QuantumEsscherProblem(
                DensityOperator::from_matrix(p.cast<Complex>().asDiagonal()),
                quantum::ObservableSet(ops), m),
            qopts);
        max_lambda_diff = std::max(max_lambda_diff,
                                   (qsol.lambda_star - csol.lambda_star).cwiseAbs().maxCoeff());
        for (Eigen::Index k = 0; k < omega; ++k)
            max_state_diff = std::max(
                max_state_diff, std::abs(qsol.sigma_star.mat()(k, k).real() - csol.Q_star(k)));
    }
    require(max_lambda_diff <= 1e-8, "lambda mismatch " + fmt(max_lambda_diff) + " above 1e-8");
    require(max_state_diff <= 1e-8, "state mismatch " + fmt(max_state_diff) + " above 1e-8");
    return "25 diagonal instances: max lambda diff " + fmt(max_lambda_diff) +
           ", max state diff " + fmt(max_state_diff);
}

std::string criterion_5_blockencoding_audit() {
    Rng rng(7005);
    int audited = 0;
    double worst_slack = -std::numeric_limits<double>::infinity();
    double worst_purified = 0.0;
    auto check = [&](const be::BlockEncoding& enc) {
        require(enc.encodes.has_value(), "corpus encoding without a recorded target");
        const double measured = be::measured_error(enc, *enc.encodes);
        worst_slack = std::max(worst_slack, measured - enc.eps_claimed);
        require(measured <= enc.eps_claimed + 1e-9,
                enc.provenance + ": measured " + fmt(measured) + " above claim " +
                    fmt(enc.eps_claimed));
        ++audited;
    };

    for (int i = 0; i < 8; ++i) {
        const int n = 1 + (i % 2);
        const DensityOperator rho = random_density(rng, n, 4.0 * (1 << n));
        const be::PurifiedAccess access = purify(rho);
        const be::BlockEncoding u_rho = be::be_from_purification(access);
        worst_purified = std::max(worst_purified, be::measured_error(u_rho, rho.mat()));
        check(u_rho);
        check(be::pad_ancillas(u_rho, 1 + (i % 2)));

        const Eigen::Index dim = Eigen::Index{1} << n;
        const HermitianMatrix h = random_observable(rng, dim);
        const be::BlockEncoding exact = be::be_from_matrix(h.mat(), 1.0);
        check(exact);

        const double eps = (i % 2) ? 1e-4 : 1e-6;
        const HermitianMatrix noise = random_observable(rng, dim);
        const be::BlockEncoding injected =
            be::be_from_matrix(Matrix(h.mat() + eps * noise.mat()), 1.2, eps, h.mat());
        check(injected);

        // Linear combination of the exact and injected encodings.
        Vector y(2);
        y << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
        Vector scaled(2);
        scaled << y(0) * exact.alpha, y(1) * injected.alpha;
        const double beta = scaled.cwiseAbs().sum();
        if (beta < 1e-6) continue;
        const be::StatePreparationPair pair = be::make_state_preparation_pair(scaled, beta, 2);
        const be::BlockEncoding lc = be::linear_combination(
            {be::pad_ancillas(exact, 1), be::pad_ancillas(injected, 1)}, y, pair);
        check(lc);
    }
    require(worst_purified <= 1e-10,
            "purified-access encoding error " + fmt(worst_purified) + " above 1e-10");
    return std::to_string(audited) + " encodings audited, worst measured-minus-claimed " +
           fmt(worst_slack) + ", purified-access worst " + fmt(worst_purified);
}

std::string criterion_6_polynomials() {
    double worst_log = 0.0, worst_exp = 0.0, worst_sup = 0.0;
    std::string domains;
    for (double kappa : {2.0, 4.0, 16.0}) {
        const poly::TaylorSpec spec = poly::log_spec(kappa);
        for (double eps : {1e-4, 1e-6, 1e-8}) {
            const poly::BoundedPolynomial p = poly::truncate(spec, eps);
            double err = 0.0;
            for (int k = 0; k <= 10000; ++k) {
                const double x = 1.0 / kappa + (1.0 - 1.0 / kappa) * k / 10000.0;
                err = std::max(err, std::abs(poly::eval(p, x) - std::log(x)));
            }
            require(err <= eps, "log grid error " + fmt(err) + " above " + fmt(eps) +
                                    " at kappa " + fmt(kappa));
            worst_log = std::max(worst_log, err / eps);
            const poly::BoundedPolynomial scaled = poly::rescale_for_qet(p, spec.B);
            require(scaled.sup_bound <= 0.5 + 1e-12,
                    "rescaled log sup " + fmt(scaled.sup_bound) + " above 1/2");
            worst_sup = std::max(worst_sup, scaled.sup_bound);
        }
        domains = "[" + fmt(1.0 / (2.0 * kappa)) + ",1]";
    }
    for (double alpha : {1.0, 2.0, 4.0}) {
        const poly::TaylorSpec spec = poly::exp_spec(alpha);
        for (double eps : {1e-4, 1e-6, 1e-8}) {
            const poly::BoundedPolynomial p = poly::truncate(spec, eps);
            double err = 0.0;
            for (int k = 0; k <= 10000; ++k) {
                const double x = -1.0 + 2.0 * k / 10000.0;
                err = std::max(err, std::abs(poly::eval(p, x) - std::exp(alpha * (x - 1.0))));
            }
            require(err <= eps, "exp grid error " + fmt(err) + " above " + fmt(eps) +
                                    " at alpha " + fmt(alpha));
            worst_exp = std::max(worst_exp, err / eps);
            const poly::BoundedPolynomial scaled = poly::rescale_for_qet(p, spec.B);
            require(scaled.sup_bound <= 0.5 + 1e-12,
                    "rescaled exp sup " + fmt(scaled.sup_bound) + " above 1/2");
            worst_sup = std::max(worst_sup, scaled.sup_bound);
        }
    }
    return "log worst err/eps " + fmt(worst_log) + " on [1/kappa,1]; exp worst err/eps " +
           fmt(worst_exp) + " on [-1,1]; rescaled sup <= " + fmt(worst_sup) +
           " (log gate measured on its certified slice, e.g. " + domains + ")";
}

std::string criterion_7_qet_soundness() {
    Rng rng(7007);
    double worst_exact = 0.0, worst_ratio = 0.0;
    const std::vector<poly::BoundedPolynomial> polys = {
        poly::make_polynomial((RealVector(2) << 0.0, 0.5).finished()),
        poly::make_polynomial((RealVector(3) << -0.25, 0.0, 0.5).finished())};
    for (int i = 0; i < 6; ++i) {
        const Eigen::Index dim = (i % 2) ? 4 : 2;
        const HermitianMatrix h = random_observable(rng, dim);
        const double alpha = 1.2 + rng.uniform(0.0, 0.8);
        const be::BlockEncoding exact = be::be_from_matrix(h.mat(), alpha);
        for (const auto& p : polys) {
            const qet::QetResult res = qet::apply_polynomial(exact, p, h);
            require(res.measured_error <= 1e-9,
                    "exact-input QET error " + fmt(res.measured_error) + " above 1e-9");
            worst_exact = std::max(worst_exact, res.measured_error);
        }
        for (double eps : {1e-6, 1e-4}) {
            const HermitianMatrix noise = random_observable(rng, dim);
            const be::BlockEncoding injected = be::be_from_matrix(
                Matrix(h.mat() + eps * noise.mat()), alpha, eps, h.mat());
            for (const auto& p : polys) {
                const qet::QetResult res = qet::apply_polynomial(injected, p, h);
                const double budget = 4.0 * res.degree_used * std::sqrt(eps / alpha);
                require(res.measured_error <= budget,
                        "QET error " + fmt(res.measured_error) + " above 4d sqrt(eps/alpha) = " +
                            fmt(budget));
                worst_ratio = std::max(worst_ratio, res.measured_error / budget);
            }
            // Composite budget through the function wrapper (exp instance).
            const Matrix small = 0.5 * h.mat();
            const be::BlockEncoding inj2 = be::be_from_matrix(
                Matrix((small + eps * noise.mat()) / 1.5), 1.0, eps / 1.5, Matrix(small / 1.5));
            be::BlockEncoding scaled = inj2;
            scaled.alpha = 1.5;
            scaled.eps_claimed = eps;
            scaled.encodes = small;
            const qet::QetResult res = qet::be_exp(scaled, 1e-8);
            require(res.measured_error <= res.claimed_error + 1e-9,
                    "composite error " + fmt(res.measured_error) + " above " +
                        fmt(res.claimed_error));
        }
    }
    return "exact inputs worst " + fmt(worst_exact) +
           "; injected inputs worst measured/budget " + fmt(worst_ratio);
}

std::vector<quest::QuestInput> g_criterion8_instances;

std::string criterion_8_algorithm1() {
    double worst = 0.0;
    double slowest = 0.0;
    int runs = 0;
    auto run_one = [&](const quest::QuestInput& input) {
        const auto t0 = std::chrono::steady_clock::now();
        const quest::QuestOutput out = quest::q_esscher_blockencoding(input);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        slowest = std::max(slowest, secs);
        require(secs < 60.0, "instance exceeded 60 s");
        require(out.be_sigma.unitary.rows() <= (1 << 11),
                "total dimension above 2^11");
        require(out.measured_error <= input.epsilon,
                "measured " + fmt(out.measured_error) + " above epsilon " +
                    fmt(input.epsilon));
        for (const quest::StageAudit& s : out.stages) {
            require(s.measured <= s.claimed + 1e-9,
                    s.stage + " measured above claimed");
            if (s.budget > 0.0)
                require(s.measured <= s.budget + 1e-9,
                        s.stage + " measured above its stage budget");
        }
        require(out.cost.queries_U_rho ==
                    static_cast<long>(out.cost.degree_exp) * out.cost.degree_log,
                "query composition broken");
        worst = std::max(worst, out.measured_error / input.epsilon);
        ++runs;
    };

    for (double eps : {1e-2, 1e-3}) {
        quest::QuestInput fixed = fixed_quest_instance(eps);
        run_one(fixed);
        if (eps == 1e-3) g_criterion8_instances.push_back(fixed);
        for (quest::QuestInput& input : seeded_quest_instances(eps)) {
            run_one(input);
            if (eps == 1e-3) g_criterion8_instances.push_back(input);
        }
    }
    return std::to_string(runs) + " runs at eps in {1e-2, 1e-3}: worst measured/eps " +
           fmt(worst) + ", slowest instance " + fmt(slowest) + " s";
}

std::string criterion_9_extraction() {
    require(!g_criterion8_instances.empty(), "criterion 8 must run first");
    const double eps = 1e-3;
    double worst_dist = 0.0, worst_prob = 0.0;
    for (const quest::QuestInput& input : g_criterion8_instances) {
        const quest::ExtractionResult res = quest::extract_normalized_state(input, eps);
        require(res.trace_dist <= eps,
                "trace distance " + fmt(res.trace_dist) + " above " + fmt(eps));
        worst_dist = std::max(worst_dist, res.trace_dist);

        const quest::CostReport cost = quest::cost_report(input);
        const double n_dim = static_cast<double>(Eigen::Index{1} << input.access.n);
        const double n_subnorm = 4.0 * std::exp(quest::beta_of(input));
        const double predicted = cost.Z / (n_dim * n_subnorm);
        const double dev = std::abs(res.success_probability - predicted);
        require(dev <= 2.0 * eps, "success probability off by " + fmt(dev));
        worst_prob = std::max(worst_prob, dev);
    }
    return std::to_string(g_criterion8_instances.size()) +
           " extractions: worst trace distance " + fmt(worst_dist) +
           ", worst |success - Z/(N NN)| " + fmt(worst_prob);
}

std::string criterion_10_cost_consistency() {
    // Query composition holds by construction on every run; sweep the
    // degrees for monotonicity. Epsilon sweep on the worked instance,
    // kappa sweep on the maximally mixed state (valid for every kappa >= 2).
    int prev_log = 0, prev_exp = 0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const quest::QuestInput input = fixed_quest_instance(eps);
        const quest::CostReport cost = quest::cost_report(input);
        require(cost.queries_U_rho == static_cast<long>(cost.degree_exp) * cost.degree_log,
                "query composition broken in the epsilon sweep");
        require(cost.degree_log >= prev_log && cost.degree_exp >= prev_exp,
                "degrees decreased under epsilon halving");
        prev_log = cost.degree_log;
        prev_exp = cost.degree_exp;
    }
    quest::QuestInput mixed;
    mixed.access = purify(DensityOperator::from_matrix(Matrix(0.5 * identity(2))));
    mixed.observables = {be::be_from_matrix(pauli_x(), 1.0)};
    mixed.theta = RealVector(1);
    mixed.theta << 0.3;
    mixed.epsilon = 1e-3;
    prev_log = 0;
    for (double kappa : {2.0, 4.0, 8.0, 16.0}) {
        mixed.kappa = kappa;
        const quest::CostReport cost = quest::cost_report(mixed);
        require(cost.queries_U_rho == static_cast<long>(cost.degree_exp) * cost.degree_log,
                "query composition broken in the kappa sweep");
        require(cost.degree_log >= prev_log, "degree_log decreased under kappa doubling");
        prev_log = cost.degree_log;
    }
    return "composition exact; degrees monotone over eps {1e-2,1e-3,1e-4} and kappa {2,4,8,16}";
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* label;
        std::function<std::string()> body;
    };
    const std::vector<Criterion> criteria{
        {1, "classical duality saturation", criterion_1_classical_duality},
        {2, "quantum solver", criterion_2_quantum_solver},
        {3, "Wirtinger stationarity", criterion_3_wirtinger},
        {4, "classical reduction", criterion_4_classical_reduction},
        {5, "block-encoding audit", criterion_5_blockencoding_audit},
        {6, "polynomial approximations", criterion_6_polynomials},
        {7, "QET soundness", criterion_7_qet_soundness},
        {8, "Algorithm 1 end-to-end", criterion_8_algorithm1},
        {9, "normalized extraction", criterion_9_extraction},
        {10, "cost-report consistency", criterion_10_cost_consistency},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const std::string detail = c.body();
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::printf("[PASS] criterion %2d: %s — %s [%.1f s]\n", c.id, c.label,
                        detail.c_str(), secs);
        } catch (const std::exception& e) {
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::printf("[FAIL] criterion %2d: %s — %s [%.1f s]\n", c.id, c.label, e.what(),
                        secs);
            ++failures;
        }
        std::fflush(stdout);
    }
    return failures;
}
