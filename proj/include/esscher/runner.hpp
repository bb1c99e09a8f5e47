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

// Configuration-driven front end shared by the CLI and the tests: parse a
// JSON run configuration, dispatch to the solvers or the block-encoding
// pipeline, and emit a self-describing JSON report (inputs echoed with all
// defaults filled in, every numeric claim reproducible from (config, seed)).

#include <chrono>
#include <string>
#include <vector>

#include "esscher/classical.hpp"
#include "esscher/generate.hpp"
#include "esscher/quantum.hpp"
#include "esscher/quest.hpp"
#include "esscher/serialize.hpp"
#include "esscher/version.hpp"

namespace esscher::run {

using io::json;

struct RunConfig {
    std::string mode;  // classical | quantum-exact | quest | extract | sweep
    std::uint64_t seed = 0;
    double epsilon = 1e-3;
    double epsilon_state = -1.0;  // extract mode; defaults to epsilon
    double tol = 1e-9;
    bool newton = false;
    bool bits = false;  // also report entropies in bits
    std::string output_path;
    json problem;
    std::vector<double> sweep_epsilons;
    std::vector<double> sweep_kappas;
};

inline RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw io::ConfigError("$", "config must be a JSON object");
    RunConfig cfg;
    const json& mode = io::require_field(j, "mode", "$");
    if (!mode.is_string()) throw io::ConfigError("$.mode", "expected a string");
    cfg.mode = mode.get<std::string>();
    static const std::vector<std::string> modes{"classical", "quantum-exact", "quest", "extract",
                                                "sweep"};
    if (std::find(modes.begin(), modes.end(), cfg.mode) == modes.end())
        throw io::ConfigError("$.mode", "unknown mode '" + cfg.mode + "'");

    if (j.contains("seed")) {
        const json& seed = j["seed"];
        if (!(seed.is_number_unsigned() ||
              (seed.is_number_integer() && seed.get<std::int64_t>() >= 0)))
            throw io::ConfigError("$.seed", "expected a non-negative integer");
        cfg.seed = seed.get<std::uint64_t>();
    }
    if (j.contains("epsilon")) {
        if (!j["epsilon"].is_number()) throw io::ConfigError("$.epsilon", "expected a number");
        cfg.epsilon = j["epsilon"].get<double>();
    }
    if (j.contains("epsilon_state")) cfg.epsilon_state = j["epsilon_state"].get<double>();
    if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
    if (j.contains("newton")) cfg.newton = j["newton"].get<bool>();
    if (j.contains("bits")) cfg.bits = j["bits"].get<bool>();
    if (j.contains("out")) cfg.output_path = j["out"].get<std::string>();
    if (cfg.mode == "sweep") {
        const json& sweep = io::require_field(j, "sweep", "$");
        for (const auto& e : io::require_field(sweep, "epsilons", "$.sweep")) {
            if (!e.is_number()) throw io::ConfigError("$.sweep.epsilons", "expected numbers");
            cfg.sweep_epsilons.push_back(e.get<double>());
        }
        for (const auto& k : io::require_field(sweep, "kappas", "$.sweep")) {
            if (!k.is_number()) throw io::ConfigError("$.sweep.kappas", "expected numbers");
            cfg.sweep_kappas.push_back(k.get<double>());
        }
    }
    cfg.problem = io::require_field(j, "problem", "$");
    if (!cfg.problem.is_object()) throw io::ConfigError("$.problem", "expected an object");
    return cfg;
}

inline json config_to_json(const RunConfig& cfg) {
    json j{{"mode", cfg.mode},     {"seed", cfg.seed},    {"epsilon", cfg.epsilon},
           {"tol", cfg.tol},       {"newton", cfg.newton}, {"bits", cfg.bits},
           {"problem", cfg.problem}};
    if (cfg.epsilon_state >= 0.0) j["epsilon_state"] = cfg.epsilon_state;
    if (!cfg.output_path.empty()) j["out"] = cfg.output_path;
    if (cfg.mode == "sweep")
        j["sweep"] = json{{"epsilons", cfg.sweep_epsilons}, {"kappas", cfg.sweep_kappas}};
    return j;
}

namespace detail {

inline DensityOperator parse_density(const json& problem, const std::string& path,
                                     be::PurifiedAccess* access_out = nullptr) {
    if (problem.contains("rho")) {
        const Matrix m = io::matrix_from_json(problem.at("rho"), path + ".rho");
        DensityOperator rho = DensityOperator::from_matrix(m);
        if (access_out) *access_out = purify(rho);
        return rho;
    }
    if (problem.contains("purification")) {
        Vector psi = io::vector_from_json(problem.at("purification"), path + ".purification");
        const int total = log2_exact(psi.size(), "purification length");
        if (!problem.contains("n_rho"))
            throw io::ConfigError(path + ".n_rho", "required alongside 'purification'");
        const int n_rho = problem.at("n_rho").get<int>();
        if (n_rho <= 0 || n_rho >= total)
            throw io::ConfigError(path + ".n_rho", "must lie strictly between 0 and the qubit count");
        const double nrm = psi.norm();
        if (std::abs(nrm - 1.0) > 1e-10)
            throw io::ConfigError(path + ".purification", "state vector is not normalized");
        psi /= nrm;
        be::PurifiedAccess access{be::detail::column_zero_unitary(psi), total - n_rho, n_rho};
        if (access_out) *access_out = access;
        return DensityOperator::from_matrix(access.reduced_density());
    }
    throw io::ConfigError(path, "needs either 'rho' (matrix) or 'purification' (state vector)");
}

inline std::vector<HermitianMatrix> parse_observables(const json& problem,
                                                      const std::string& path) {
    const json& obs = io::require_field(problem, "observables", path);
    if (!obs.is_array() || obs.empty())
        throw io::ConfigError(path + ".observables", "expected a nonempty array of matrices");
    std::vector<HermitianMatrix> out;
    for (std::size_t i = 0; i < obs.size(); ++i)
        out.emplace_back(
            io::matrix_from_json(obs[i], path + ".observables[" + std::to_string(i) + "]"),
            1e-10);
    return out;
}

inline json entropy_fields(const std::string& name, double nats, bool bits) {
    json j{{name + "_nats", nats}};
    if (bits) j[name + "_bits"] = nats / std::log(2.0);
    return j;
}

inline json run_classical(const RunConfig& cfg) {
    const std::string path = "$.problem";
    const RealVector p = io::real_vector_from_json(io::require_field(cfg.problem, "P", path),
                                                   path + ".P");
    const RealMatrix x = io::real_matrix_from_json(io::require_field(cfg.problem, "X", path),
                                                   path + ".X");
    const RealVector m = io::real_vector_from_json(io::require_field(cfg.problem, "m", path),
                                                   path + ".m");
    classical::ClassicalEsscherProblem problem{classical::FiniteDistribution(p),
                                               classical::RandomVector(x), m};
    classical::SolverOptions opts;
    opts.tol = cfg.tol;
    opts.newton = cfg.newton;
    const classical::ClassicalEsscherSolution sol = classical::solve_lambda(problem, opts);
    const classical::DualityReport duality = classical::verify_duality(sol, problem);

    json solution{{"lambda_star", io::real_vector_to_json(sol.lambda_star)},
                  {"Q_star", io::real_vector_to_json(sol.Q_star.weights())},
                  {"dual_value", sol.dual_value},
                  {"gradient_norm", sol.gradient_norm},
                  {"iterations", sol.iterations},
                  {"dropped_atoms", sol.dropped_atoms},
                  {"duality_gap", duality.gap},
                  {"constraint_residuals", io::real_vector_to_json(duality.constraint_residuals)}};
    solution.update(entropy_fields("primal", sol.primal_value, cfg.bits));
    return json{{"solution", solution}};
}

inline json run_quantum_exact(const RunConfig& cfg) {
    const std::string path = "$.problem";
    const DensityOperator rho = parse_density(cfg.problem, path);
    std::vector<HermitianMatrix> ops = parse_observables(cfg.problem, path);
    const RealVector m = io::real_vector_from_json(io::require_field(cfg.problem, "m", path),
                                                   path + ".m");
    quantum::QuantumEsscherProblem problem{rho, quantum::ObservableSet(ops), m};
    quantum::QuantumSolverOptions opts;
    opts.tol = cfg.tol;
    quantum::QuantumEsscherSolution sol = quantum::solve(problem, opts);
    sol.stationarity_residual = quantum::wirtinger_stationarity_check(sol, problem);

    json solution{{"lambda_star", io::real_vector_to_json(sol.lambda_star)},
                  {"sigma_star", io::matrix_to_json(sol.sigma_star.mat())},
                  {"dual_value", sol.dual_value},
                  {"gradient_norm", sol.gradient_norm},
                  {"duality_gap", sol.primal_value - sol.dual_value},
                  {"kernel_component_norm", sol.kernel_component_norm},
                  {"support_rank", sol.support_rank},
                  {"stationarity_residual", sol.stationarity_residual},
                  {"iterations", sol.iterations},
                  {"observable_scales", io::real_vector_to_json(problem.H.scales())}};
    solution.update(entropy_fields("primal", sol.primal_value, cfg.bits));
    return json{{"solution", solution}};
}

inline quest::QuestInput parse_quest_input(const RunConfig& cfg) {
    const std::string path = "$.problem";
    quest::QuestInput input;
    parse_density(cfg.problem, path, &input.access);
    input.kappa = io::require_number(cfg.problem, "kappa", path);
    const std::vector<HermitianMatrix> ops = parse_observables(cfg.problem, path);
    for (const HermitianMatrix& h : ops) {
        if (operator_norm(h.mat()) > 1.0 + 1e-9)
            throw io::ConfigError(path + ".observables",
                                  "observables must satisfy ||H|| <= 1 for unit-subnormalization "
                                  "encodings");
        input.observables.push_back(be::be_from_matrix(h.mat(), 1.0));
    }
    input.theta = io::real_vector_from_json(io::require_field(cfg.problem, "theta", path),
                                            path + ".theta");
    input.epsilon = cfg.epsilon;
    return input;
}

inline json stage_table(const std::vector<quest::StageAudit>& stages) {
    json rows = json::array();
    for (const quest::StageAudit& s : stages)
        rows.push_back(json{{"stage", s.stage},
                            {"alpha", s.alpha},
                            {"ancillas", s.ancillas},
                            {"claimed", s.claimed},
                            {"budget", s.budget},
                            {"measured", s.measured}});
    return rows;
}

inline json cost_to_json(const quest::CostReport& cost) {
    return json{{"queries_U_rho", cost.queries_U_rho},
                {"queries_per_U_j", cost.queries_per_U_j},
                {"queries_U_j_total", cost.queries_U_j_total},
                {"degree_log", cost.degree_log},
                {"degree_exp", cost.degree_exp},
                {"Z", cost.Z},
                {"aa_iterations_formula", cost.aa_iterations_formula},
                {"asymptotics", json::array({cost.asymptotics_rho,
                                                   cost.asymptotics_obs})}};
}

inline json run_quest(const RunConfig& cfg) {
    const quest::QuestInput input = parse_quest_input(cfg);
    const quest::QuestOutput out = quest::q_esscher_blockencoding(input);
    return json{{"solution",
                 json{{"beta", out.beta},
                      {"b", out.b},
                      {"subnormalization", out.subnormalization},
                      {"epsilon_be", out.epsilon_be},
                      {"measured_error", out.measured_error},
                      {"epsilon_guard_ok", out.epsilon_guard_ok},
                      {"ancillas", out.be_sigma.ancillas},
                      {"total_qubits", out.be_sigma.ancillas + out.be_sigma.system_qubits},
                      {"encoded_block", io::matrix_to_json(be::extract_block(out.be_sigma))},
                      {"target", io::matrix_to_json(out.target.mat())}}},
                {"stage_audit", stage_table(out.stages)},
                {"cost", cost_to_json(out.cost)}};
}

inline json run_extract(const RunConfig& cfg) {
    const quest::QuestInput input = parse_quest_input(cfg);
    const double eps_state = cfg.epsilon_state > 0.0 ? cfg.epsilon_state : cfg.epsilon;
    const quest::ExtractionResult res = quest::extract_normalized_state(input, eps_state);
    return json{{"solution", json{{"state", io::matrix_to_json(res.state.mat())},
                                  {"success_probability", res.success_probability},
                                  {"trace_distance", res.trace_dist},
                                  {"aa_iterations_formula", res.aa_iterations_formula},
                                  {"epsilon_state", eps_state},
                                  {"epsilon_internal", res.epsilon_internal}}},
                {"cost", cost_to_json(quest::cost_report(input))}};
}

inline json run_sweep(const RunConfig& cfg) {
    if (cfg.sweep_epsilons.empty() || cfg.sweep_kappas.empty())
        throw io::ConfigError("$.sweep", "needs nonempty 'epsilons' and 'kappas'");
    json rows = json::array();
    for (double kappa : cfg.sweep_kappas)
        for (double eps : cfg.sweep_epsilons) {
            RunConfig point = cfg;
            point.epsilon = eps;
            point.problem["kappa"] = kappa;
            quest::QuestInput input = parse_quest_input(point);
            // The declared kappa must still dominate the true spectrum.
            const quest::CostReport cost = quest::cost_report(input);
            json row = cost_to_json(cost);
            row["kappa"] = kappa;
            row["epsilon"] = eps;
            rows.push_back(std::move(row));
        }
    return json{{"sweep", rows}};
}

}  // namespace detail

/// Dispatch a parsed configuration and assemble the self-describing report.
inline json run(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    json body;
    if (cfg.mode == "classical")
        body = detail::run_classical(cfg);
    else if (cfg.mode == "quantum-exact")
        body = detail::run_quantum_exact(cfg);
    else if (cfg.mode == "quest")
        body = detail::run_quest(cfg);
    else if (cfg.mode == "extract")
        body = detail::run_extract(cfg);
    else if (cfg.mode == "sweep")
        body = detail::run_sweep(cfg);
    else
        throw io::ConfigError("$.mode", "unknown mode '" + cfg.mode + "'");

    const auto stop = std::chrono::steady_clock::now();
    json report{{"mode", cfg.mode},
                {"seed", cfg.seed},
                {"library_version", kVersion},
                {"config", config_to_json(cfg)},
                {"wall_clock_ms",
                 std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count()}};
    report.update(body);
    return report;
}

/// Deterministic seeded instance generation, emitted as a full run config.
inline json generate_instance(const std::string& kind, int omega, int n, int d, double kappa,
                              int rank, std::uint64_t seed) {
    Rng rng(seed);
    if (kind == "classical") {
        if (omega < d + 1) throw ContractError("generate_instance: need omega >= d + 1");
        RealVector w(omega);
        for (int i = 0; i < omega; ++i) w(i) = rng.uniform(0.05, 1.0);
        w /= w.sum();
        RealMatrix x(omega, d);
        for (int i = 0; i < omega; ++i)
            for (int j = 0; j < d; ++j) x(i, j) = rng.uniform(-1.0, 1.0);
        RealVector theta(d);
        for (int j = 0; j < d; ++j) theta(j) = rng.uniform(-0.4, 0.4);
        const classical::FiniteDistribution tilted = classical::esscher_transform(
            classical::FiniteDistribution(w), classical::RandomVector(x), theta);
        const RealVector m = x.transpose() * tilted.weights();
        return json{{"mode", "classical"},
                    {"seed", seed},
                    {"problem", json{{"P", io::real_vector_to_json(w)},
                                     {"X", io::real_matrix_to_json(x)},
                                     {"m", io::real_vector_to_json(m)}}}};
    }
    if (kind == "quantum") {
        const Eigen::Index dim = Eigen::Index{1} << n;
        const DensityOperator rho = rank > 0 && rank < dim
                                        ? random_rank_deficient_density(rng, n, rank, kappa)
                                        : random_density(rng, n, kappa);
        json obs = json::array();
        std::vector<HermitianMatrix> ops;
        for (int j = 0; j < d; ++j) {
            ops.push_back(random_observable(rng, dim));
            obs.push_back(io::matrix_to_json(ops.back().mat()));
        }
        // Interior targets: moments of a full-rank state perturbed within
        // the support of rho.
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
        for (int j = 0; j < d; ++j)
            m(j) = (rho_prime * ops[static_cast<std::size_t>(j)].mat()).trace().real();
        return json{{"mode", "quantum-exact"},
                    {"seed", seed},
                    {"problem", json{{"rho", io::matrix_to_json(rho.mat())},
                                     {"observables", obs},
                                     {"m", io::real_vector_to_json(m)}}}};
    }
    if (kind == "quest") {
        const Eigen::Index dim = Eigen::Index{1} << n;
        const DensityOperator rho = random_density(rng, n, kappa);
        const be::PurifiedAccess access = purify(rho);
        json obs = json::array();
        for (int j = 0; j < d; ++j)
            obs.push_back(io::matrix_to_json(random_observable(rng, dim).mat()));
        RealVector theta(d);
        for (int j = 0; j < d; ++j) theta(j) = rng.uniform(-0.75, 0.75);
        return json{{"mode", "quest"},
                    {"seed", seed},
                    {"problem", json{{"purification", io::vector_to_json(access.purification())},
                                     {"n_rho", access.n_rho},
                                     {"kappa", kappa},
                                     {"observables", obs},
                                     {"theta", io::real_vector_to_json(theta)}}}};
    }
    throw ContractError("generate_instance: unknown kind '" + kind + "'");
}

}  // namespace esscher::run
