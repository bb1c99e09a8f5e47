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

// Command-line front end. Subcommands mirror the run modes (classical,
// qesscher, quest, extract, sweep) plus `gen` for seeded instance
// generation. Exit codes: 0 success, 1 malformed config, 2 contract or
// precondition violation, 3 non-convergence.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "esscher/runner.hpp"

namespace {

using esscher::io::json;

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw esscher::io::ConfigError("$", "cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw esscher::io::ConfigError("$", std::string("JSON parse failure: ") + e.what());
    }
}

void write_report(const json& report, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << report.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw esscher::Error("cannot open output file '" + out_path + "'");
    out << report.dump(2) << "\n";
}

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::optional<double> epsilon;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    bool newton = false;
    bool bits = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("config", flags.config_path, "JSON run configuration")->required();
    cmd->add_option("--out", flags.out_path, "report path ('-' for stdout, the default)");
    cmd->add_option("--epsilon", flags.epsilon,
                    "override the config's output error budget (default 1e-3)");
    cmd->add_option("--tol", flags.tol, "solver gradient tolerance (default 1e-9)");
    cmd->add_option("--seed", flags.seed, "override the config's seed (default 0)");
    cmd->add_flag("--newton", flags.newton, "Newton direction with backtracking (default: gradient ascent)");
    cmd->add_flag("--bits", flags.bits, "report entropies in bits alongside nats");
}

int execute(const std::string& mode, const CommonFlags& flags) {
    json raw = load_config(flags.config_path);
    raw["mode"] = mode;
    if (flags.epsilon) raw["epsilon"] = *flags.epsilon;
    if (flags.tol) raw["tol"] = *flags.tol;
    if (flags.seed) raw["seed"] = *flags.seed;
    if (flags.newton) raw["newton"] = true;
    if (flags.bits) raw["bits"] = true;
    const esscher::run::RunConfig cfg = esscher::run::parse_config(raw);
    const json report = esscher::run::run(cfg);
    write_report(report, !flags.out_path.empty() ? flags.out_path : cfg.output_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Esscher transform toolkit: classical and quantum minimum-relative-entropy "
                 "solvers and a matrix-level block-encoding pipeline"};
    app.require_subcommand(1);

    CommonFlags classical_flags, quantum_flags, quest_flags, extract_flags, sweep_flags;
    add_common(app.add_subcommand("classical", "solve the classical tilt problem"),
               classical_flags);
    add_common(app.add_subcommand("qesscher", "solve the quantum problem exactly"),
               quantum_flags);
    add_common(app.add_subcommand("quest", "run the five-stage block-encoding pipeline"),
               quest_flags);
    add_common(app.add_subcommand("extract", "extract the normalized tilted state"),
               extract_flags);
    add_common(app.add_subcommand("sweep", "cost-report sweeps over epsilon and kappa"),
               sweep_flags);

    auto* gen = app.add_subcommand("gen", "generate a seeded instance configuration");
    std::string kind = "classical";
    int omega = 6, n = 1, d = 1, rank = 0;
    double kappa = 4.0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--kind", kind, "classical | quantum | quest")->required();
    gen->add_option("--omega", omega, "sample-space size (classical, default 6)");
    gen->add_option("--n", n, "qubit count (quantum/quest, default 1)");
    gen->add_option("--d", d, "number of constraints (default 1)");
    gen->add_option("--kappa", kappa, "condition bound for rho (default 4)");
    gen->add_option("--rank", rank, "rank of rho, 0 = full (quantum only)");
    gen->add_option("--seed", gen_seed, "RNG seed (default 0)");
    gen->add_option("--out", gen_out, "output path ('-' for stdout, the default)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const json cfg = esscher::run::generate_instance(kind, omega, n, d, kappa, rank,
                                                             gen_seed);
            write_report(cfg, gen_out);
            return 0;
        }
        if (app.get_subcommand("classical")->parsed())
            return execute("classical", classical_flags);
        if (app.get_subcommand("qesscher")->parsed())
            return execute("quantum-exact", quantum_flags);
        if (app.get_subcommand("quest")->parsed()) return execute("quest", quest_flags);
        if (app.get_subcommand("extract")->parsed()) return execute("extract", extract_flags);
        if (app.get_subcommand("sweep")->parsed()) return execute("sweep", sweep_flags);
    } catch (const esscher::io::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const esscher::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const esscher::ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
