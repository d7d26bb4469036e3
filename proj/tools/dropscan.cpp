// Copyright 2026 The dropscan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dropscan command-line front end.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical invariant violation.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <dropscan/dropscan.hpp>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct Flags {
    std::string config;
    std::string prep;
    std::string unitary;
    std::vector<std::string> grids;
    std::string shots;
    std::uint64_t seed = 0;
    std::string out;
    std::vector<std::string> inject;
    std::size_t repeats = 0;
    std::vector<std::uint64_t> budgets;
    std::size_t qubits = 0;
};

void add_shared(CLI::App *cmd, Flags &f) {
    cmd->add_option("--config", f.config, "JSON config file (flags override it)");
    cmd->add_option("--grid", f.grids, "equiangular:M=<M>[,seam=0] or file:<path>");
    cmd->add_option("--shots", f.shots, "shots per grid point, or 'ideal'");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--repeats", f.repeats, "repetitions per sampling-study cell");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"dropscan: scanning droplet tomography on a simulated qubit device"};
    app.require_subcommand(1);
    Flags f;

    auto *state = app.add_subcommand("state-tomo", "tomograph a 1- or 2-qubit state");
    add_shared(state, f);
    state->add_option("--prep", f.prep, "builtin state (zero, plus, plus-i, table2, bell, 00+01, study) or file:<circuit>");
    state->add_option("--inject-error", f.inject, "extra rotation q<i>:theta,phi,lambda (repeatable)");

    auto *process = app.add_subcommand("process-tomo", "tomograph a single-qubit unitary");
    add_shared(process, f);
    process->add_option("--unitary", f.unitary, "H, X, Ry(3pi/2), I, or matrix:re,im,... (row-major 2x2)");

    auto *study = app.add_subcommand("sampling-study", "compare sampling grids at equal total shots");
    add_shared(study, f);
    study->add_option("--prep", f.prep, "builtin state or file:<circuit>");
    study->add_option("--budgets", f.budgets, "total shot budgets N_tot")->delimiter(',');

    auto *basis = app.add_subcommand("export-basis", "dump ideal Pauli basis droplets");
    add_shared(basis, f);
    basis->add_option("--qubits", f.qubits, "1 or 2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        dropscan::ExperimentConfig cfg;
        CLI::App *cmd = app.get_subcommands().front();
        cfg.mode = dropscan::parse_mode(cmd->get_name());
        if (cfg.mode == dropscan::ExperimentMode::SamplingStudy) {
            cfg.prep = "study";
            cfg.grids = {"equiangular:M=7"};
        }
        if (!f.config.empty()) {
            dropscan::load_config_file(cfg, f.config);
            cfg.mode = dropscan::parse_mode(cmd->get_name());
        }
        auto given = [&](const char *name) { return cmd->get_option_no_throw(name) && cmd->count(name) > 0; };
        if (given("--prep")) cfg.prep = f.prep;
        if (given("--unitary")) cfg.unitary = f.unitary;
        if (given("--grid")) cfg.grids = f.grids;
        if (given("--shots")) cfg.shots = dropscan::parse_shots(f.shots);
        if (given("--seed")) cfg.seed = f.seed;
        if (given("--out")) cfg.out_dir = f.out;
        if (given("--repeats")) cfg.repeats = f.repeats;
        if (given("--budgets")) cfg.budgets = f.budgets;
        if (given("--qubits")) cfg.qubits = f.qubits;
        if (given("--inject-error")) {
            cfg.injected.clear();
            for (const auto &s : f.inject) {
                cfg.injected.push_back(dropscan::parse_injected_error(s));
            }
        }

        const auto files = dropscan::run_experiment(cfg);
        std::filesystem::create_directories(cfg.out_dir);
        for (const auto &[name, text] : files) {
            const auto path = (std::filesystem::path(cfg.out_dir) / name).string();
            dropscan::write_text_file(path, text);
            std::cout << "wrote " << path << "\n";
        }
        return 0;
    } catch (const dropscan::InvariantViolation &e) {
        std::cerr << "dropscan: invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const dropscan::Error &e) {
        std::cerr << "dropscan: error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "dropscan: error: " << e.what() << "\n";
        return kExitConfig;
    }
}
