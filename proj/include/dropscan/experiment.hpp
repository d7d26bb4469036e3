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

#pragma once

/**
 * @file experiment.hpp
 * Declarative experiment configuration for the command-line front end and the
 * runners that turn a configuration into output files.
 *
 * Configuration precedence is: command-line flags > JSON config file >
 * built-in defaults. Runners return file contents keyed by file name so they
 * can be exercised without touching the filesystem.
 */

#include <cctype>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "circuits.hpp"
#include "error.hpp"
#include "report.hpp"
#include "sampling.hpp"
#include "tomography.hpp"

namespace dropscan {

enum class ExperimentMode { StateTomo, ProcessTomo, SamplingStudy, ExportBasis };

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::StateTomo;
    std::string prep = "zero";     ///< builtin state name or file:<circuit text>
    std::string unitary = "H";     ///< builtin process name or matrix:re,im,... (row-major)
    std::vector<std::string> grids{"equiangular:M=7"};
    ShotSpec shots = 8192;
    std::uint64_t seed = 1;
    std::vector<InjectedError> injected;
    std::vector<std::uint64_t> budgets;
    std::size_t repeats = 100;
    std::size_t qubits = 1;        ///< export-basis only
    std::string out_dir = ".";
};

inline ShotSpec parse_shots(const std::string &s) {
    if (s == "ideal") {
        return kIdeal;
    }
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size() || v < 1) {
            throw Error("");
        }
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception &) {
        throw Error("shots must be a positive integer or 'ideal', got '" + s + "'");
    }
}

/// Parses an angle such as "0.3", "pi", "-pi/2", "3pi/2", "pi/12" or "2*pi/9".
inline double parse_angle(const std::string &text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '*') {
            s.push_back(c);
        }
    }
    auto fail = [&]() -> double { throw Error("cannot parse angle '" + text + "'"); };
    if (s.empty()) {
        return fail();
    }
    double sign = 1.0;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') {
        sign = s[i] == '-' ? -1.0 : 1.0;
        ++i;
    }
    const auto pi_at = s.find("pi", i);
    try {
        if (pi_at == std::string::npos) {
            std::size_t pos = 0;
            const double v = std::stod(s.substr(i), &pos);
            if (pos != s.size() - i) {
                return fail();
            }
            return sign * v;
        }
        double factor = 1.0;
        if (pi_at > i) {
            std::size_t pos = 0;
            factor = std::stod(s.substr(i, pi_at - i), &pos);
            if (pos != pi_at - i) {
                return fail();
            }
        }
        double divisor = 1.0;
        const std::string rest = s.substr(pi_at + 2);
        if (!rest.empty()) {
            if (rest[0] != '/' || rest.size() < 2) {
                return fail();
            }
            std::size_t pos = 0;
            divisor = std::stod(rest.substr(1), &pos);
            if (pos != rest.size() - 1 || divisor == 0.0) {
                return fail();
            }
        }
        return sign * factor * std::numbers::pi / divisor;
    } catch (const std::logic_error &) {
        return fail();
    }
}

/// Parses "q<i>:theta,phi,lambda".
inline InjectedError parse_injected_error(const std::string &s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos || colon < 2 || s[0] != 'q') {
        throw Error("injected error must look like q<i>:theta,phi,lambda, got '" + s + "'");
    }
    InjectedError e;
    try {
        std::size_t pos = 0;
        const std::string idx = s.substr(1, colon - 1);
        e.qubit = std::stoul(idx, &pos);
        if (pos != idx.size()) {
            throw Error("");
        }
    } catch (const std::exception &) {
        throw Error("bad qubit index in injected error '" + s + "'");
    }
    std::vector<std::string> parts;
    std::stringstream ss(s.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        parts.push_back(tok);
    }
    if (parts.size() != 3) {
        throw Error("injected error needs three angles, got '" + s + "'");
    }
    e.angles = {parse_angle(parts[0]), parse_angle(parts[1]), parse_angle(parts[2])};
    return e;
}

/// Builtin process name or "matrix:re00,im00,re01,im01,re10,im10,re11,im11".
inline ComplexMatrix parse_unitary(const std::string &s) {
    const std::string prefix = "matrix:";
    if (s.rfind(prefix, 0) != 0) {
        return builtin_process(s);
    }
    std::vector<double> v;
    std::stringstream ss(s.substr(prefix.size()));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        v.push_back(parse_angle(tok));
    }
    if (v.size() != 8) {
        throw Error("inline matrix needs 8 numbers (re,im pairs of a 2x2 matrix), got " + std::to_string(v.size()));
    }
    ComplexMatrix u(2, 2, {complex(v[0], v[1]), complex(v[2], v[3]), complex(v[4], v[5]), complex(v[6], v[7])});
    require_unitary(u, "inline process matrix");
    return u;
}

/// Builtin state name or "file:<path>" holding a circuit in text form.
inline Circuit resolve_prep(const std::string &s, std::string *description = nullptr) {
    const std::string prefix = "file:";
    if (s.rfind(prefix, 0) == 0) {
        std::ifstream in(s.substr(prefix.size()));
        if (!in) {
            throw Error("cannot open circuit file '" + s.substr(prefix.size()) + "'");
        }
        std::stringstream buf;
        buf << in.rdbuf();
        Circuit c = circuit_from_text(buf.str());
        if (description) {
            *description = c.label().empty() ? s : c.label();
        }
        return c;
    }
    auto b = builtin_state(s);
    if (description) {
        *description = b.name + ": " + b.description;
    }
    return b.prep;
}

inline ExperimentMode parse_mode(const std::string &s) {
    if (s == "state-tomo") {
        return ExperimentMode::StateTomo;
    }
    if (s == "process-tomo") {
        return ExperimentMode::ProcessTomo;
    }
    if (s == "sampling-study") {
        return ExperimentMode::SamplingStudy;
    }
    if (s == "export-basis") {
        return ExperimentMode::ExportBasis;
    }
    throw Error("unknown mode '" + s + "'");
}

/// Overlays the fields present in a JSON config document onto `cfg`.
inline void apply_config_json(ExperimentConfig &cfg, const nlohmann::json &j) {
    try {
        for (const auto &[key, val] : j.items()) {
            if (key == "mode") {
                cfg.mode = parse_mode(val.get<std::string>());
            } else if (key == "prep") {
                cfg.prep = val.get<std::string>();
            } else if (key == "unitary") {
                cfg.unitary = val.get<std::string>();
            } else if (key == "grid") {
                cfg.grids = val.is_array() ? val.get<std::vector<std::string>>()
                                           : std::vector<std::string>{val.get<std::string>()};
            } else if (key == "shots") {
                cfg.shots = val.is_string() ? parse_shots(val.get<std::string>())
                                            : parse_shots(std::to_string(val.get<long long>()));
            } else if (key == "seed") {
                cfg.seed = val.get<std::uint64_t>();
            } else if (key == "inject_error") {
                cfg.injected.clear();
                for (const auto &e : val) {
                    cfg.injected.push_back(parse_injected_error(e.get<std::string>()));
                }
            } else if (key == "budgets") {
                cfg.budgets = val.get<std::vector<std::uint64_t>>();
            } else if (key == "repeats") {
                cfg.repeats = val.get<std::size_t>();
            } else if (key == "qubits") {
                cfg.qubits = val.get<std::size_t>();
            } else if (key == "out") {
                cfg.out_dir = val.get<std::string>();
            } else {
                throw Error("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw Error(std::string("config: ") + e.what());
    }
}

inline void load_config_file(ExperimentConfig &cfg, const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config file '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw Error("config file '" + path + "': " + e.what());
    }
    if (!j.is_object()) {
        throw Error("config file '" + path + "' must hold a JSON object");
    }
    apply_config_json(cfg, j);
}

/// Output files by name.
using OutputFiles = std::map<std::string, std::string>;

inline GridPtr single_grid(const ExperimentConfig &cfg) {
    if (cfg.grids.size() != 1) {
        throw Error("this mode takes exactly one grid");
    }
    return grid_from_spec(cfg.grids.front());
}

inline std::vector<TiltRecord> linear_tilts(const DropletSet &ds, const DropletSet *reference) {
    std::vector<TiltRecord> out;
    for (const auto &k : droplet_keys(ds.qubits)) {
        if (k.rank != 1 || k.label == Label::Both) {
            continue;
        }
        TiltRecord t{k.label, droplet_peak(ds.at(k)), std::nullopt};
        if (reference) {
            t.reference_peak = droplet_peak(reference->at(k));
        }
        out.push_back(t);
    }
    return out;
}

inline OutputFiles run_state_tomo(const ExperimentConfig &cfg) {
    ReportContext ctx;
    const Circuit base = resolve_prep(cfg.prep, &ctx.subject);
    const std::size_t n = base.width();
    const GridPtr grid = single_grid(cfg);
    for (const auto &e : cfg.injected) {
        if (e.qubit >= n) {
            throw Error("injected error targets qubit " + std::to_string(e.qubit) + " of a " + std::to_string(n) +
                        "-qubit preparation");
        }
    }
    ctx.injected = cfg.injected;
    const Circuit prep = inject_error(base, cfg.injected);
    const auto ds = state_tomography(prep, n, grid, cfg.shots, cfg.seed);
    const auto est = reconstruct_density(ds);
    if (!is_hermitian(est.rho) || std::abs(est.rho.trace() - 1.0) > kTolerances.density) {
        throw InvariantViolation("reconstructed density matrix is not Hermitian with unit trace");
    }
    // The target is the state actually prepared, errors included.
    const ComplexMatrix target = run_statevector(prep).density();
    ctx.grid_spacing_deg = grid->spacing() * 180.0 / std::numbers::pi;
    if (cfg.injected.empty()) {
        ctx.tilts = linear_tilts(ds, nullptr);
    } else {
        const auto ref = state_tomography(base, n, grid, cfg.shots, cfg.seed);
        ctx.tilts = linear_tilts(ds, &ref);
    }
    const auto report = state_report(ds, est, target, ctx);
    const double f = report["fidelity"].get<double>();
    if (f > 1.0 + kTolerances.fidelity_slack || f < -kTolerances.fidelity_slack) {
        throw InvariantViolation("state fidelity outside [0, 1]");
    }
    return {{"report.json", report.dump(2) + "\n"}, {"droplets.csv", droplet_csv(droplet_records(ds))}};
}

inline OutputFiles run_process_tomo(const ExperimentConfig &cfg) {
    if (!cfg.injected.empty()) {
        throw Error("--inject-error applies to state tomography only");
    }
    const ComplexMatrix u = parse_unitary(cfg.unitary);
    const GridPtr grid = single_grid(cfg);
    const auto ds = process_tomography(u, grid, cfg.shots, cfg.seed);
    const auto est = reconstruct_process(ds);
    ReportContext ctx;
    ctx.subject = cfg.unitary;
    const auto report = process_report(ds, est, u, ctx);
    const double f = report["fidelity"].get<double>();
    if (f > 1.0 + kTolerances.fidelity_slack) {
        throw InvariantViolation("process fidelity exceeds 1");
    }
    return {{"report.json", report.dump(2) + "\n"}, {"droplets.csv", droplet_csv(droplet_records(ds))}};
}

inline OutputFiles run_sampling_study(const ExperimentConfig &cfg) {
    if (cfg.budgets.size() < 2) {
        throw Error("sampling-study needs at least two shot budgets");
    }
    const Circuit prep = resolve_prep(cfg.prep);
    std::vector<GridPtr> grids;
    for (const auto &g : cfg.grids) {
        grids.push_back(grid_from_spec(g));
    }
    const auto rows = sampling_study(prep, grids, cfg.budgets, cfg.repeats, cfg.seed);
    return {{"study.csv", study_csv(rows)}};
}

inline OutputFiles run_export_basis(const ExperimentConfig &cfg) {
    if (cfg.qubits != 1 && cfg.qubits != 2) {
        throw Error("export-basis supports 1 or 2 qubits");
    }
    const GridPtr grid = single_grid(cfg);
    std::string csv = "word," + std::string(kDropletCsvHeader) + "\n";
    for (const auto &w : pauli_words(cfg.qubits)) {
        const auto recs = droplet_records(basis_droplet(w, grid));
        const std::string body = droplet_csv(recs);
        std::stringstream ss(body);
        std::string line;
        std::getline(ss, line);  // header
        while (std::getline(ss, line)) {
            csv += word_name(w) + "," + line + "\n";
        }
    }
    return {{"basis_droplets.csv", csv}};
}

inline OutputFiles run_experiment(const ExperimentConfig &cfg) {
    switch (cfg.mode) {
    case ExperimentMode::StateTomo:
        return run_state_tomo(cfg);
    case ExperimentMode::ProcessTomo:
        return run_process_tomo(cfg);
    case ExperimentMode::SamplingStudy:
        return run_sampling_study(cfg);
    case ExperimentMode::ExportBasis:
        return run_export_basis(cfg);
    }
    throw Error("unknown mode");
}

}  // namespace dropscan
