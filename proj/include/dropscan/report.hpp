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
 * @file report.hpp
 * Serialisation of tomography results: a versioned JSON report, a per-point
 * droplet CSV with a loader, and the sampling-study table.
 *
 * All numbers are written with round-trip precision and no wall-clock data,
 * so identical inputs give byte-identical files.
 */

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "drops.hpp"
#include "error.hpp"
#include "tomography.hpp"

namespace dropscan {

inline constexpr const char *kVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char *kNoiseModel = "shot noise only; no readout-error mitigation";

using json = nlohmann::ordered_json;

inline json matrix_to_json(const ComplexMatrix &m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix matrix_from_json(const json &j) {
    const std::size_t n = j.size();
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        if (j[r].size() != n) {
            throw Error("matrix_from_json: matrix is not square");
        }
        for (std::size_t c = 0; c < n; ++c) {
            m(r, c) = {j[r][c].at(0).get<double>(), j[r][c].at(1).get<double>()};
        }
    }
    return m;
}

inline json grid_to_json(const SamplingGrid &g) {
    json pts = json::array();
    for (std::size_t i = 0; i < g.size(); ++i) {
        pts.push_back({g.points()[i].beta, g.points()[i].alpha, g.weights()[i]});
    }
    return {{"name", g.name()},
            {"scheme", g.scheme() == GridScheme::Equiangular ? "equiangular" : "imported"},
            {"resolution", g.resolution()},
            {"duplicate_seam", g.duplicate_seam()},
            {"size", g.size()},
            {"points", std::move(pts)}};
}

inline json droplets_to_json(const DropletSet &ds) {
    json out = json::array();
    for (const auto &[key, d] : ds.droplets) {
        json vals = json::array();
        for (const auto &v : d.values) {
            vals.push_back({v.real(), v.imag()});
        }
        out.push_back({{"label", label_name(key.label)}, {"rank", key.rank}, {"values", std::move(vals)}});
    }
    return out;
}

/// Peak of a rank-1 droplet with and without an injected error.
struct TiltRecord {
    Label label;
    GridPoint peak;
    std::optional<GridPoint> reference_peak;
};

inline json tilt_to_json(const TiltRecord &t) {
    constexpr double deg = 180.0 / std::numbers::pi;
    json j = {{"label", label_name(t.label)},
              {"peak_beta", t.peak.beta},
              {"peak_alpha", t.peak.alpha},
              {"axis_tilt_deg", axis_tilt(t.peak) * deg}};
    if (t.reference_peak) {
        j["reference_peak_beta"] = t.reference_peak->beta;
        j["reference_peak_alpha"] = t.reference_peak->alpha;
        j["deviation_deg"] = angular_distance(t.peak, *t.reference_peak) * deg;
        j["polar_shift_deg"] = std::abs(t.peak.beta - t.reference_peak->beta) * deg;
    }
    return j;
}

struct ReportContext {
    std::string subject;  ///< preparation or process description
    std::vector<InjectedError> injected;
    std::vector<TiltRecord> tilts;
    double grid_spacing_deg = 0.0;
};

inline json provenance_json(const DropletSet &ds, const ReportContext &ctx) {
    json inj = json::array();
    for (const auto &e : ctx.injected) {
        inj.push_back({{"qubit", e.qubit}, {"theta", e.angles.theta}, {"phi", e.angles.phi}, {"lambda", e.angles.lambda}});
    }
    json p = {{"tool", std::string("dropscan ") + kVersion},
              {"subject", ctx.subject},
              {"backend", ds.ideal() ? "ideal" : "sampled"},
              {"shots_per_point", ds.shots ? json(*ds.shots) : json(nullptr)},
              {"seed", ds.seed},
              {"grid", ds.grid->name()},
              {"noise_model", kNoiseModel},
              {"injected_errors", std::move(inj)}};
    return p;
}

inline json coefficients_json(const std::vector<complex> &coeffs, std::size_t n) {
    json out = json::array();
    const auto words = pauli_words(n);
    for (std::size_t k = 0; k < words.size(); ++k) {
        out.push_back({{"word", word_name(words[k])}, {"re", coeffs[k].real()}, {"im", coeffs[k].imag()}});
    }
    return out;
}

inline json state_report(const DropletSet &ds, const DensityEstimate &est, const ComplexMatrix &target,
                         const ReportContext &ctx) {
    json j = {{"schema_version", kReportSchemaVersion},
              {"kind", "state-tomography"},
              {"qubits", ds.qubits},
              {"grid", grid_to_json(*ds.grid)},
              {"droplets", droplets_to_json(ds)},
              {"coefficients", coefficients_json(est.r, ds.qubits)},
              {"matrix", matrix_to_json(est.rho)},
              {"target", matrix_to_json(target)},
              {"fidelity", state_fidelity(est.rho, target)},
              {"provenance", provenance_json(ds, ctx)}};
    if (!ctx.tilts.empty()) {
        json t = json::array();
        for (const auto &r : ctx.tilts) {
            t.push_back(tilt_to_json(r));
        }
        j["tilt"] = {{"grid_spacing_deg", ctx.grid_spacing_deg}, {"droplets", std::move(t)}};
    }
    return j;
}

inline json process_report(const DropletSet &ds, const ProcessEstimate &est, const ComplexMatrix &target,
                           const ReportContext &ctx) {
    return {{"schema_version", kReportSchemaVersion},
            {"kind", "process-tomography"},
            {"qubits", ds.qubits},
            {"grid", grid_to_json(*ds.grid)},
            {"droplets", droplets_to_json(ds)},
            {"coefficients", coefficients_json(est.c, 1)},
            {"matrix", matrix_to_json(est.u)},
            {"target", matrix_to_json(target)},
            {"fidelity", process_fidelity(est.u, target)},
            {"provenance", provenance_json(ds, ctx)}};
}

// ---------------------------------------------------------------------------
// Droplet CSV: label,rank,beta,alpha,re,im,abs,arg

struct DropletRecord {
    std::string label;
    int rank = 0;
    double beta = 0.0;
    double alpha = 0.0;
    double re = 0.0;
    double im = 0.0;
    double abs = 0.0;
    double arg = 0.0;
};

inline constexpr const char *kDropletCsvHeader = "label,rank,beta,alpha,re,im,abs,arg";

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<DropletRecord> droplet_records(const Droplet &d) {
    std::vector<DropletRecord> out;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto &p = d.grid->points()[i];
        const complex v = d.values[i];
        out.push_back({label_name(d.key.label), d.key.rank, p.beta, p.alpha, v.real(), v.imag(), std::abs(v), std::arg(v)});
    }
    return out;
}

inline std::vector<DropletRecord> droplet_records(const DropletSet &ds) {
    std::vector<DropletRecord> out;
    for (const auto &[k, d] : ds.droplets) {
        auto r = droplet_records(d);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

inline std::string droplet_csv(const std::vector<DropletRecord> &records) {
    std::string s = std::string(kDropletCsvHeader) + "\n";
    for (const auto &r : records) {
        s += r.label + "," + std::to_string(r.rank) + "," + format_g17(r.beta) + "," + format_g17(r.alpha) + "," +
             format_g17(r.re) + "," + format_g17(r.im) + "," + format_g17(r.abs) + "," + format_g17(r.arg) + "\n";
    }
    return s;
}

inline std::vector<DropletRecord> parse_droplet_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != kDropletCsvHeader) {
        throw Error("droplet csv: missing or unexpected header");
    }
    std::vector<DropletRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            f.push_back(tok);
        }
        if (f.size() != 8) {
            throw Error("droplet csv line " + std::to_string(line_no) + ": expected 8 fields");
        }
        try {
            std::size_t pos = 0;
            auto num = [&](const std::string &t) {
                const double v = std::stod(t, &pos);
                if (pos != t.size()) {
                    throw std::invalid_argument(t);
                }
                return v;
            };
            DropletRecord r;
            r.label = f[0];
            r.rank = std::stoi(f[1]);
            r.beta = num(f[2]);
            r.alpha = num(f[3]);
            r.re = num(f[4]);
            r.im = num(f[5]);
            r.abs = num(f[6]);
            r.arg = num(f[7]);
            out.push_back(r);
        } catch (const std::exception &) {
            throw Error("droplet csv line " + std::to_string(line_no) + ": malformed number");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sampling-study CSV.

inline constexpr const char *kStudyCsvHeader = "scheme,total_shots,shots_per_point,repeats,mean_fidelity,stddev";

inline std::string study_csv(const std::vector<StudyRow> &rows) {
    std::string s = std::string(kStudyCsvHeader) + "\n";
    for (const auto &r : rows) {
        s += r.scheme + "," + std::to_string(r.total_shots) + "," + std::to_string(r.shots_per_point) + "," +
             std::to_string(r.repeats) + "," + format_g17(r.mean_fidelity) + "," + format_g17(r.stddev) + "\n";
    }
    return s;
}

inline std::vector<StudyRow> parse_study_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != kStudyCsvHeader) {
        throw Error("study csv: missing or unexpected header");
    }
    std::vector<StudyRow> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        // Scheme names may contain ':' but never ','.
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            f.push_back(tok);
        }
        if (f.size() != 6) {
            throw Error("study csv line " + std::to_string(line_no) + ": expected 6 fields");
        }
        try {
            out.push_back({f[0], std::stoull(f[1]), std::stoull(f[2]), std::stoull(f[3]), std::stod(f[4]), std::stod(f[5])});
        } catch (const std::exception &) {
            throw Error("study csv line " + std::to_string(line_no) + ": malformed number");
        }
    }
    return out;
}

inline void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    out << text;
    if (!out) {
        throw Error("failed writing '" + path + "'");
    }
}

}  // namespace dropscan
