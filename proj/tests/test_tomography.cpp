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

#include <gtest/gtest.h>

#include <numbers>
#include <random>
#include <set>

#include "test_util.hpp"

using namespace dropscan;
using std::numbers::pi;

namespace {

ComplexMatrix target_of(const Circuit &prep) { return run_statevector(prep).density(); }

double phase_aligned_error(const std::vector<complex> &c, const std::vector<complex> &ref) {
    // Remove the global phase that best aligns c with ref, then take the max deviation.
    complex overlap = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        overlap += std::conj(c[k]) * ref[k];
    }
    const complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : 1.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        worst = std::max(worst, std::abs(phase * c[k] - ref[k]));
    }
    return worst;
}

TEST(DetectionSettings, SingleQubitNeedsNoRotation) {
    const auto s = detection_settings(1, {Label::One, 1});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_FALSE(s[0].rotations[0].has_value());
    EXPECT_EQ(s[0].word, std::vector<Axis>{Axis::Z});
}

TEST(DetectionSettings, BilinearRankOne) {
    const auto s = detection_settings(2, {Label::Both, 1});
    ASSERT_EQ(s.size(), 2u);
    const double w = rank_prefactor(1) / (2.0 * std::sqrt(2.0));
    EXPECT_EQ(s[0].word, (std::vector<Axis>{Axis::X, Axis::Y}));
    EXPECT_EQ(s[1].word, (std::vector<Axis>{Axis::Y, Axis::X}));
    EXPECT_NEAR(std::abs(s[0].weight - w), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s[1].weight + w), 0.0, 1e-15);
}

TEST(DetectionSettings, FiveCircuitsForTwoQubits) {
    std::set<std::string> circuits;
    for (const auto &s : all_detection_settings(2, TomographyMode::State)) {
        circuits.insert(s.circuit);
    }
    EXPECT_EQ(circuits, (std::set<std::string>{"zz", "xx", "yy", "xy", "yx"}));
    std::set<std::string> process;
    for (const auto &s : all_detection_settings(1, TomographyMode::Process)) {
        process.insert(s.circuit);
    }
    EXPECT_EQ(process.size(), 2u);
}

TEST(DetectionSettings, RotationsRealiseClaimedWord) {
    for (auto mode : {TomographyMode::State, TomographyMode::Process}) {
        for (std::size_t n : {1u, 2u}) {
            if (mode == TomographyMode::Process && n == 2) {
                continue;
            }
            for (const auto &s : all_detection_settings(n, mode)) {
                const std::size_t width = s.word.size();
                // z-string selected by the mask.
                std::vector<Axis> zword(width, Axis::I);
                for (std::size_t q = 0; q < width; ++q) {
                    if (s.mask & (std::size_t{1} << (width - 1 - q))) {
                        zword[q] = Axis::Z;
                    }
                }
                const auto v = circuit_unitary(detection_circuit(s));
                EXPECT_LT(max_abs_diff(v.adjoint() * pauli_word(zword) * v, pauli_word(s.word)), 1e-12)
                    << s.circuit << " " << word_name(s.word);
                for (const auto &r : s.rotations) {
                    if (r) {
                        EXPECT_TRUE(is_unitary(u3_matrix(*r)));
                    }
                }
            }
        }
    }
}

TEST(DetectionSettings, WeightedSumIsScaledAxialTensor) {
    for (std::size_t n : {1u, 2u}) {
        for (const auto &k : droplet_keys(n)) {
            ComplexMatrix sum = ComplexMatrix::zeros(std::size_t{1} << n);
            for (const auto &s : detection_settings(n, k)) {
                sum = sum + s.weight * pauli_word(s.word);
            }
            EXPECT_LT(max_abs_diff(sum, rank_prefactor(k.rank) * axial_tensor(n, k)), 1e-15) << to_string(k);
        }
    }
}

TEST(DetectionSettings, IllegalKey) { EXPECT_THROW(detection_settings(1, {Label::Both, 0}), Error); }

TEST(StateTomography, ZeroStateClosedForm) {
    const auto g = default_grid();
    const auto ds = state_tomography(builtin_state("zero").prep, 1, g);
    const auto &f0 = ds.at({Label::Empty, 0});
    const auto &f1 = ds.at({Label::One, 1});
    for (std::size_t i = 0; i < g->size(); ++i) {
        EXPECT_NEAR(std::abs(f0.values[i] - std::sqrt(1.0 / (8 * pi))), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(f1.values[i] - std::sqrt(3.0 / (8 * pi)) * std::cos(g->points()[i].beta)), 0.0, 1e-12);
    }
}

TEST(StateTomography, PlusPeaksAlongX) {
    const auto g = default_grid();
    const auto ds = state_tomography(builtin_state("plus").prep, 1, g);
    const auto peak = droplet_peak(ds.at({Label::One, 1}));
    // 8x15 grid has no equator row; the peak sits on the rows nearest pi/2 at alpha = 0.
    EXPECT_LE(std::abs(peak.beta - pi / 2), g->spacing());
    EXPECT_NEAR(std::sin(peak.alpha), 0.0, 1e-12);
    const auto fine = equiangular_grid(12);
    const auto dsf = state_tomography(builtin_state("plus").prep, 1, fine);
    const auto pf = droplet_peak(dsf.at({Label::One, 1}));
    EXPECT_NEAR(pf.beta, pi / 2, 1e-12);
}

TEST(StateTomography, BellHasNoLinearDroplets) {
    const auto g = default_grid();
    const auto ds = state_tomography(builtin_state("bell").prep, 2, g);
    EXPECT_LT(ds.at({Label::One, 1}).l2_norm(), 1e-10);
    EXPECT_LT(ds.at({Label::Two, 1}).l2_norm(), 1e-10);
    EXPECT_GT(ds.at({Label::Both, 0}).l2_norm(), 0.1);
    EXPECT_GT(ds.at({Label::Both, 2}).l2_norm(), 0.1);
    // Oracle: reduced states are maximally mixed.
    const auto rho = target_of(builtin_state("bell").prep);
    EXPECT_LT(max_abs_diff(reduced_density(rho, 0), 0.5 * ComplexMatrix::identity(2)), 1e-15);
}

TEST(StateTomography, IdealValuesMatchOperatorDroplets) {
    std::mt19937_64 rng(41);
    const auto g = equiangular_grid(6);
    const auto psi = testkit::random_state(2, rng);
    const auto ds = state_tomography(testkit::prep_for2(psi), 2, g);
    for (const auto &k : droplet_keys(2)) {
        const auto ref = operator_droplet(psi.density(), 2, k, g);
        for (std::size_t i = 0; i < g->size(); ++i) {
            EXPECT_LT(std::abs(ds.at(k).values[i] - ref.values[i]), 1e-12) << to_string(k);
        }
    }
}

TEST(StateTomography, RejectsBadInput) {
    const auto g = default_grid();
    EXPECT_THROW(state_tomography(Circuit(3), 3, g), Error);
    EXPECT_THROW(state_tomography(Circuit(1), 2, g), Error);
    EXPECT_THROW(state_tomography(Circuit(1), 1, g, std::uint64_t{0}), Error);
}

TEST(StateTomography, SampledIsDeterministicPerSeed) {
    const auto g = default_grid();
    const auto prep = builtin_state("bell").prep;
    const auto a = state_tomography(prep, 2, g, 1000, 5);
    const auto b = state_tomography(prep, 2, g, 1000, 5);
    const auto c = state_tomography(prep, 2, g, 1000, 6);
    EXPECT_EQ(a.at({Label::Both, 2}).values, b.at({Label::Both, 2}).values);
    EXPECT_NE(a.at({Label::Both, 2}).values, c.at({Label::Both, 2}).values);
}

TEST(StateTomography, ShotNoiseScalesAsInverseSqrt) {
    const auto g = default_grid();
    const auto prep = builtin_state("00+01").prep;
    const auto ideal = state_tomography(prep, 2, g);
    std::vector<double> xs, ys;
    for (std::uint64_t shots : {256u, 1024u, 4096u, 16384u, 65536u}) {
        double err2 = 0.0;
        std::size_t count = 0;
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const auto ds = state_tomography(prep, 2, g, shots, seed);
            for (const auto &k : droplet_keys(2)) {
                for (std::size_t i = 0; i < g->size(); ++i) {
                    err2 += std::norm(ds.at(k).values[i] - ideal.at(k).values[i]);
                    ++count;
                }
            }
        }
        xs.push_back(std::log(static_cast<double>(shots)));
        ys.push_back(0.5 * std::log(err2 / static_cast<double>(count)));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    EXPECT_NEAR(sxy / sxx, -0.5, 0.1);
}

TEST(ProcessTomography, IdentityProcess) {
    const auto g = default_grid();
    const auto ds = process_tomography(ComplexMatrix::identity(2), g);
    EXPECT_LT(ds.at({Label::One, 1}).l2_norm(), 1e-12);
    for (const auto &v : ds.at({Label::Empty, 0}).values) {
        // Ancilla readout carries tr(T U)/4: |f0| = 1/(4 sqrt(2 pi)).
        EXPECT_NEAR(std::abs(v), 1.0 / (4.0 * std::sqrt(2.0 * pi)), 1e-12);
    }
}

TEST(ProcessTomography, NotGateHasSigmaXShape) {
    const auto g = equiangular_grid(10);
    const auto ds = process_tomography(pauli(Axis::X), g);
    const auto ref = basis_droplet({Axis::X}, g);
    for (std::size_t i = 0; i < g->size(); ++i) {
        EXPECT_LT(std::abs(4.0 * ds.at({Label::One, 1}).values[i] - ref.values[i]), 1e-12);
    }
}

TEST(ProcessTomography, AncillaAndSystemSideAgree) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> bd(0.0, pi), ad(0.0, 2 * pi);
    for (int t = 0; t < 20; ++t) {
        const auto u = testkit::random_unitary2(rng);
        for (int p = 0; p < 20; ++p) {
            const double b = bd(rng), a = ad(rng);
            for (const auto &k : droplet_keys(1)) {
                EXPECT_LT(std::abs(testkit::ancilla_side_value(u, k, b, a) - testkit::operator_side_value(u, k, b, a)),
                          1e-10);
            }
        }
    }
}

TEST(ProcessTomography, PipelineMatchesOperatorSide) {
    std::mt19937_64 rng(52);
    const auto g = equiangular_grid(5);
    const auto u = testkit::random_unitary2(rng);
    const auto ds = process_tomography(u, g);
    for (const auto &k : droplet_keys(1)) {
        for (std::size_t i = 0; i < g->size(); ++i) {
            const auto &p = g->points()[i];
            EXPECT_LT(std::abs(4.0 * ds.at(k).values[i] - testkit::operator_side_value(u, k, p.beta, p.alpha)), 1e-12);
        }
    }
}

TEST(ProcessTomography, RejectsNonUnitary) {
    EXPECT_THROW(process_tomography(2.0 * pauli(Axis::X), default_grid()), Error);
    EXPECT_THROW(process_tomography(ComplexMatrix::identity(4), default_grid()), Error);
}

TEST(TemporalAverage, MaximallyMixedZ) {
    const std::vector<ZExpectations> runs{{1, {1.0, 1.0}}, {1, {1.0, -1.0}}};
    EXPECT_EQ(temporal_average(runs, 1)[1], 0.0);
    EXPECT_THROW(temporal_average(std::span(runs).first(1), 1), Error);
}

void check_temporal_average(std::size_t system_qubits, std::mt19937_64 &rng) {
    const std::size_t width = system_qubits + 1;
    const auto u = testkit::random_unitary(std::size_t{1} << system_qubits, rng);
    Circuit c = process_mapping_circuit(u);
    c.add(scan_rotation_gate(0.7, 2.1, 1));
    c.add(Gate::u3(0, -pi / 2, 0, 0));
    std::vector<ZExpectations> runs;
    for (const auto &init : temporal_average_inputs(system_qubits)) {
        runs.push_back(expectations_from_probabilities(probabilities(run_statevector(c, init)), width));
    }
    const auto avg = temporal_average(runs, system_qubits);
    // Density-matrix oracle: W (|0><0| (x) 1/2^N) W^dagger.
    const auto w = circuit_unitary(c);
    const ComplexMatrix rho0 =
        kron(StateVector::basis(1).density(),
             (1.0 / static_cast<double>(std::size_t{1} << system_qubits)) *
                 ComplexMatrix::identity(std::size_t{1} << system_qubits));
    const auto rho = w * rho0 * w.adjoint();
    for (std::size_t mask = 0; mask < (std::size_t{1} << width); ++mask) {
        std::vector<Axis> word(width, Axis::I);
        for (std::size_t q = 0; q < width; ++q) {
            if (mask & (std::size_t{1} << (width - 1 - q))) {
                word[q] = Axis::Z;
            }
        }
        EXPECT_NEAR(avg[mask], expectation(pauli_word(word), rho).real(), 1e-12);
    }
}

TEST(TemporalAverage, MatchesDensityMatrixOracle) {
    std::mt19937_64 rng(61);
    check_temporal_average(1, rng);
    check_temporal_average(2, rng);
}

TEST(Reconstruct, ZeroStateCoefficients) {
    const auto est = reconstruct_density(state_tomography(builtin_state("zero").prep, 1, testkit::lebedev_grid()));
    const std::vector<complex> expect{0.5, 0.0, 0.0, 0.5};
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_LT(std::abs(est.r[k] - expect[k]), 1e-6);
    }
    EXPECT_LT(max_abs_diff(est.rho, StateVector::basis(1).density()), 1e-6);
}

TEST(Reconstruct, BellCoefficients) {
    const auto est = reconstruct_density(state_tomography(builtin_state("bell").prep, 2, testkit::lebedev_grid()));
    const auto words = pauli_words(2);
    for (std::size_t k = 0; k < words.size(); ++k) {
        const std::string w = word_name(words[k]);
        const double expect = (w == "II" || w == "xx" || w == "zz") ? 0.25 : (w == "yy" ? -0.25 : 0.0);
        EXPECT_LT(std::abs(est.r[k] - expect), 1e-6) << w;
    }
}

TEST(Reconstruct, IdentityOnlyGivesMaximallyMixed) {
    for (std::size_t n : {1u, 2u}) {
        auto ds = state_tomography(Circuit(n), n, default_grid());
        for (auto &[k, d] : ds.droplets) {
            if (k.label != Label::Empty) {
                std::fill(d.values.begin(), d.values.end(), complex(0.0));
            }
        }
        const auto est = reconstruct_density(ds);
        const double dim = static_cast<double>(std::size_t{1} << n);
        EXPECT_LT(max_abs_diff(est.rho, (1.0 / dim) * ComplexMatrix::identity(std::size_t{1} << n)), 1e-12);
    }
}

TEST(Reconstruct, MissingKeyThrows) {
    auto ds = state_tomography(Circuit(2), 2, default_grid());
    ds.droplets.erase({Label::Both, 1});
    EXPECT_THROW(reconstruct_density(ds), Error);
    auto ps = process_tomography(pauli(Axis::X), default_grid());
    ps.droplets.erase({Label::One, 1});
    EXPECT_THROW(reconstruct_process(ps), Error);
    EXPECT_THROW(reconstruct_process(state_tomography(Circuit(1), 1, default_grid())), Error);
}

TEST(Reconstruct, CoefficientsMatchTraceOracle) {
    std::mt19937_64 rng(71);
    const auto g = testkit::lebedev_grid();
    for (std::size_t n : {1u, 2u}) {
        for (int t = 0; t < 5; ++t) {
            const auto psi = testkit::random_state(n, rng);
            const auto prep = n == 1 ? testkit::prep_for(psi) : testkit::prep_for2(psi);
            const auto est = reconstruct_density(state_tomography(prep, n, g));
            const auto oracle = testkit::pauli_coefficients(psi.density(), n);
            for (std::size_t k = 0; k < oracle.size(); ++k) {
                EXPECT_LT(std::abs(est.r[k] - oracle[k]), 1e-6);
            }
        }
    }
}

TEST(Reconstruct, ProcessCoefficients) {
    const auto g = testkit::lebedev_grid();
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_LT(phase_aligned_error(reconstruct_process(process_tomography(pauli(Axis::X), g)).c, {0, 1, 0, 0}), 1e-6);
    EXPECT_LT(phase_aligned_error(reconstruct_process(process_tomography(hadamard_matrix(), g)).c, {0, r, 0, r}), 1e-6);
    EXPECT_LT(phase_aligned_error(reconstruct_process(process_tomography(ComplexMatrix::identity(2), g)).c,
                                  {1, 0, 0, 0}),
              1e-6);
}

TEST(Reconstruct, CalibratedConstants) {
    for (const auto &g : {default_grid(), equiangular_grid(28), testkit::lebedev_grid()}) {
        EXPECT_NEAR(calibrate_kappa(1, TomographyMode::State, g), kStateKappa, 1e-12) << g->name();
        EXPECT_NEAR(calibrate_kappa(2, TomographyMode::State, g), kStateKappa, 1e-12) << g->name();
        EXPECT_NEAR(calibrate_kappa(1, TomographyMode::Process, g), kProcessKappa, 1e-12) << g->name();
    }
}

TEST(RoundTrip, RandomStates) {
    std::mt19937_64 rng(81);
    const auto coarse = default_grid();
    const auto dense = equiangular_grid(28);
    for (std::size_t n : {1u, 2u}) {
        for (int t = 0; t < 20; ++t) {
            const auto psi = testkit::random_state(n, rng);
            const auto prep = n == 1 ? testkit::prep_for(psi) : testkit::prep_for2(psi);
            const auto target = psi.density();
            ASSERT_GT(state_fidelity(target_of(prep), target), 1.0 - 1e-12);
            const auto ec = reconstruct_density(state_tomography(prep, n, coarse));
            const auto ed = reconstruct_density(state_tomography(prep, n, dense));
            EXPECT_GE(state_fidelity(ec.rho, target), 0.999);
            EXPECT_GE(state_fidelity(ed.rho, target), 1.0 - 1e-6);
            EXPECT_TRUE(is_hermitian(ed.rho, 1e-12));
            EXPECT_NEAR(ed.rho.trace().real(), 1.0, 1e-12);
        }
    }
}

TEST(RoundTrip, RandomUnitaries) {
    std::mt19937_64 rng(82);
    const auto dense = equiangular_grid(28);
    for (int t = 0; t < 20; ++t) {
        const auto u = testkit::random_unitary2(rng);
        const auto est = reconstruct_process(process_tomography(u, dense));
        const double f = process_fidelity(est.u, u);
        EXPECT_GE(f, 1.0 - 1e-6);
        EXPECT_LE(f, 1.0 + kTolerances.fidelity_slack);
    }
}

TEST(RoundTrip, BlochAlignment) {
    std::mt19937_64 rng(83);
    const auto g = equiangular_grid(12);
    for (int t = 0; t < 20; ++t) {
        const auto psi = testkit::random_state(1, rng);
        const auto rho = psi.density();
        const double x = expectation(pauli(Axis::X), rho).real();
        const double y = expectation(pauli(Axis::Y), rho).real();
        const double z = expectation(pauli(Axis::Z), rho).real();
        const GridPoint bloch{std::acos(std::clamp(z, -1.0, 1.0)), std::atan2(y, x)};
        const auto peak = droplet_peak(state_tomography(testkit::prep_for(psi), 1, g).at({Label::One, 1}));
        EXPECT_LE(angular_distance(peak, bloch), g->spacing());
    }
}

TEST(Fidelity, StateExamples) {
    const auto z0 = StateVector::basis(1, 0).density();
    const auto z1 = StateVector::basis(1, 1).density();
    const auto plus = target_of(builtin_state("plus").prep);
    EXPECT_NEAR(state_fidelity(z0, z0), 1.0, 1e-15);
    EXPECT_NEAR(state_fidelity(z0, z1), 0.0, 1e-15);
    EXPECT_NEAR(state_fidelity(z0, plus), 0.5, 1e-15);
    EXPECT_THROW(state_fidelity(ComplexMatrix::zeros(2), z0), Error);
    EXPECT_THROW(state_fidelity(z0, ComplexMatrix::identity(4)), Error);
}

TEST(Fidelity, ProcessExamples) {
    const auto h = hadamard_matrix();
    EXPECT_NEAR(process_fidelity(h, h), 1.0, 1e-15);
    EXPECT_NEAR(process_fidelity(h, pauli(Axis::X)), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(process_fidelity(std::polar(1.0, 0.77) * h, h), 1.0, 1e-15);
    EXPECT_THROW(process_fidelity(h, ComplexMatrix::identity(4)), Error);
}

TEST(InjectError, EmptyListLeavesCircuit) {
    const auto prep = builtin_state("bell").prep;
    EXPECT_EQ(to_text(inject_error(prep, {})), to_text(prep));
}

TEST(InjectError, HalfTurnFlipsZero) {
    const std::vector<InjectedError> e{{0, {pi, 0, 0}}};
    const auto est = reconstruct_density(state_tomography(inject_error(Circuit(1), e), 1, testkit::lebedev_grid()));
    EXPECT_LT(max_abs_diff(est.rho, StateVector::basis(1, 1).density()), 1e-6);
}

TEST(InjectError, TiltsLinearDroplets) {
    const auto g = equiangular_grid(36);
    const auto base = builtin_state("00+01").prep;
    const std::vector<InjectedError> e{{0, {pi / 12, 0, 0}}, {1, {pi / 9, pi / 12, 0}}};
    const auto ref = state_tomography(base, 2, g);
    const auto err = state_tomography(inject_error(base, e), 2, g);
    EXPECT_LT(axis_tilt(droplet_peak(ref.at({Label::One, 1}))), 1e-12);
    EXPECT_LT(axis_tilt(droplet_peak(ref.at({Label::Two, 1}))), 1e-12);
    EXPECT_GT(axis_tilt(droplet_peak(err.at({Label::One, 1}))), 0.1);
    EXPECT_GT(axis_tilt(droplet_peak(err.at({Label::Two, 1}))), 0.1);
}

TEST(Baseline, IdealIsExact) {
    EXPECT_LT(max_abs_diff(standard_tomography_baseline(Circuit(1), kIdeal, 0), StateVector::basis(1).density()), 1e-15);
    EXPECT_THROW(standard_tomography_baseline(Circuit(2), kIdeal, 0), Error);
}

TEST(Baseline, AlwaysPhysical) {
    const auto prep = builtin_state("plus-i").prep;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto rho = standard_tomography_baseline(prep, 30, s);
        EXPECT_TRUE(is_hermitian(rho, 1e-12));
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
        // 2x2 Hermitian with unit trace is PSD iff det >= 0.
        const double det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
        EXPECT_GE(det, -1e-12);
    }
}

TEST(Baseline, ConvergesWithShots) {
    const auto prep = builtin_state("study").prep;
    const auto target = target_of(prep);
    double mean = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        mean += state_fidelity(standard_tomography_baseline(prep, 3'000'000, s), target);
    }
    EXPECT_GT(mean / 20.0, 0.9999);
}

TEST(SamplingStudy, IdealModeIsPerfectForEveryGrid) {
    const std::vector<GridPtr> grids{default_grid(), testkit::lebedev_grid()};
    const auto rows = sampling_study(builtin_state("study").prep, grids, {}, 1, 0);
    ASSERT_EQ(rows.size(), 2u);
    for (const auto &r : rows) {
        EXPECT_GT(r.mean_fidelity, 0.999) << r.scheme;
    }
}

TEST(SamplingStudy, BudgetBelowPointCountThrows) {
    const std::vector<GridPtr> grids{default_grid()};
    const std::vector<std::uint64_t> budgets{100};
    EXPECT_THROW(sampling_study(builtin_state("study").prep, grids, budgets, 2, 0), Error);
}

TEST(SamplingStudy, RowsSortedAndImproving) {
    const std::vector<GridPtr> grids{default_grid(), testkit::lebedev_grid()};
    const std::vector<std::uint64_t> budgets{120 * 1024, 120 * 16, 120 * 128};
    const auto rows = sampling_study(builtin_state("study").prep, grids, budgets, 20, 9);
    ASSERT_EQ(rows.size(), 9u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const bool ordered = rows[i - 1].scheme < rows[i].scheme ||
                             (rows[i - 1].scheme == rows[i].scheme && rows[i - 1].total_shots < rows[i].total_shots);
        EXPECT_TRUE(ordered);
        if (rows[i - 1].scheme == rows[i].scheme) {
            EXPECT_GE(rows[i].mean_fidelity + 2 * rows[i].stddev, rows[i - 1].mean_fidelity);
        }
    }
    EXPECT_EQ(rows.front().scheme, "equiangular:M=7");
    EXPECT_EQ(rows.back().scheme, "standard");
}

TEST(Builtins, StatesMatchAmplitudes) {
    const auto t2 = run_statevector(builtin_state("table2").prep);
    const double n = std::hypot(0.885, 0.466);
    EXPECT_NEAR(std::abs(t2[0]), 0.885 / n, 1e-15);
    EXPECT_NEAR(std::abs(t2[1]), 0.466 / n, 1e-15);
    const auto study = StateVector::normalized({complex(-0.69, -0.098), complex(0.66, 0.30)});
    EXPECT_NEAR(state_fidelity(target_of(builtin_state("study").prep), study.density()), 1.0, 1e-14);
    const auto pi_state = StateVector::normalized({1.0, kI});
    EXPECT_NEAR(state_fidelity(target_of(builtin_state("plus-i").prep), pi_state.density()), 1.0, 1e-14);
    const auto sep = StateVector::normalized({1.0, 1.0, 0.0, 0.0});
    EXPECT_NEAR(state_fidelity(target_of(builtin_state("00+01").prep), sep.density()), 1.0, 1e-14);
    EXPECT_THROW(builtin_state("nope"), Error);
}

TEST(Builtins, Processes) {
    EXPECT_NEAR(process_fidelity(builtin_process("Ry(3pi/2)"), u3_matrix(3 * pi / 2, 0, 0)), 1.0, 1e-15);
    EXPECT_THROW(builtin_process("T"), Error);
}

}  // namespace
