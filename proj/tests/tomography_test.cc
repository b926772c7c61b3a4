// Copyright 2026 The qrsp Authors
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

#include "qrsp/tomography.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qrsp/errors.h"
#include "qrsp/random_states.h"

using namespace qrsp;

namespace {

void expect_kind(ErrorKind kind, const std::function<void()> &f) {
    try {
        f();
        ADD_FAILURE() << "expected " << to_string(kind);
    } catch (const QrspError &e) {
        EXPECT_EQ(e.kind(), kind) << e.what();
    }
}

CVec qubit(Complex a, Complex b) {
    CVec v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST(tomography, bloch_vector_of_known_states) {
    PauliEstimates z = bloch_vector(pure_density(qubit(1, 0)));
    EXPECT_NEAR(z.rz, 1.0, 1e-15);
    EXPECT_NEAR(z.rx, 0.0, 1e-15);
    const double s = 1 / std::numbers::sqrt2;
    PauliEstimates y = bloch_vector(pure_density(qubit(s, Complex(0, s))));
    EXPECT_NEAR(y.ry, 1.0, 1e-15);
    PauliEstimates t = bloch_vector(pure_density(qubit(0.6, Complex(0, 0.8))));
    EXPECT_NEAR(t.rz, 0.36 - 0.64, 1e-15);
    EXPECT_NEAR(t.ry, 2 * 0.6 * 0.8, 1e-15);
}

TEST(tomography, shot_split) {
    SeededRng rng(1);
    PauliEstimates e = sample_pauli_expectations(pure_density(qubit(1, 0)), 100000, rng);
    EXPECT_EQ(e.shots_x, 33333);
    EXPECT_EQ(e.shots_y, 33333);
    EXPECT_EQ(e.shots_z, 33334);
    EXPECT_EQ(e.shots(), 100000);
    // Eigenstates of Z give deterministic Z outcomes.
    EXPECT_EQ(e.rz, 1.0);
}

TEST(tomography, sampled_expectations_within_four_sigma) {
    SeededRng rng(2);
    CVec psi = qubit(0.6, Complex(0, 0.8));
    PauliEstimates exact = bloch_vector(pure_density(psi));
    PauliEstimates e = sample_pauli_expectations(pure_density(psi), 30000, rng);
    auto sigma = [](double r, int n) { return std::sqrt((1 - r * r) / n); };
    EXPECT_NEAR(e.rx, exact.rx, 4 * sigma(exact.rx, e.shots_x) + 1e-12);
    EXPECT_NEAR(e.ry, exact.ry, 4 * sigma(exact.ry, e.shots_y) + 1e-12);
    EXPECT_NEAR(e.rz, exact.rz, 4 * sigma(exact.rz, e.shots_z) + 1e-12);
}

TEST(tomography, reconstruction_is_exact_for_exact_estimates) {
    SeededRng rng(3);
    for (int i = 0; i < 20; ++i) {
        CVec psi = random_unit_vector(2, rng);
        DensityMatrix rho = reconstruct_qubit(bloch_vector(pure_density(psi)));
        EXPECT_NEAR(fidelity_mixed(rho, psi), 1.0, 1e-12);
        EXPECT_LT(trace_distance(rho, pure_density(psi)), 1e-12);
    }
}

TEST(tomography, reconstruction_always_physical) {
    SeededRng rng(4);
    for (int i = 0; i < 500; ++i) {
        PauliEstimates e;
        e.rx = 4 * rng.uniform() - 2;
        e.ry = 4 * rng.uniform() - 2;
        e.rz = 4 * rng.uniform() - 2;
        DensityMatrix rho = reconstruct_qubit(e);
        EXPECT_TRUE(is_physical(rho));
        EXPECT_NEAR(rho.rho.trace().real(), 1.0, 1e-12);
        EXPECT_LT(hermiticity_error(rho), 1e-12);
        EXPECT_GE(min_eigenvalue(rho), -1e-12);
    }
}

TEST(tomography, trace_distance_values) {
    DensityMatrix zero = pure_density(qubit(1, 0));
    DensityMatrix one = pure_density(qubit(0, 1));
    EXPECT_NEAR(trace_distance(zero, one), 1.0, 1e-15);
    EXPECT_NEAR(trace_distance(zero, zero), 0.0, 1e-15);
    DensityMatrix mixed{CMat::Identity(2, 2) * 0.5};
    EXPECT_NEAR(trace_distance(zero, mixed), 0.5, 1e-15);
    EXPECT_NEAR(fidelity_mixed(mixed, qubit(1, 0)), 0.5, 1e-15);
}

TEST(tomography, tomograph_end_to_end) {
    SeededRng rng(5);
    CVec psi = qubit(0.6, Complex(0, 0.8));
    TomoResult r = tomograph(psi, psi, 100000, rng);
    EXPECT_EQ(r.shots, 100000);
    EXPECT_LT(r.trace_distance_to_target, 0.02);
    EXPECT_GT(r.fidelity_to_target, 0.99);
    EXPECT_TRUE(is_physical(r.rho));
}

TEST(tomography, errors) {
    SeededRng rng(6);
    expect_kind(ErrorKind::invalid_state, [&] { sample_pauli_expectations(pure_density(qubit(1, 0)), 2, rng); });
    expect_kind(ErrorKind::shape_error,
                [&] { sample_pauli_expectations(DensityMatrix{CMat::Identity(3, 3) / 3.0}, 30, rng); });
    expect_kind(ErrorKind::shape_error, [&] {
        sample_pauli_expectations(basis_register({2, 2}, {0, 0}), 30, rng);
    });
    expect_kind(ErrorKind::shape_error,
                [&] { trace_distance(pure_density(qubit(1, 0)), DensityMatrix{CMat::Identity(3, 3)}); });
}

TEST(tomography, register_input) {
    SeededRng rng(7);
    StateRegister r({"B"}, {2}, qubit(0, 1));
    PauliEstimates e = sample_pauli_expectations(r, 300, rng);
    EXPECT_EQ(e.rz, -1.0);
}
