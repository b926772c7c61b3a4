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

#include "qrsp/tensor.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qrsp/errors.h"
#include "qrsp/random_states.h"
#include "qrsp/rng.h"

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

}  // namespace

TEST(tensor, kron_small_values) {
    CMat a(2, 2);
    a << 1, 2, 3, 4;
    CMat b(2, 2);
    b << 0, 1, 1, 0;
    CMat k = kron(a, b);
    CMat expect(4, 4);
    expect << 0, 1, 0, 2,  //
        1, 0, 2, 0,        //
        0, 3, 0, 4,        //
        3, 0, 4, 0;
    EXPECT_LT((k - expect).norm(), 1e-15);
}

TEST(tensor, kron_vectors_row_major) {
    CVec a(2);
    a << 0.6, Complex(0, 0.8);
    CVec b(3);
    b << 1, 0, 0;
    CVec k = kron(a, b);
    ASSERT_EQ(k.size(), 6);
    EXPECT_EQ(k(0), Complex(0.6, 0));
    EXPECT_EQ(k(3), Complex(0, 0.8));
    EXPECT_EQ(k(1), Complex(0, 0));
}

TEST(tensor, kron_mixed_product_property) {
    SeededRng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        CMat a = random_unitary(2, rng), b = random_unitary(3, rng);
        CMat c = random_unitary(2, rng), d = random_unitary(3, rng);
        EXPECT_LT((kron(a, b) * kron(c, d) - kron(CMat(a * c), CMat(b * d))).norm(), 1e-12);
    }
}

TEST(tensor, kron_rejects_non_square) {
    expect_kind(ErrorKind::shape_error, [] { kron(CMat(CMat::Zero(2, 3)), CMat(CMat::Identity(2, 2))); });
}

TEST(tensor, kron_capacity) {
    expect_kind(ErrorKind::capacity_exceeded, [] { kron(CMat(CMat::Identity(1100, 1100)), CMat(CMat::Identity(1000, 1000))); });
    expect_kind(ErrorKind::capacity_exceeded, [] { kron(CVec(CVec::Zero(2048)), CVec(CVec::Zero(1024))); });
}

TEST(tensor, dagger_conjugates_and_transposes) {
    CMat m(2, 2);
    m << Complex(1, 1), 2, Complex(0, 3), 4;
    CMat d = dagger(m);
    EXPECT_EQ(d(0, 0), Complex(1, -1));
    EXPECT_EQ(d(0, 1), Complex(0, -3));
    EXPECT_EQ(d(1, 0), Complex(2, 0));
}

TEST(tensor, unitarity_defect_values) {
    EXPECT_EQ(unitarity_defect(CMat::Identity(4, 4)), 0.0);
    // 2*I: m^dagger m - I = 3 I, Frobenius norm 3*sqrt(2).
    EXPECT_NEAR(unitarity_defect(2.0 * CMat::Identity(2, 2)), 3 * std::numbers::sqrt2, 1e-15);
}

TEST(tensor, complete_to_unitary_real_qubit_is_rotation) {
    CVec col(2);
    col << 0.6, 0.8;
    CMat u = complete_to_unitary(col);
    CMat expect(2, 2);
    expect << 0.6, -0.8, 0.8, 0.6;
    EXPECT_LT((u - expect).norm(), 1e-15);
}

TEST(tensor, complete_to_unitary_property) {
    SeededRng rng(5);
    for (int d = 2; d <= 9; ++d) {
        for (int trial = 0; trial < 10; ++trial) {
            CVec col = random_unit_vector(d, rng);
            CMat u = complete_to_unitary(col);
            EXPECT_LT(unitarity_defect(u), 1e-12);
            EXPECT_EQ(u.col(0), col);
        }
    }
}

TEST(tensor, complete_to_unitary_basis_vectors) {
    for (int k = 0; k < 4; ++k) {
        CVec e = CVec::Zero(4);
        e(k) = Complex(0, 1);
        CMat u = complete_to_unitary(e);
        EXPECT_LT(unitarity_defect(u), 1e-14);
        EXPECT_EQ(u.col(0), e);
    }
}

TEST(tensor, complete_to_unitary_rejects_bad_input) {
    CVec v(2);
    v << 1, 1;
    expect_kind(ErrorKind::invalid_state, [&] { complete_to_unitary(v); });
    v << std::nan(""), 0;
    expect_kind(ErrorKind::invalid_state, [&] { complete_to_unitary(v); });
}

TEST(tensor, fidelity_pure_values) {
    CVec a(2), b(2);
    a << 1, 0;
    b << 0.6, Complex(0, 0.8);
    EXPECT_NEAR(fidelity_pure(a, b), 0.36, 1e-15);
    EXPECT_NEAR(fidelity_pure(b, Complex(0, 1) * b), 1.0, 1e-15);
    expect_kind(ErrorKind::shape_error, [&] { fidelity_pure(a, CVec::Zero(3)); });
}

TEST(tensor, transport_unitary_maps_from_to) {
    SeededRng rng(9);
    for (int d = 2; d <= 6; ++d) {
        CVec from = random_unit_vector(d, rng), to = random_unit_vector(d, rng);
        CMat t = transport_unitary(from, to);
        EXPECT_LT(unitarity_defect(t), 1e-12);
        EXPECT_LT((t * from - to).norm(), 1e-12);
    }
}

TEST(tensor, all_finite) {
    CMat m = CMat::Identity(2, 2);
    EXPECT_TRUE(all_finite(m));
    m(1, 0) = Complex(INFINITY, 0);
    EXPECT_FALSE(all_finite(m));
}

TEST(rng, deterministic_streams) {
    SeededRng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        double x = a.uniform();
        EXPECT_EQ(x, b.uniform());
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
    }
}

TEST(rng, derive_seed_separates_paths) {
    EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
    EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
    EXPECT_NE(derive_seed(1, {0}), derive_seed(2, {0}));
    EXPECT_NE(derive_seed(1, {0}), derive_seed(1, {0, 0}));
}

TEST(rng, uniform_mean) {
    SeededRng rng(3);
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        sum += rng.uniform();
    }
    // 4 sigma for the mean of U(0,1): sigma = sqrt(1/12/n).
    EXPECT_NEAR(sum / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
}

TEST(random_states, unitary_and_unit_vectors) {
    SeededRng rng(17);
    for (int d = 2; d <= 8; ++d) {
        EXPECT_LT(unitarity_defect(random_unitary(d, rng)), 1e-12);
        EXPECT_NEAR(random_unit_vector(d, rng).norm(), 1.0, 1e-14);
        ChannelSpec c = random_channel(d, rng);
        for (const Complex &l : c.lambdas()) {
            EXPECT_GT(std::abs(l), 0.0);
        }
    }
}
