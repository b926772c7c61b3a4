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

#include "qrsp/state_register.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "qrsp/errors.h"
#include "qrsp/gates.h"
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

StateRegister random_register(const std::vector<int> &dims, SeededRng &rng) {
    int n = 1;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        n *= dims[i];
        labels.push_back(std::string(1, static_cast<char>('A' + i)));
    }
    return StateRegister(labels, dims, random_unit_vector(n, rng));
}

}  // namespace

TEST(channel, validates_norm_and_dimension) {
    expect_kind(ErrorKind::invalid_state, [] { ChannelSpec({1.0}); });
    expect_kind(ErrorKind::invalid_state, [] { ChannelSpec({0.6, 0.7}); });
    expect_kind(ErrorKind::invalid_state, [] { TargetState({0.6, 0.7}); });
    ChannelSpec c = ChannelSpec::from_theta(0.3);
    EXPECT_DOUBLE_EQ(c.lambdas()[0].real(), std::sin(0.3));
    EXPECT_DOUBLE_EQ(c.lambdas()[1].real(), std::cos(0.3));
    ChannelSpec m = ChannelSpec::maximal(4);
    EXPECT_NEAR(std::abs(m.lambdas()[3]), 0.5, 1e-15);
}

TEST(channel, qubit_form_removes_global_phase) {
    const Complex phase = std::polar(1.0, 1.1);
    TargetState t({phase * 0.6, phase * Complex(0, 0.8)});
    TargetState::QubitForm q = t.qubit_form();
    EXPECT_NEAR(q.x0, 0.6, 1e-15);
    EXPECT_NEAR(q.x1_magnitude, 0.8, 1e-15);
    EXPECT_NEAR(q.theta, std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(t.canonical().amplitudes()[0].imag(), 0.0, 1e-15);
    expect_kind(ErrorKind::unsupported, [] { TargetState({1.0, 0.0, 0.0}).qubit_form(); });
}

TEST(register_, flat_index_is_row_major) {
    StateRegister r = basis_register({2, 3, 2}, {1, 0, 1});
    EXPECT_EQ(r.labels(), (std::vector<std::string>{"A", "B", "C"}));
    for (int i = 0; i < 12; ++i) {
        EXPECT_EQ(r.amplitudes()(i), Complex(i == 7 ? 1 : 0, 0));
    }
    EXPECT_EQ(r.stride(0), 6u);
    EXPECT_EQ(r.stride(1), 2u);
    EXPECT_EQ(r.stride(2), 1u);
}

TEST(register_, construction_errors) {
    expect_kind(ErrorKind::invalid_state, [] { StateRegister({"A"}, {2}, CVec::Ones(2)); });
    expect_kind(ErrorKind::shape_error, [] { StateRegister({"A"}, {2}, CVec::Zero(3)); });
    expect_kind(ErrorKind::shape_error, [] { StateRegister({"A", "A"}, {2, 2}, CVec::Unit(4, 0)); });
    expect_kind(ErrorKind::capacity_exceeded,
                [] { basis_register({1 << 11, 1 << 10}, {0, 0}); });
    expect_kind(ErrorKind::index_out_of_range, [] { basis_register({2, 2}, {0, 2}); });
    StateRegister r = basis_register({2}, {0});
    expect_kind(ErrorKind::shape_error, [&] { r.position("Z"); });
}

TEST(register_, channel_register_reduced_density) {
    StateRegister r = channel_register(ChannelSpec({0.6, 0.8}));
    DensityMatrix rho = reduced_density(r, {"A"});
    EXPECT_NEAR(rho.rho(0, 0).real(), 0.36, 1e-15);
    EXPECT_NEAR(rho.rho(1, 1).real(), 0.64, 1e-15);
    EXPECT_NEAR(std::abs(rho.rho(0, 1)), 0.0, 1e-15);
    EXPECT_TRUE(is_physical(rho));
}

TEST(register_, apply_gate_then_inverse_is_identity) {
    SeededRng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        StateRegister r = random_register({2, 3, 2}, rng);
        CMat u = random_unitary(4, rng);
        StateRegister fwd = apply_gate(r, u, {"C", "A"});
        StateRegister back = apply_gate(fwd, dagger(u), {"C", "A"});
        EXPECT_LT((back.amplitudes() - r.amplitudes()).norm(), 1e-12);
        EXPECT_NEAR(fwd.norm(), 1.0, 1e-12);
    }
}

TEST(register_, apply_gate_matches_explicit_kron) {
    SeededRng rng(8);
    StateRegister r = random_register({2, 3}, rng);
    CMat u = random_unitary(3, rng);
    StateRegister out = apply_gate(r, u, {"B"});
    CVec expect = kron(CMat(CMat::Identity(2, 2)), u) * r.amplitudes();
    EXPECT_LT((out.amplitudes() - expect).norm(), 1e-13);
}

TEST(register_, apply_gate_errors) {
    StateRegister r = basis_register({2, 2}, {0, 0});
    expect_kind(ErrorKind::non_unitary_gate, [&] { apply_gate(r, CMat(2.0 * CMat::Identity(2, 2)), {"A"}); });
    expect_kind(ErrorKind::shape_error, [&] { apply_gate(r, CMat(CMat::Identity(3, 3)), {"A"}); });
    expect_kind(ErrorKind::shape_error, [&] { apply_gate(r, CMat(CMat::Identity(4, 4)), {"A", "A"}); });
    StateRegister raw = apply_gate(r, CMat(2.0 * CMat::Identity(2, 2)), {"A"}, GateCheck::audit);
    EXPECT_NEAR(raw.norm(), 2.0, 1e-15);
}

TEST(register_, born_probabilities_sum_to_one) {
    SeededRng rng(4);
    StateRegister r = random_register({3, 2, 2}, rng);
    double total = 0;
    for (const OutcomeProbability &p : born_probabilities(r, {"A", "C"})) {
        total += p.probability;
        EXPECT_EQ(p.outcome.size(), 2u);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(register_, collapse_and_degenerate_branch) {
    StateRegister r = channel_register(ChannelSpec({0.6, 0.8}));
    CollapseResult c = collapse(r, {"A"}, {1});
    EXPECT_NEAR(c.probability, 0.64, 1e-15);
    EXPECT_NEAR(std::abs(c.state.amplitudes()(3)), 1.0, 1e-15);
    expect_kind(ErrorKind::degenerate_state, [] {
        collapse(basis_register({2, 2}, {0, 0}), {"A"}, {1});
    });
    expect_kind(ErrorKind::index_out_of_range, [&] { collapse(r, {"A"}, {2}); });
}

TEST(register_, measure_frequencies_within_four_sigma) {
    StateRegister r = channel_register(ChannelSpec({0.6, 0.8}));
    SeededRng rng(99);
    const int n = 20000;
    int ones = 0;
    for (int i = 0; i < n; ++i) {
        MeasureResult m = measure(r, {"A"}, rng);
        ones += m.record.outcome[0];
        EXPECT_EQ(m.record.outcome[0], m.state.amplitudes()(3) != Complex(0, 0) ? 1 : 0);
    }
    const double sigma = std::sqrt(0.64 * 0.36 / n);
    EXPECT_NEAR(double(ones) / n, 0.64, 4 * sigma);
}

TEST(register_, measure_in_basis) {
    StateRegister plus({"A"}, {2}, CVec::Ones(2) / std::numbers::sqrt2);
    CMat hadamard(2, 2);
    hadamard << 1, 1, 1, -1;
    hadamard /= std::numbers::sqrt2;
    SeededRng rng(1);
    for (int i = 0; i < 20; ++i) {
        MeasureResult m = measure_in_basis(plus, "A", hadamard, rng);
        EXPECT_EQ(m.record.outcome[0], 0);
        EXPECT_EQ(m.record.basis, "custom");
        EXPECT_NEAR(m.record.probability, 1.0, 1e-15);
    }
    CollapseResult c = collapse_in_basis(plus, "A", CMat::Identity(2, 2), 1);
    EXPECT_NEAR(c.probability, 0.5, 1e-15);
    expect_kind(ErrorKind::non_unitary_gate, [&] { measure_in_basis(plus, "A", CMat::Ones(2, 2), rng); });
}

TEST(register_, extract_factor) {
    CVec b(2);
    b << 0.6, Complex(0, 0.8);
    StateRegister r = tensor_product(basis_register({3}, {2}, {"X"}), StateRegister({"B"}, {2}, b));
    CVec f = extract_factor(r, "B");
    EXPECT_NEAR(fidelity_pure(f, b), 1.0, 1e-14);
    expect_kind(ErrorKind::invalid_state,
                [] { extract_factor(channel_register(ChannelSpec({0.6, 0.8})), "B"); });
}

TEST(register_, tensor_product_rejects_duplicate_labels) {
    expect_kind(ErrorKind::shape_error, [] { tensor_product(basis_register({2}, {0}), basis_register({2}, {0})); });
}

TEST(register_, density_checks) {
    DensityMatrix bad{CMat::Zero(2, 2)};
    bad.rho(0, 0) = 1.2;
    bad.rho(1, 1) = -0.2;
    EXPECT_FALSE(is_physical(bad));
    EXPECT_NEAR(min_eigenvalue(bad), -0.2, 1e-15);
    bad.rho(0, 1) = 0.1;
    EXPECT_GT(hermiticity_error(bad), 0.05);
}

TEST(register_, sample_outcome_skips_floored_entries) {
    SeededRng rng(10);
    for (int i = 0; i < 1000; ++i) {
        std::size_t s = sample_outcome({0.0, 1e-16, 0.5, 0.0, 0.5}, rng);
        EXPECT_TRUE(s == 2 || s == 4);
    }
    expect_kind(ErrorKind::degenerate_state, [&] { sample_outcome({0.0, 1e-16}, rng); });
}

TEST(register_, measure_with_forced_outcome) {
    StateRegister r = channel_register(ChannelSpec({0.6, 0.8}));
    MeasureResult m = measure(r, {"B"}, [](const std::vector<double> &p) {
        EXPECT_NEAR(p[1], 0.64, 1e-15);
        return std::size_t{1};
    });
    EXPECT_EQ(m.record.outcome, std::vector<int>{1});
    EXPECT_NEAR(m.record.probability, 0.64, 1e-15);
}
