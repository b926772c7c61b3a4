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

#include "qrsp/gates.h"

#include <cmath>
#include <numbers>
#include <string>

#include "qrsp/errors.h"

namespace qrsp {

namespace {

int mod(int a, int d) {
    int r = a % d;
    return r < 0 ? r + d : r;
}

void require_dim(int d) {
    if (d < 2) {
        fail(ErrorKind::invalid_state, "qudit dimension must be at least 2, got " + std::to_string(d));
    }
}

void require_unit_pair(double a, double b, const char *what) {
    if (!std::isfinite(a) || !std::isfinite(b) || std::abs(a * a + b * b - 1.0) > kStructuralTol) {
        fail(ErrorKind::invalid_state, std::string(what) + ": squares must sum to 1");
    }
}

}  // namespace

GateMatrix make_gate(std::string name, std::vector<int> dims, CMat matrix, bool literal) {
    Eigen::Index n = 1;
    for (int d : dims) {
        n *= d;
    }
    if (dims.empty() || matrix.rows() != n || matrix.cols() != n) {
        fail(ErrorKind::shape_error, "gate " + name + " has the wrong size for its dims");
    }
    double defect = unitarity_defect(matrix);
    return GateMatrix{std::move(matrix), std::move(dims), std::move(name), defect, literal};
}

ShiftTable::ShiftTable(int d, std::vector<int> shifts) : d_(d), shifts_(std::move(shifts)) {
    require_dim(d);
    if (static_cast<int>(shifts_.size()) != d) {
        fail(ErrorKind::invalid_state, "shift table needs one entry per control value");
    }
    for (int &k : shifts_) {
        k = mod(k, d);
    }
}

ShiftTable ShiftTable::add(int d) {
    std::vector<int> k(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        k[static_cast<std::size_t>(i)] = i;
    }
    return ShiftTable(d, std::move(k));
}

ShiftTable ShiftTable::subtract(int d) {
    std::vector<int> k(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        k[static_cast<std::size_t>(i)] = -i;
    }
    return ShiftTable(d, std::move(k));
}

GateMatrix pauli_x(int d) {
    require_dim(d);
    CMat m = CMat::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        m(mod(j + 1, d), j) = 1.0;
    }
    return make_gate("X" + std::to_string(d), {d}, std::move(m));
}

GateMatrix pauli_z(int d) {
    require_dim(d);
    CMat m = CMat::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        m(j, j) = std::polar(1.0, 2 * std::numbers::pi * j / d);
    }
    return make_gate("Z" + std::to_string(d), {d}, std::move(m));
}

GateMatrix controlled_shift(int d, const ShiftTable &table) {
    require_dim(d);
    if (table.d() != d) {
        fail(ErrorKind::shape_error, "shift table dimension does not match gate dimension");
    }
    CMat m = CMat::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            m(i * d + mod(j + table.shift(i), d), i * d + j) = 1.0;
        }
    }
    return make_gate("CSHIFT" + std::to_string(d), {d, d}, std::move(m));
}

GateMatrix cu_concentration(double alpha, double beta) {
    require_unit_pair(alpha, beta, "cu_concentration");
    if (std::abs(alpha) > std::abs(beta) + 1e-12) {
        fail(ErrorKind::invalid_state, "cu_concentration requires |alpha| <= |beta|");
    }
    double ratio = std::min(1.0, std::max(-1.0, alpha / beta));
    // sqrt(1 - ratio^2) written to avoid cancellation when |alpha| ~ |beta|.
    double a = std::abs(alpha), b = std::abs(beta);
    double root = std::sqrt(std::max(0.0, (b - a) * (b + a))) / b;
    CMat m = CMat::Identity(4, 4);
    m(2, 2) = ratio;
    m(3, 2) = -root;
    m(2, 3) = root;
    m(3, 3) = ratio;
    return make_gate("CU", {2, 2}, std::move(m));
}

GateMatrix encoding_unitary_literal(double x0, double x1_magnitude, double theta) {
    require_unit_pair(x0, x1_magnitude, "encoding_unitary_literal");
    Complex off = std::polar(x1_magnitude, theta);
    CMat m(2, 2);
    m << x0, -off, off, x0;
    return make_gate("U_literal", {2}, std::move(m), true);
}

GateMatrix encoding_unitary(const TargetState &target) {
    return make_gate("U", {target.d()}, complete_to_unitary(target.vector()));
}

GateMatrix negation_shift(int d, int m) {
    require_dim(d);
    if (m < 0 || m >= d) {
        fail(ErrorKind::index_out_of_range, "negation shift offset " + std::to_string(m));
    }
    CMat n = CMat::Zero(d, d);
    for (int l = 0; l < d; ++l) {
        n(mod(m - l, d), l) = 1.0;
    }
    return make_gate("N" + std::to_string(m), {d}, std::move(n));
}

CVec branch_state(const CMat &encoder, int m) {
    const auto d = static_cast<int>(encoder.rows());
    CVec b = CVec::Zero(d);
    for (int n = 0; n < d; ++n) {
        b(mod(m - n, d)) += encoder(n, m);
    }
    return b;
}

GateMatrix correction_unitary(const GateMatrix &encoder, int m) {
    if (encoder.defect > 1e-8) {
        fail(ErrorKind::non_unitary_gate,
             "correction needs a unitary encoder (defect " + std::to_string(encoder.defect) + ")");
    }
    const auto d = static_cast<int>(encoder.matrix.rows());
    if (m < 0 || m >= d) {
        fail(ErrorKind::index_out_of_range, "correction outcome " + std::to_string(m));
    }
    CMat swap = CMat::Identity(d, d);
    if (m != 0) {
        swap(0, 0) = swap(m, m) = 0;
        swap(0, m) = swap(m, 0) = 1;
    }
    CMat v = encoder.matrix * swap * encoder.matrix.adjoint() * negation_shift(d, m).matrix;
    return make_gate("V" + std::to_string(m), {d}, std::move(v));
}

NguyenBases nguyen_bases(double a, double b, double gamma) {
    require_unit_pair(a, b, "nguyen_bases");
    CMat mu(2, 2);
    mu << a, b, b, -a;
    const double s = 1 / std::numbers::sqrt2;
    CMat nu(2, 2);
    nu << s, s * std::polar(1.0, -gamma), s * std::polar(1.0, gamma), -s;
    CMat p = CMat::Identity(2, 2);
    p(1, 1) = std::polar(1.0, 2 * gamma);
    return {std::move(mu), std::move(nu), make_gate("P_C", {2}, std::move(p))};
}

StateRegister apply_gate(const StateRegister &reg, const GateMatrix &gate, const std::vector<std::string> &targets,
                         GateCheck check) {
    if (targets.size() != gate.dims.size()) {
        fail(ErrorKind::shape_error, "gate " + gate.name + " acts on " + std::to_string(gate.dims.size()) +
                                         " subsystems, got " + std::to_string(targets.size()));
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (reg.dim_of(targets[i]) != gate.dims[i]) {
            fail(ErrorKind::shape_error, "gate " + gate.name + " dimension mismatch on " + targets[i]);
        }
    }
    if (check == GateCheck::strict && !gate.unitary()) {
        fail(ErrorKind::non_unitary_gate, "gate " + gate.name + " has defect " + std::to_string(gate.defect));
    }
    return apply_gate(reg, gate.matrix, targets, GateCheck::audit);
}

}  // namespace qrsp
