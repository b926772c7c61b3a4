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

#include <cmath>
#include <string>

#include "qrsp/errors.h"

namespace qrsp {

namespace {

void check_capacity(Eigen::Index rows) {
    if (static_cast<std::size_t>(rows) > kMaxRegisterSize) {
        fail(ErrorKind::capacity_exceeded,
             "kron result of dimension " + std::to_string(rows) + " exceeds maximum register size");
    }
}

void check_unit(const CVec &v, double tol, const char *what) {
    if (v.size() < 1 || !all_finite(v)) {
        fail(ErrorKind::invalid_state, std::string(what) + " must be a finite non-empty vector");
    }
    double n = v.norm();
    if (std::abs(n - 1.0) > tol) {
        fail(ErrorKind::invalid_state, std::string(what) + " has norm " + std::to_string(n) + ", expected 1");
    }
}

}  // namespace

bool all_finite(const CMat &m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const Complex &z = m.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            return false;
        }
    }
    return true;
}

CMat kron(const CMat &a, const CMat &b) {
    if (a.rows() != a.cols() || b.rows() != b.cols()) {
        fail(ErrorKind::shape_error, "kron expects square matrices");
    }
    Eigen::Index n = a.rows() * b.rows();
    check_capacity(n);
    CMat out(n, n);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CVec kron(const CVec &a, const CVec &b) {
    Eigen::Index n = a.size() * b.size();
    check_capacity(n);
    CVec out(n);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

CMat dagger(const CMat &m) {
    return m.adjoint();
}

double unitarity_defect(const CMat &m) {
    if (m.rows() != m.cols()) {
        fail(ErrorKind::shape_error, "unitarity_defect expects a square matrix");
    }
    return (m.adjoint() * m - CMat::Identity(m.rows(), m.cols())).norm();
}

CMat complete_to_unitary(const CVec &col0, double tol) {
    check_unit(col0, tol, "complete_to_unitary input");
    const Eigen::Index d = col0.size();
    double mag0 = std::abs(col0(0));
    Complex phase = mag0 > 0 ? col0(0) / mag0 : Complex(1.0, 0.0);

    // v = col0 + phase*e0 never cancels: |v0| = |col0[0]| + 1 >= 1.
    CVec v = col0;
    v(0) += phase;
    double vv = v.squaredNorm();
    CMat u = CMat::Identity(d, d) - (2.0 / vv) * (v * v.adjoint());
    // -phase * H e0 == col0; store it exactly.
    u.col(0) = col0;
    return u;
}

double fidelity_pure(const CVec &a, const CVec &b) {
    if (a.size() != b.size()) {
        fail(ErrorKind::shape_error, "fidelity_pure dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                         std::to_string(b.size()));
    }
    return std::norm(a.dot(b));
}

CMat transport_unitary(const CVec &from, const CVec &to, double tol) {
    if (from.size() != to.size()) {
        fail(ErrorKind::shape_error, "transport_unitary dimension mismatch");
    }
    check_unit(from, tol, "transport_unitary source");
    check_unit(to, tol, "transport_unitary destination");
    return complete_to_unitary(to, tol) * complete_to_unitary(from, tol).adjoint();
}

}  // namespace qrsp
