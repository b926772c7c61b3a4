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

#ifndef QRSP_TENSOR_H
#define QRSP_TENSOR_H

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace qrsp {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Default tolerance for structural checks (normalization, unitarity).
inline constexpr double kStructuralTol = 1e-10;

/// Largest amplitude vector (and matrix side) the library will build.
inline constexpr std::size_t kMaxRegisterSize = std::size_t{1} << 20;

/// Kronecker product. Row (i*b.rows()+k), column (j*b.cols()+l) holds a(i,j)*b(k,l).
/// Throws ShapeError for non-square inputs and CapacityExceeded past kMaxRegisterSize.
CMat kron(const CMat &a, const CMat &b);
CVec kron(const CVec &a, const CVec &b);

CMat dagger(const CMat &m);

/// Frobenius norm of m^dagger m - I.
double unitarity_defect(const CMat &m);

/// Unitary whose first column is exactly `col0`.
///
/// Built from the Householder reflection H = I - 2 v v^dagger / |v|^2 with
/// v = col0 + e^{i arg col0[0]} e0, followed by a phase on column 0 so that
/// the result maps e0 to col0. For real col0 with col0[0] >= 0 in d = 2 this
/// is the rotation [[x0, -x1], [x1, x0]].
CMat complete_to_unitary(const CVec &col0, double tol = kStructuralTol);

/// |<a|b>|^2. Throws ShapeError on dimension mismatch.
double fidelity_pure(const CVec &a, const CVec &b);

/// Unitary V with V * from == to (phase exact).
CMat transport_unitary(const CVec &from, const CVec &to, double tol = kStructuralTol);

bool all_finite(const CMat &m);

}  // namespace qrsp

#endif
