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

#ifndef QRSP_GATES_H
#define QRSP_GATES_H

#include <string>
#include <vector>

#include "qrsp/channel.h"
#include "qrsp/state_register.h"
#include "qrsp/tensor.h"

namespace qrsp {

/// Dense operator on one or more subsystems, with its unitarity defect cached.
struct GateMatrix {
    CMat matrix;
    std::vector<int> dims;
    std::string name;
    double defect = 0;
    /// Built verbatim from a printed formula rather than a unitary construction.
    bool literal = false;

    std::size_t arity() const {
        return dims.size();
    }
    bool unitary(double tol = kStructuralTol) const {
        return defect <= tol;
    }
};

/// Validates that the matrix side equals the product of dims and records the defect.
GateMatrix make_gate(std::string name, std::vector<int> dims, CMat matrix, bool literal = false);

/// Shift k_i applied to the target when the control reads i.
class ShiftTable {
   public:
    /// Entries are reduced mod d; throws InvalidState for an empty table.
    ShiftTable(int d, std::vector<int> shifts);

    /// k_i = i.
    static ShiftTable add(int d);
    /// k_i = -i mod d.
    static ShiftTable subtract(int d);

    int d() const {
        return d_;
    }
    int shift(int control) const {
        return shifts_[static_cast<std::size_t>(control)];
    }

   private:
    int d_;
    std::vector<int> shifts_;
};

/// |j> -> |j+1 mod d>.
GateMatrix pauli_x(int d);
/// |j> -> w^j |j>, w = e^{2 pi i / d}.
GateMatrix pauli_z(int d);

/// |i>|j> -> |i>|j + k_i mod d>; control is the first subsystem.
GateMatrix controlled_shift(int d, const ShiftTable &table);

/// Qubit concentration gate: identity for control |0>; for control |1> the
/// target gets |0> -> (a/b)|0> - r|1>, |1> -> (a/b)|1> + r|0>, r = sqrt(1 - a^2/b^2).
/// Requires a^2 + b^2 = 1 and |a| <= |b|.
GateMatrix cu_concentration(double alpha, double beta);

/// [[x0, -|x1| e^{i theta}], [|x1| e^{i theta}, x0]] exactly as written. Not
/// unitary when x0 |x1| sin(theta) != 0; the defect is recorded, not rejected.
GateMatrix encoding_unitary_literal(double x0, double x1_magnitude, double theta);

/// Unitary with column 0 equal to the target amplitudes.
GateMatrix encoding_unitary(const TargetState &target);

/// |l> -> |m - l mod d>.
GateMatrix negation_shift(int d, int m);

/// V_m = U P_{0m} U^dagger N_m where P_{0m} swaps |0> and |m>. It maps Bob's
/// branch state b_m = sum_n U[n,m] |m - n> onto U|0>.
GateMatrix correction_unitary(const GateMatrix &encoder, int m);

/// Bob's conditional state for outcome m under the CADD/CSUB/CADD gate convention.
CVec branch_state(const CMat &encoder, int m);

struct NguyenBases {
    /// Columns a|0> + b|1> and b|0> - a|1>.
    CMat mu;
    /// Columns (|0> + e^{i g}|1>)/sqrt2 and (e^{-i g}|0> - |1>)/sqrt2.
    CMat nu;
    /// diag(1, e^{2 i g}).
    GateMatrix phase;
};

NguyenBases nguyen_bases(double a, double b, double gamma);

StateRegister apply_gate(const StateRegister &reg, const GateMatrix &gate, const std::vector<std::string> &targets,
                         GateCheck check = GateCheck::strict);

}  // namespace qrsp

#endif
