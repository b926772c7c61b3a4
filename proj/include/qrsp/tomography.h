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

#ifndef QRSP_TOMOGRAPHY_H
#define QRSP_TOMOGRAPHY_H

#include "qrsp/rng.h"
#include "qrsp/state_register.h"

namespace qrsp {

/// Sampled Bloch components, each clamped to [-1, 1].
struct PauliEstimates {
    double rx = 0;
    double ry = 0;
    double rz = 0;
    int shots_x = 0;
    int shots_y = 0;
    int shots_z = 0;

    int shots() const {
        return shots_x + shots_y + shots_z;
    }
};

struct TomoResult {
    DensityMatrix rho;
    double fidelity_to_target = 0;
    double trace_distance_to_target = 0;
    int shots = 0;
};

/// Projective X, Y and Z measurements on copies of a qubit state. Shots are
/// split evenly over the axes with the remainder going to Z; at least 3 shots.
/// Throws ShapeError for anything but a single qubit.
PauliEstimates sample_pauli_expectations(const DensityMatrix &state, int shots, SeededRng &rng);
PauliEstimates sample_pauli_expectations(const StateRegister &state, int shots, SeededRng &rng);

/// Exact Bloch vector of a qubit density matrix.
PauliEstimates bloch_vector(const DensityMatrix &state);

/// Linear inversion (I + rx X + ry Y + rz Z)/2, then negative eigenvalues are
/// clipped to zero and the trace renormalized.
DensityMatrix reconstruct_qubit(const PauliEstimates &estimates);

/// Half the trace norm of rho - sigma.
double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma);

/// <target| rho |target>.
double fidelity_mixed(const DensityMatrix &rho, const CVec &target);

DensityMatrix pure_density(const CVec &state);

/// Samples `shots` measurements of `state`, reconstructs, and scores against `target`.
TomoResult tomograph(const CVec &state, const CVec &target, int shots, SeededRng &rng);

}  // namespace qrsp

#endif
