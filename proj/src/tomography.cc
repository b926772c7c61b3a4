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

#include <algorithm>
#include <cmath>
#include <string>

#include "qrsp/errors.h"

namespace qrsp {

namespace {

const Complex kI(0, 1);

CMat pauli(char axis) {
    CMat m(2, 2);
    switch (axis) {
        case 'x':
            m << 0, 1, 1, 0;
            break;
        case 'y':
            m << 0, -kI, kI, 0;
            break;
        default:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

void require_qubit(const DensityMatrix &m) {
    if (m.rho.rows() != 2 || m.rho.cols() != 2) {
        fail(ErrorKind::shape_error, "tomography is qubit-only, got dimension " + std::to_string(m.rho.rows()));
    }
}

/// (N+ - N-)/N for `n` single-shot measurements with P(+) = (1 + r)/2.
double sample_axis(double r, int n, SeededRng &rng) {
    double p_plus = std::clamp((1 + r) / 2, 0.0, 1.0);
    int plus = 0;
    for (int i = 0; i < n; ++i) {
        if (rng.uniform() < p_plus) {
            ++plus;
        }
    }
    return std::clamp(double(2 * plus - n) / n, -1.0, 1.0);
}

}  // namespace

PauliEstimates bloch_vector(const DensityMatrix &state) {
    require_qubit(state);
    PauliEstimates r;
    r.rx = (state.rho * pauli('x')).trace().real();
    r.ry = (state.rho * pauli('y')).trace().real();
    r.rz = (state.rho * pauli('z')).trace().real();
    return r;
}

PauliEstimates sample_pauli_expectations(const DensityMatrix &state, int shots, SeededRng &rng) {
    require_qubit(state);
    if (shots < 3) {
        fail(ErrorKind::invalid_state, "tomography needs at least 3 shots, got " + std::to_string(shots));
    }
    PauliEstimates exact = bloch_vector(state);
    PauliEstimates out;
    out.shots_x = shots / 3;
    out.shots_y = shots / 3;
    out.shots_z = shots - 2 * (shots / 3);
    out.rx = sample_axis(exact.rx, out.shots_x, rng);
    out.ry = sample_axis(exact.ry, out.shots_y, rng);
    out.rz = sample_axis(exact.rz, out.shots_z, rng);
    return out;
}

PauliEstimates sample_pauli_expectations(const StateRegister &state, int shots, SeededRng &rng) {
    if (state.dims().size() != 1 || state.dims()[0] != 2) {
        fail(ErrorKind::shape_error, "tomography expects a single-qubit register");
    }
    return sample_pauli_expectations(pure_density(state.amplitudes()), shots, rng);
}

DensityMatrix reconstruct_qubit(const PauliEstimates &e) {
    CMat rho = 0.5 * (CMat::Identity(2, 2) + e.rx * pauli('x') + e.ry * pauli('y') + e.rz * pauli('z'));
    Eigen::SelfAdjointEigenSolver<CMat> solver(rho);
    Eigen::VectorXd w = solver.eigenvalues().cwiseMax(0.0);
    CMat v = solver.eigenvectors();
    CMat projected = v * w.cast<Complex>().asDiagonal() * v.adjoint();
    projected /= w.sum();
    // Exact Hermitian symmetry after the round trip through the eigenbasis.
    projected = 0.5 * (projected + projected.adjoint()).eval();
    return {projected};
}

double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.rho.rows() != sigma.rho.rows() || rho.rho.cols() != sigma.rho.cols()) {
        fail(ErrorKind::shape_error, "trace_distance dimension mismatch");
    }
    CMat diff = rho.rho - sigma.rho;
    diff = 0.5 * (diff + diff.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMat> solver(diff, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double fidelity_mixed(const DensityMatrix &rho, const CVec &target) {
    if (rho.rho.rows() != target.size()) {
        fail(ErrorKind::shape_error, "fidelity_mixed dimension mismatch");
    }
    return (target.adjoint() * rho.rho * target)(0, 0).real();
}

DensityMatrix pure_density(const CVec &state) {
    return {state * state.adjoint()};
}

TomoResult tomograph(const CVec &state, const CVec &target, int shots, SeededRng &rng) {
    DensityMatrix exact = pure_density(state);
    TomoResult out;
    out.rho = reconstruct_qubit(sample_pauli_expectations(exact, shots, rng));
    out.fidelity_to_target = fidelity_mixed(out.rho, target);
    out.trace_distance_to_target = trace_distance(out.rho, pure_density(target));
    out.shots = shots;
    return out;
}

}  // namespace qrsp
