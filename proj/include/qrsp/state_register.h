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

#ifndef QRSP_STATE_REGISTER_H
#define QRSP_STATE_REGISTER_H

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "qrsp/channel.h"
#include "qrsp/rng.h"
#include "qrsp/tensor.h"

namespace qrsp {

/// Normalized amplitude vector over an ordered list of labelled qudits.
/// Flattening is row-major: the leftmost label is the most significant digit,
/// so |ABC> maps to index (a * dB + b) * dC + c.
class StateRegister {
   public:
    /// Throws ShapeError, CapacityExceeded or InvalidState (norm off by more than tol).
    StateRegister(std::vector<std::string> labels, std::vector<int> dims, CVec amplitudes,
                  double tol = kStructuralTol);

    /// Same shape checks, no normalization check. Used by audit paths that
    /// deliberately apply non-unitary operators.
    static StateRegister from_raw(std::vector<std::string> labels, std::vector<int> dims, CVec amplitudes);

    const std::vector<std::string> &labels() const {
        return labels_;
    }
    const std::vector<int> &dims() const {
        return dims_;
    }
    const CVec &amplitudes() const {
        return amplitudes_;
    }
    std::size_t size() const {
        return static_cast<std::size_t>(amplitudes_.size());
    }
    double norm() const {
        return amplitudes_.norm();
    }

    /// Position of `label` in the subsystem order. Throws ShapeError if absent.
    std::size_t position(std::string_view label) const;
    int dim_of(std::string_view label) const {
        return dims_[position(label)];
    }
    std::size_t stride(std::size_t position) const;

    StateRegister normalized() const;

   private:
    struct Unchecked {};
    StateRegister(Unchecked, std::vector<std::string> labels, std::vector<int> dims, CVec amplitudes);

    std::vector<std::string> labels_;
    std::vector<int> dims_;
    CVec amplitudes_;
};

struct MeasurementRecord {
    std::vector<std::string> subsystems;
    std::vector<int> outcome;
    /// Exact Born probability of `outcome` in the pre-measurement state.
    double probability = 0;
    std::string basis = "computational";
};

struct OutcomeProbability {
    std::vector<int> outcome;
    double probability = 0;
};

struct MeasureResult {
    MeasurementRecord record;
    StateRegister state;
};

struct CollapseResult {
    double probability = 0;
    StateRegister state;
};

struct DensityMatrix {
    CMat rho;

    int dim() const {
        return static_cast<int>(rho.rows());
    }
};

/// Largest |rho - rho^dagger| entry.
double hermiticity_error(const DensityMatrix &m);
double min_eigenvalue(const DensityMatrix &m);
/// Hermitian, unit trace and PSD, each within tol.
bool is_physical(const DensityMatrix &m, double tol = kStructuralTol);

/// Probabilities below this are treated as exactly zero when sampling.
inline constexpr double kProbabilityFloor = 1e-15;

enum class GateCheck {
    strict,  ///< reject operators with unitarity defect above kStructuralTol
    audit,   ///< apply anything square of the right size; the caller tracks the norm
};

/// Default labels are "A", "B", "C", ... in order.
StateRegister basis_register(const std::vector<int> &dims, const std::vector<int> &index,
                             std::vector<std::string> labels = {});

/// sum_m lambda_m |m m>_{AB}.
StateRegister channel_register(const ChannelSpec &spec);

/// Joint register; labels must be disjoint.
StateRegister tensor_product(const StateRegister &a, const StateRegister &b);

StateRegister apply_gate(const StateRegister &reg, const CMat &gate, const std::vector<std::string> &targets,
                         GateCheck check = GateCheck::strict);

/// One entry per joint outcome of `targets` in row-major order, zeros included.
std::vector<OutcomeProbability> born_probabilities(const StateRegister &reg,
                                                   const std::vector<std::string> &targets);

/// Projects onto `outcome` and renormalizes. Throws DegenerateState when the
/// branch has (numerically) zero weight.
CollapseResult collapse(const StateRegister &reg, const std::vector<std::string> &targets,
                        const std::vector<int> &outcome);

/// Index drawn from Born probabilities with one uniform. Entries below
/// kProbabilityFloor are never chosen.
std::size_t sample_outcome(const std::vector<double> &probabilities, SeededRng &rng);

/// Picks the outcome index given the probabilities of all outcomes.
using OutcomeChooser = std::function<std::size_t(const std::vector<double> &)>;

MeasureResult measure(const StateRegister &reg, const std::vector<std::string> &targets, SeededRng &rng);
MeasureResult measure(const StateRegister &reg, const std::vector<std::string> &targets,
                      const OutcomeChooser &choose);

/// Measurement in the orthonormal basis given by the columns of `basis`;
/// outcome k leaves `target` in column k.
MeasureResult measure_in_basis(const StateRegister &reg, const std::string &target, const CMat &basis,
                               SeededRng &rng);
MeasureResult measure_in_basis(const StateRegister &reg, const std::string &target, const CMat &basis,
                               const OutcomeChooser &choose);
CollapseResult collapse_in_basis(const StateRegister &reg, const std::string &target, const CMat &basis,
                                 int outcome);

DensityMatrix reduced_density(const StateRegister &reg, const std::vector<std::string> &keep);

/// Pure state of `label` when the register is a product across `label` and
/// the rest. The phase is taken from the slice through the largest amplitude.
/// Throws InvalidState if `label` is entangled with the rest.
CVec extract_factor(const StateRegister &reg, const std::string &label);

}  // namespace qrsp

#endif
