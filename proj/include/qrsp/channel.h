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

#ifndef QRSP_CHANNEL_H
#define QRSP_CHANNEL_H

#include <vector>

#include "qrsp/tensor.h"

namespace qrsp {

/// Schmidt coefficients of the shared A-B channel: sum_m lambda_m |m m>.
/// For d = 2 the coefficients are (alpha, beta).
class ChannelSpec {
   public:
    /// Throws InvalidState unless d >= 2 and sum |lambda_m|^2 == 1 within tol.
    explicit ChannelSpec(std::vector<Complex> lambdas, double tol = kStructuralTol);

    /// (sin theta, cos theta): the qubit channel parametrization used by the sweeps.
    static ChannelSpec from_theta(double theta);
    static ChannelSpec maximal(int d);

    int d() const {
        return static_cast<int>(lambdas_.size());
    }
    const std::vector<Complex> &lambdas() const {
        return lambdas_;
    }
    CVec vector() const;

   private:
    std::vector<Complex> lambdas_;
};

/// Amplitudes x_n of the state Alice prepares for Bob. Storage keeps the
/// user's input; canonical() removes the global phase of the first nonzero
/// amplitude.
class TargetState {
   public:
    explicit TargetState(std::vector<Complex> amplitudes, double tol = kStructuralTol);

    int d() const {
        return static_cast<int>(amplitudes_.size());
    }
    const std::vector<Complex> &amplitudes() const {
        return amplitudes_;
    }
    CVec vector() const;
    TargetState canonical() const;

    /// Qubit form x0|0> + |x1| e^{i theta}|1> with x0 >= 0 (global phase removed).
    struct QubitForm {
        double x0;
        double x1_magnitude;
        double theta;
    };
    QubitForm qubit_form() const;

   private:
    std::vector<Complex> amplitudes_;
};

}  // namespace qrsp

#endif
