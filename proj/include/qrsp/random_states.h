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

#ifndef QRSP_RANDOM_STATES_H
#define QRSP_RANDOM_STATES_H

#include "qrsp/channel.h"
#include "qrsp/rng.h"
#include "qrsp/tensor.h"

namespace qrsp {

/// Standard normal draw (Box-Muller over SeededRng::uniform).
double normal(SeededRng &rng);

/// Haar-random unit vector of dimension d.
CVec random_unit_vector(int d, SeededRng &rng);

/// Haar-random unitary (QR of a complex Gaussian matrix with phase fix).
CMat random_unitary(int d, SeededRng &rng);

TargetState random_target(int d, SeededRng &rng);

/// Random complex Schmidt coefficients, all nonzero. Magnitudes are drawn from
/// [min_magnitude, 1 + min_magnitude) and then normalized.
ChannelSpec random_channel(int d, SeededRng &rng, double min_magnitude = 0.05);

}  // namespace qrsp

#endif
