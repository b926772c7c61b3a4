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

#include "qrsp/random_states.h"

#include <cmath>
#include <numbers>
#include <vector>

namespace qrsp {

double normal(SeededRng &rng) {
    double u1 = rng.uniform();
    double u2 = rng.uniform();
    return std::sqrt(-2 * std::log1p(-u1)) * std::cos(2 * std::numbers::pi * u2);
}

CVec random_unit_vector(int d, SeededRng &rng) {
    CVec v(d);
    for (int i = 0; i < d; ++i) {
        double re = normal(rng);
        v(i) = Complex(re, normal(rng));
    }
    return v.normalized();
}

CMat random_unitary(int d, SeededRng &rng) {
    CMat g(d, d);
    for (int j = 0; j < d; ++j) {
        g.col(j) = random_unit_vector(d, rng);
    }
    Eigen::HouseholderQR<CMat> qr(g);
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        double mag = std::abs(r(j, j));
        if (mag > 0) {
            q.col(j) *= r(j, j) / mag;
        }
    }
    return q;
}

TargetState random_target(int d, SeededRng &rng) {
    CVec v = random_unit_vector(d, rng);
    return TargetState(std::vector<Complex>(v.data(), v.data() + v.size()));
}

ChannelSpec random_channel(int d, SeededRng &rng, double min_magnitude) {
    std::vector<Complex> lambdas(static_cast<std::size_t>(d));
    double total = 0;
    for (Complex &z : lambdas) {
        double mag = min_magnitude + rng.uniform();
        z = std::polar(mag, 2 * std::numbers::pi * rng.uniform());
        total += mag * mag;
    }
    for (Complex &z : lambdas) {
        z /= std::sqrt(total);
    }
    return ChannelSpec(std::move(lambdas));
}

}  // namespace qrsp
