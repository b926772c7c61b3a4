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

#include "qrsp/channel.h"

#include <cmath>
#include <string>

#include "qrsp/errors.h"

namespace qrsp {

namespace {

void check_list(const std::vector<Complex> &v, double tol, const char *what) {
    if (v.size() < 2) {
        fail(ErrorKind::invalid_state, std::string(what) + " needs at least 2 entries");
    }
    double total = 0;
    for (const Complex &z : v) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            fail(ErrorKind::invalid_state, std::string(what) + " has a non-finite entry");
        }
        total += std::norm(z);
    }
    if (std::abs(total - 1.0) > tol) {
        fail(ErrorKind::invalid_state,
             std::string(what) + " squared norm is " + std::to_string(total) + ", expected 1");
    }
}

CVec to_vec(const std::vector<Complex> &v) {
    CVec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = v[i];
    }
    return out;
}

}  // namespace

ChannelSpec::ChannelSpec(std::vector<Complex> lambdas, double tol) : lambdas_(std::move(lambdas)) {
    check_list(lambdas_, tol, "channel");
}

ChannelSpec ChannelSpec::from_theta(double theta) {
    return ChannelSpec({Complex(std::sin(theta), 0), Complex(std::cos(theta), 0)});
}

ChannelSpec ChannelSpec::maximal(int d) {
    return ChannelSpec(std::vector<Complex>(static_cast<std::size_t>(d), Complex(1.0 / std::sqrt(double(d)), 0)));
}

CVec ChannelSpec::vector() const {
    return to_vec(lambdas_);
}

TargetState::TargetState(std::vector<Complex> amplitudes, double tol) : amplitudes_(std::move(amplitudes)) {
    check_list(amplitudes_, tol, "target");
}

CVec TargetState::vector() const {
    return to_vec(amplitudes_);
}

TargetState TargetState::canonical() const {
    std::vector<Complex> out = amplitudes_;
    for (const Complex &z : amplitudes_) {
        if (std::abs(z) > 0) {
            Complex phase = std::conj(z) / std::abs(z);
            for (Complex &w : out) {
                w *= phase;
            }
            break;
        }
    }
    return TargetState(std::move(out));
}

TargetState::QubitForm TargetState::qubit_form() const {
    if (d() != 2) {
        fail(ErrorKind::unsupported, "qubit form requested for d = " + std::to_string(d()));
    }
    double x0 = std::abs(amplitudes_[0]);
    double x1 = std::abs(amplitudes_[1]);
    double theta = 0;
    if (x1 > 0) {
        theta = std::arg(amplitudes_[1]) - (x0 > 0 ? std::arg(amplitudes_[0]) : 0.0);
    }
    return {x0, x1, theta};
}

}  // namespace qrsp
