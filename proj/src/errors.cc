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

#include "qrsp/errors.h"

namespace qrsp {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::capacity_exceeded:
            return "CapacityExceeded";
        case ErrorKind::invalid_state:
            return "InvalidState";
        case ErrorKind::shape_error:
            return "ShapeError";
        case ErrorKind::index_out_of_range:
            return "IndexOutOfRange";
        case ErrorKind::non_unitary_gate:
            return "NonUnitaryGate";
        case ErrorKind::degenerate_state:
            return "DegenerateState";
        case ErrorKind::unsupported:
            return "Unsupported";
        case ErrorKind::mismatched_outcome_space:
            return "MismatchedOutcomeSpace";
    }
    return "Unknown";
}

QrspError::QrspError(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {
}

void fail(ErrorKind kind, const std::string &message) {
    throw QrspError(kind, message);
}

}  // namespace qrsp
