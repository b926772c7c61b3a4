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

#ifndef QRSP_ERRORS_H
#define QRSP_ERRORS_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace qrsp {

enum class ErrorKind {
    capacity_exceeded,
    invalid_state,
    shape_error,
    index_out_of_range,
    non_unitary_gate,
    degenerate_state,
    unsupported,
    mismatched_outcome_space,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library. The kind distinguishes the failure
/// class; the message carries the details.
class QrspError : public std::runtime_error {
   public:
    QrspError(ErrorKind kind, const std::string &message);

    ErrorKind kind() const noexcept {
        return kind_;
    }

   private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string &message);

}  // namespace qrsp

#endif
