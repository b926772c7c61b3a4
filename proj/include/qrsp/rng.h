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

#ifndef QRSP_RNG_H
#define QRSP_RNG_H

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qrsp {

/// Mixes a master seed with a sequence of indices (trial, grid point, ...)
/// so each unit of work gets a reproducible stream independent of scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Seeded 64-bit Mersenne Twister with a portable uniform draw.
class SeededRng {
   public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {
    }

    /// Uniform double in [0, 1) built from the top 53 bits of one draw.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    SeededRng split(std::uint64_t index) {
        return SeededRng(derive_seed(engine_(), {index}));
    }

   private:
    std::mt19937_64 engine_;
};

}  // namespace qrsp

#endif
