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

#ifndef QRSP_ORACLE_H
#define QRSP_ORACLE_H

#include <cstdint>
#include <string>
#include <vector>

#include "qrsp/channel.h"
#include "qrsp/protocols.h"

namespace qrsp {

struct Provenance {
    Protocol protocol = Protocol::deterministic;
    Mode mode = Mode::repaired;
    ChannelSpec channel = ChannelSpec::maximal(2);
    TargetState target = TargetState({Complex(1, 0), Complex(0, 0)});
};

struct BranchEntry {
    std::vector<int> outcome;
    double probability = 0;
    /// Fidelity of Bob's corrected state on this branch.
    double fidelity = 0;
    bool abandoned = false;
};

struct BranchDistribution {
    Provenance provenance;
    std::vector<BranchEntry> branches;

    double total() const;
};

struct OutcomeComparison {
    std::vector<int> outcome;
    double expected = 0;
    double observed = 0;
    std::int64_t count = 0;
    std::int64_t trials = 0;
    /// |probability difference| for exact comparisons, |z| for sampled ones.
    double statistic = 0;
};

struct ComparisonReport {
    std::vector<OutcomeComparison> rows;
    double max_statistic = 0;
    double threshold = 0;
    bool pass = false;
};

/// Brute-force branch enumeration with full d^3-dimensional matrices built from
/// Kronecker products and projectors. Shares nothing with the register or gate
/// code: the encoder is completed by Gram-Schmidt, Nguyen corrections come
/// from a fixed Pauli table. Throws CapacityExceeded for d > 8.
BranchDistribution enumerate_naive(Protocol protocol, const ChannelSpec &channel, const TargetState &target,
                                   Mode mode);

BranchDistribution to_distribution(const OutcomeTable &table, const Provenance &provenance);

/// Passes iff every per-outcome probability and fidelity difference is <= tol.
/// Missing outcomes count as probability 0. Throws MismatchedOutcomeSpace
/// when the distributions describe different protocols or tuple shapes.
ComparisonReport compare_exact(const BranchDistribution &fast, const BranchDistribution &naive,
                               double tol = kStructuralTol);

/// Runs the protocol `trials` times with seeds derived from `seed` and checks
/// every outcome frequency against its binomial z-score. Outcomes with p = 0
/// must never occur; with p = 1 they must always occur.
ComparisonReport compare_sampled(const BranchDistribution &dist, std::int64_t trials, std::uint64_t seed,
                                 double z_threshold = 4.0);

}  // namespace qrsp

#endif
