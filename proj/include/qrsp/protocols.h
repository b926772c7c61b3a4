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

#ifndef QRSP_PROTOCOLS_H
#define QRSP_PROTOCOLS_H

#include <string>
#include <string_view>
#include <vector>

#include "qrsp/channel.h"
#include "qrsp/gates.h"
#include "qrsp/rng.h"
#include "qrsp/state_register.h"

namespace qrsp {

enum class Protocol { deterministic, probabilistic, nguyen };

/// repaired: unitary encoder and encoder-derived corrections.
/// literal: the printed qubit encoder and the I / sigma_z corrections (d = 2 only).
enum class Mode { repaired, literal };

std::string_view to_string(Protocol p);
std::string_view to_string(Mode m);
/// Throws InvalidState for unknown names.
Protocol parse_protocol(std::string_view name);
Mode parse_mode(std::string_view name);

struct ProtocolOptions {
    /// A branch succeeds when its fidelity is at least 1 - success_tol.
    double success_tol = 1e-9;
};

struct TranscriptStep {
    std::string operation;
    std::vector<std::string> targets;
    double defect = 0;
    bool non_unitary = false;
};

/// Alice -> Bob. Only measurement outcome indices travel on the classical channel.
struct ClassicalMessage {
    std::vector<int> outcome;
};

struct Transcript {
    Protocol protocol = Protocol::deterministic;
    Mode mode = Mode::repaired;
    ChannelSpec channel = ChannelSpec::maximal(2);
    TargetState target = TargetState({Complex(1, 0), Complex(0, 0)});
    std::vector<TranscriptStep> steps;
    std::vector<MeasurementRecord> measurements;
    std::vector<ClassicalMessage> messages;
    /// Outcome that identifies the branch (A,C for deterministic, C for
    /// probabilistic, mu/nu indices for Nguyen).
    std::vector<int> outcome;
    /// Correction agreed at setup; target-dependent in repaired mode.
    std::string correction;
    CMat correction_matrix;
    /// Norm of the global state before measurement, prior to any renormalization.
    double raw_norm = 1.0;
    CVec bob_state;
    double fidelity = 0;
    /// Probabilistic protocol only: the concentration step failed.
    bool branch_failed = false;
    bool success = false;

    bool has_non_unitary_step() const;
};

struct OutcomeRow {
    std::vector<int> outcome;
    double probability = 0;
    /// Bob's state after correction.
    CVec bob_state;
    double fidelity = 0;
    /// Branch on which the protocol gives up (probabilistic failure).
    bool abandoned = false;
    std::string correction;
};

struct OutcomeTable {
    Protocol protocol = Protocol::deterministic;
    Mode mode = Mode::repaired;
    std::vector<OutcomeRow> rows;
    double raw_norm = 1.0;
};

/// Ancilla |0>_C, CADD(A->C), encoder on A, CSUB(A->B), CADD(B->A), measure
/// A then C, Bob corrects. Literal mode requires d = 2 (Unsupported otherwise).
Transcript run_deterministic_rsp(const ChannelSpec &channel, const TargetState &target, Mode mode, SeededRng &rng,
                                 const ProtocolOptions &options = {});

/// Concentration on a real qubit channel (alpha, beta), |alpha| <= |beta|:
/// CNOT_AC, CU_AC, CNOT_AC, measure C. C = 0 continues with the Nguyen steps
/// over the concentrated pair; C = 1 is a recorded failure.
Transcript run_probabilistic_rsp(const ChannelSpec &channel, const TargetState &target, SeededRng &rng,
                                 const ProtocolOptions &options = {});

/// Qubit protocol over (|00> + |11>)/sqrt2 with a GHZ ancilla.
Transcript run_nguyen_rsp(const TargetState &target, SeededRng &rng, const ProtocolOptions &options = {});

/// Dispatches on `protocol`; Nguyen ignores the channel and mode.
Transcript run_protocol(Protocol protocol, const ChannelSpec &channel, const TargetState &target, Mode mode,
                        SeededRng &rng, const ProtocolOptions &options = {});

/// Repeated runs of one fixed configuration. The outcome tree is enumerated
/// once with the step-by-step simulation; run() then draws exactly the
/// uniforms run_protocol would draw and returns the matching transcript.
class ProtocolSampler {
   public:
    ProtocolSampler(Protocol protocol, const ChannelSpec &channel, const TargetState &target, Mode mode,
                    const ProtocolOptions &options = {});
    const Transcript &run(SeededRng &rng) const;

   private:
    struct Node {
        std::vector<double> probabilities;
        /// Child node index, or ~leaf index for a finished run.
        std::vector<int> next;
    };
    std::vector<Node> nodes_;
    std::vector<Transcript> leaves_;
    int root_ = 0;
};

/// Every branch with nonzero probability, no sampling.
OutcomeTable exact_outcome_table(Protocol protocol, const ChannelSpec &channel, const TargetState &target, Mode mode,
                                 const ProtocolOptions &options = {});

double success_probability(const OutcomeTable &table, double tol = ProtocolOptions{}.success_tol);

std::string format_transcript(const Transcript &transcript);

/// Whitespace-free one-line summary, `key=value` pairs.
std::string summary_line(const Transcript &transcript);

}  // namespace qrsp

#endif
