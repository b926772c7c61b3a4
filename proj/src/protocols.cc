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

#include "qrsp/protocols.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "qrsp/errors.h"

namespace qrsp {

namespace {

const std::vector<std::string> kA{"A"};
const std::vector<std::string> kB{"B"};
const std::vector<std::string> kC{"C"};
const std::vector<std::string> kAB{"A", "B"};
const std::vector<std::string> kBA{"B", "A"};
const std::vector<std::string> kAC{"A", "C"};

struct Corrected {
    CVec state;
    CMat correction;
    std::string descriptor;
    double fidelity = 0;
};

Corrected correct_with(const CMat &v, const CVec &raw, const CVec &target, std::string descriptor) {
    CVec out = v * raw;
    out.normalize();
    double f = fidelity_pure(out, target);
    return {std::move(out), v, std::move(descriptor), f};
}

StateRegister with_ancilla(const StateRegister &reg, int d) {
    return tensor_product(reg, basis_register({d}, {0}, {"C"}));
}

class Recorder {
   public:
    explicit Recorder(std::vector<TranscriptStep> *steps) : steps_(steps) {
    }

    StateRegister apply(const StateRegister &reg, const GateMatrix &gate, const std::vector<std::string> &targets,
                        GateCheck check = GateCheck::strict) {
        if (steps_ != nullptr) {
            steps_->push_back({gate.name, targets, gate.defect, !gate.unitary()});
        }
        return apply_gate(reg, gate, targets, check);
    }

    void note(std::string operation, std::vector<std::string> targets) {
        if (steps_ != nullptr) {
            steps_->push_back({std::move(operation), std::move(targets), 0, false});
        }
    }

   private:
    std::vector<TranscriptStep> *steps_;
};

// ---- deterministic protocol -------------------------------------------------

struct DeterministicSetup {
    StateRegister state;
    GateMatrix encoder;
    Mode mode;
    double raw_norm;
};

DeterministicSetup setup_deterministic(const ChannelSpec &channel, const TargetState &target, Mode mode,
                                       std::vector<TranscriptStep> *steps) {
    const int d = channel.d();
    if (target.d() != d) {
        fail(ErrorKind::invalid_state, "channel dimension " + std::to_string(d) + " does not match target dimension " +
                                           std::to_string(target.d()));
    }
    if (mode == Mode::literal && d != 2) {
        fail(ErrorKind::unsupported, "literal mode is defined for qubits only");
    }
    Recorder rec(steps);
    rec.note("prepare |0>", kC);
    StateRegister reg = with_ancilla(channel_register(channel), d);
    GateMatrix cadd = controlled_shift(d, ShiftTable::add(d));
    cadd.name = "CADD" + std::to_string(d);
    reg = rec.apply(reg, cadd, kAC);

    GateMatrix encoder = [&] {
        if (mode == Mode::literal) {
            TargetState::QubitForm q = target.qubit_form();
            return encoding_unitary_literal(q.x0, q.x1_magnitude, q.theta);
        }
        return encoding_unitary(target);
    }();
    reg = rec.apply(reg, encoder, kA, mode == Mode::literal ? GateCheck::audit : GateCheck::strict);

    GateMatrix csub = controlled_shift(d, ShiftTable::subtract(d));
    csub.name = "CSUB" + std::to_string(d);
    reg = rec.apply(reg, csub, kAB);
    reg = rec.apply(reg, cadd, kBA);

    double raw_norm = reg.norm();
    if (std::abs(raw_norm - 1.0) > kStructuralTol) {
        reg = reg.normalized();
    }
    return {std::move(reg), std::move(encoder), mode, raw_norm};
}

Corrected finish_deterministic(const DeterministicSetup &setup, int a, int c, const StateRegister &collapsed,
                               const CVec &target) {
    if (a != c) {
        fail(ErrorKind::invalid_state, "ancilla outcome disagrees with A outcome");
    }
    CVec raw = extract_factor(collapsed, "B");
    const int d = static_cast<int>(raw.size());
    if (setup.mode == Mode::literal) {
        if (a == 0) {
            return correct_with(CMat::Identity(2, 2), raw, target, "identity");
        }
        return correct_with(pauli_z(2).matrix, raw, target, "sigma_z");
    }
    GateMatrix v = correction_unitary(setup.encoder, a);
    std::string descriptor = a == 0 ? "identity (V0 = U P(0,0) U^dag N0)"
                                    : "V" + std::to_string(a) + " = U P(0," + std::to_string(a) + ") U^dag N" +
                                          std::to_string(a) + " [encoder-dependent, d=" + std::to_string(d) + "]";
    return correct_with(v.matrix, raw, target, std::move(descriptor));
}

// ---- Nguyen subroutine ------------------------------------------------------

struct NguyenSetup {
    NguyenBases bases;
    GateMatrix cnot;
};

NguyenSetup setup_nguyen(const TargetState &target) {
    if (target.d() != 2) {
        fail(ErrorKind::invalid_state, "Nguyen protocol prepares qubit targets only");
    }
    TargetState::QubitForm q = target.qubit_form();
    GateMatrix cnot = controlled_shift(2, ShiftTable::add(2));
    cnot.name = "CNOT";
    return {nguyen_bases(q.x0, q.x1_magnitude, q.theta), std::move(cnot)};
}

Corrected nguyen_correct(const StateRegister &final_state, const CVec &target) {
    CVec raw = extract_factor(final_state, "B");
    return correct_with(transport_unitary(raw, target), raw, target, "transport(Bob conditional state -> target)");
}

/// Probabilities of each basis-column outcome on `label`.
std::vector<double> basis_probabilities(const StateRegister &reg, const std::string &label, const CMat &basis) {
    StateRegister rotated = apply_gate(reg, basis.adjoint(), {label}, GateCheck::audit);
    std::vector<double> out;
    for (const OutcomeProbability &p : born_probabilities(rotated, {label})) {
        out.push_back(p.probability);
    }
    return out;
}

struct Branch {
    std::vector<int> outcome;
    double probability;
    Corrected result;
};

std::vector<Branch> nguyen_branches(const StateRegister &channel_abc, const NguyenSetup &setup, const CVec &target) {
    StateRegister ghz = apply_gate(channel_abc, setup.cnot, kAC);
    std::vector<Branch> out;
    std::vector<double> pa = basis_probabilities(ghz, "A", setup.bases.mu);
    for (int k = 0; k < 2; ++k) {
        if (pa[static_cast<std::size_t>(k)] < kProbabilityFloor) {
            continue;
        }
        CollapseResult after_a = collapse_in_basis(ghz, "A", setup.bases.mu, k);
        StateRegister s = k == 0 ? apply_gate(after_a.state, setup.bases.phase, kC) : after_a.state;
        std::vector<double> pc = basis_probabilities(s, "C", setup.bases.nu);
        for (int l = 0; l < 2; ++l) {
            if (pc[static_cast<std::size_t>(l)] < kProbabilityFloor) {
                continue;
            }
            CollapseResult after_c = collapse_in_basis(s, "C", setup.bases.nu, l);
            out.push_back({{k, l}, after_a.probability * after_c.probability, nguyen_correct(after_c.state, target)});
        }
    }
    return out;
}

void finish_transcript(Transcript &t, const Corrected &c, const ProtocolOptions &options) {
    t.bob_state = c.state;
    t.correction = c.descriptor;
    t.correction_matrix = c.correction;
    t.fidelity = c.fidelity;
    t.success = !t.branch_failed && c.fidelity >= 1 - options.success_tol;
}

/// Runs the Nguyen measurements on a register already holding the maximal pair and |0>_C.
void run_nguyen_stage(Transcript &t, const StateRegister &channel_abc, const NguyenSetup &setup,
                      const OutcomeChooser &choose,
                      const ProtocolOptions &options) {
    Recorder rec(&t.steps);
    StateRegister ghz = rec.apply(channel_abc, setup.cnot, kAC);
    MeasureResult ma = measure_in_basis(ghz, "A", setup.bases.mu, choose);
    ma.record.basis = "mu'";
    int k = ma.record.outcome[0];
    StateRegister s = k == 0 ? rec.apply(ma.state, setup.bases.phase, kC) : std::move(ma.state);
    MeasureResult mc = measure_in_basis(s, "C", setup.bases.nu, choose);
    mc.record.basis = "nu";
    int l = mc.record.outcome[0];
    t.measurements.push_back(ma.record);
    t.measurements.push_back(mc.record);
    t.messages.push_back({{k, l}});
    finish_transcript(t, nguyen_correct(mc.state, t.target.vector().normalized()), options);
}

// ---- probabilistic protocol -------------------------------------------------

struct ProbabilisticSetup {
    StateRegister state;
};

ProbabilisticSetup setup_probabilistic(const ChannelSpec &channel, std::vector<TranscriptStep> *steps) {
    if (channel.d() != 2) {
        fail(ErrorKind::invalid_state, "probabilistic protocol needs a qubit channel");
    }
    for (const Complex &z : channel.lambdas()) {
        if (std::abs(z.imag()) > 1e-12) {
            fail(ErrorKind::invalid_state, "probabilistic protocol needs real channel coefficients");
        }
    }
    double alpha = channel.lambdas()[0].real();
    double beta = channel.lambdas()[1].real();
    GateMatrix cu = cu_concentration(alpha, beta);
    GateMatrix cnot = controlled_shift(2, ShiftTable::add(2));
    cnot.name = "CNOT";
    Recorder rec(steps);
    rec.note("prepare |0>", kC);
    StateRegister reg = with_ancilla(channel_register(channel), 2);
    reg = rec.apply(reg, cnot, kAC);
    reg = rec.apply(reg, cu, kAC);
    reg = rec.apply(reg, cnot, kAC);
    return {std::move(reg)};
}

Corrected abandoned_branch(const StateRegister &collapsed, const CVec &target) {
    CVec raw = extract_factor(collapsed, "B");
    return correct_with(CMat::Identity(2, 2), raw, target, "none (concentration failed)");
}

Transcript start_transcript(Protocol p, Mode m, const ChannelSpec &channel, const TargetState &target) {
    Transcript t;
    t.protocol = p;
    t.mode = m;
    t.channel = channel;
    t.target = target;
    return t;
}

}  // namespace

std::string_view to_string(Protocol p) {
    switch (p) {
        case Protocol::deterministic:
            return "deterministic";
        case Protocol::probabilistic:
            return "probabilistic";
        case Protocol::nguyen:
            return "nguyen";
    }
    return "unknown";
}

std::string_view to_string(Mode m) {
    return m == Mode::literal ? "literal" : "repaired";
}

Protocol parse_protocol(std::string_view name) {
    for (Protocol p : {Protocol::deterministic, Protocol::probabilistic, Protocol::nguyen}) {
        if (to_string(p) == name) {
            return p;
        }
    }
    fail(ErrorKind::invalid_state, "unknown protocol '" + std::string(name) + "'");
}

Mode parse_mode(std::string_view name) {
    for (Mode m : {Mode::repaired, Mode::literal}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    fail(ErrorKind::invalid_state, "unknown mode '" + std::string(name) + "'");
}

bool Transcript::has_non_unitary_step() const {
    return std::any_of(steps.begin(), steps.end(), [](const TranscriptStep &s) { return s.non_unitary; });
}

namespace {

Transcript deterministic_impl(const ChannelSpec &channel, const TargetState &target, Mode mode,
                              const OutcomeChooser &choose, const ProtocolOptions &options) {
    Transcript t = start_transcript(Protocol::deterministic, mode, channel, target);
    DeterministicSetup setup = setup_deterministic(channel, target, mode, &t.steps);
    t.raw_norm = setup.raw_norm;
    MeasureResult ma = measure(setup.state, kA, choose);
    MeasureResult mc = measure(ma.state, kC, choose);
    int a = ma.record.outcome[0];
    int c = mc.record.outcome[0];
    t.measurements = {ma.record, mc.record};
    t.messages.push_back({{a, c}});
    t.outcome = {a, c};
    finish_transcript(t, finish_deterministic(setup, a, c, mc.state, target.vector().normalized()), options);
    return t;
}

Transcript nguyen_impl(const TargetState &target, const OutcomeChooser &choose, const ProtocolOptions &options) {
    NguyenSetup setup = setup_nguyen(target);
    Transcript t = start_transcript(Protocol::nguyen, Mode::repaired, ChannelSpec::maximal(2), target);
    t.steps.push_back({"prepare |0>", kC, 0, false});
    run_nguyen_stage(t, with_ancilla(channel_register(t.channel), 2), setup, choose, options);
    t.outcome = t.messages.back().outcome;
    return t;
}

Transcript probabilistic_impl(const ChannelSpec &channel, const TargetState &target, const OutcomeChooser &choose,
                              const ProtocolOptions &options) {
    if (target.d() != 2) {
        fail(ErrorKind::invalid_state, "probabilistic protocol prepares qubit targets only");
    }
    Transcript t = start_transcript(Protocol::probabilistic, Mode::repaired, channel, target);
    ProbabilisticSetup setup = setup_probabilistic(channel, &t.steps);
    NguyenSetup nguyen = setup_nguyen(target);
    MeasureResult mc = measure(setup.state, kC, choose);
    int c = mc.record.outcome[0];
    t.measurements.push_back(mc.record);
    t.messages.push_back({{c}});
    t.outcome = {c};
    if (c == 0) {
        run_nguyen_stage(t, mc.state, nguyen, choose, options);
    } else {
        t.branch_failed = true;
        finish_transcript(t, abandoned_branch(mc.state, target.vector().normalized()), options);
    }
    return t;
}

Transcript protocol_impl(Protocol protocol, const ChannelSpec &channel, const TargetState &target, Mode mode,
                         const OutcomeChooser &choose, const ProtocolOptions &options) {
    switch (protocol) {
        case Protocol::deterministic:
            return deterministic_impl(channel, target, mode, choose, options);
        case Protocol::probabilistic:
            return probabilistic_impl(channel, target, choose, options);
        case Protocol::nguyen:
            return nguyen_impl(target, choose, options);
    }
    fail(ErrorKind::invalid_state, "unknown protocol");
}

OutcomeChooser sampler(SeededRng &rng) {
    return [&rng](const std::vector<double> &p) { return sample_outcome(p, rng); };
}

}  // namespace

Transcript run_deterministic_rsp(const ChannelSpec &channel, const TargetState &target, Mode mode, SeededRng &rng,
                                 const ProtocolOptions &options) {
    return deterministic_impl(channel, target, mode, sampler(rng), options);
}

Transcript run_nguyen_rsp(const TargetState &target, SeededRng &rng, const ProtocolOptions &options) {
    return nguyen_impl(target, sampler(rng), options);
}

Transcript run_probabilistic_rsp(const ChannelSpec &channel, const TargetState &target, SeededRng &rng,
                                 const ProtocolOptions &options) {
    return probabilistic_impl(channel, target, sampler(rng), options);
}

Transcript run_protocol(Protocol protocol, const ChannelSpec &channel, const TargetState &target, Mode mode,
                        SeededRng &rng, const ProtocolOptions &options) {
    return protocol_impl(protocol, channel, target, mode, sampler(rng), options);
}

ProtocolSampler::ProtocolSampler(Protocol protocol, const ChannelSpec &channel, const TargetState &target, Mode mode,
                                 const ProtocolOptions &options) {
    // Depth-first over outcome paths. Each visit replays the protocol with the
    // path forced and the first live outcome taken past its end.
    std::function<int(const std::vector<std::size_t> &)> build = [&](const std::vector<std::size_t> &prefix) -> int {
        std::vector<std::vector<double>> seen;
        OutcomeChooser forced = [&](const std::vector<double> &p) {
            std::size_t depth = seen.size();
            seen.push_back(p);
            if (depth < prefix.size()) {
                return prefix[depth];
            }
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (p[i] >= kProbabilityFloor) {
                    return i;
                }
            }
            fail(ErrorKind::degenerate_state, "no outcome carries probability mass");
        };
        Transcript t = protocol_impl(protocol, channel, target, mode, forced, options);
        if (seen.size() == prefix.size()) {
            leaves_.push_back(std::move(t));
            return ~static_cast<int>(leaves_.size() - 1);
        }
        const std::vector<double> probs = seen[prefix.size()];
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back({probs, std::vector<int>(probs.size(), 0)});
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] >= kProbabilityFloor) {
                std::vector<std::size_t> next = prefix;
                next.push_back(i);
                int child = build(next);
                nodes_[static_cast<std::size_t>(id)].next[i] = child;
            }
        }
        return id;
    };
    root_ = build({});
}

const Transcript &ProtocolSampler::run(SeededRng &rng) const {
    int id = root_;
    while (id >= 0) {
        const Node &node = nodes_[static_cast<std::size_t>(id)];
        id = node.next[sample_outcome(node.probabilities, rng)];
    }
    return leaves_[static_cast<std::size_t>(~id)];
}

OutcomeTable exact_outcome_table(Protocol protocol, const ChannelSpec &channel, const TargetState &target, Mode mode,
                                 const ProtocolOptions &options) {
    (void)options;
    OutcomeTable table;
    table.protocol = protocol;
    table.mode = protocol == Protocol::deterministic ? mode : Mode::repaired;
    const CVec goal = target.vector().normalized();
    auto push = [&table](std::vector<int> outcome, double p, Corrected c, bool abandoned) {
        table.rows.push_back({std::move(outcome), p, std::move(c.state), c.fidelity, abandoned, std::move(c.descriptor)});
    };

    switch (protocol) {
        case Protocol::deterministic: {
            DeterministicSetup setup = setup_deterministic(channel, target, mode, nullptr);
            table.raw_norm = setup.raw_norm;
            for (const OutcomeProbability &p : born_probabilities(setup.state, kAC)) {
                if (p.probability < kProbabilityFloor) {
                    continue;
                }
                CollapseResult c = collapse(setup.state, kAC, p.outcome);
                push(p.outcome, p.probability,
                     finish_deterministic(setup, p.outcome[0], p.outcome[1], c.state, goal), false);
            }
            break;
        }
        case Protocol::nguyen: {
            NguyenSetup setup = setup_nguyen(target);
            StateRegister start = with_ancilla(channel_register(ChannelSpec::maximal(2)), 2);
            for (Branch &b : nguyen_branches(start, setup, goal)) {
                push(std::move(b.outcome), b.probability, std::move(b.result), false);
            }
            break;
        }
        case Protocol::probabilistic: {
            if (target.d() != 2) {
                fail(ErrorKind::invalid_state, "probabilistic protocol prepares qubit targets only");
            }
            ProbabilisticSetup setup = setup_probabilistic(channel, nullptr);
            NguyenSetup nguyen = setup_nguyen(target);
            for (const OutcomeProbability &p : born_probabilities(setup.state, kC)) {
                if (p.probability < kProbabilityFloor) {
                    continue;
                }
                CollapseResult c = collapse(setup.state, kC, p.outcome);
                if (p.outcome[0] == 1) {
                    push(p.outcome, p.probability, abandoned_branch(c.state, goal), true);
                    continue;
                }
                // The success row reports its worst Nguyen sub-branch.
                std::vector<Branch> sub = nguyen_branches(c.state, nguyen, goal);
                auto worst = std::min_element(sub.begin(), sub.end(), [](const Branch &x, const Branch &y) {
                    return x.result.fidelity < y.result.fidelity;
                });
                push(p.outcome, p.probability, std::move(worst->result), false);
            }
            break;
        }
    }
    return table;
}

double success_probability(const OutcomeTable &table, double tol) {
    double total = 0;
    for (const OutcomeRow &row : table.rows) {
        if (!row.abandoned && row.fidelity >= 1 - tol) {
            total += row.probability;
        }
    }
    return total;
}

namespace {

std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string fmt_complex(const Complex &z) {
    return "(" + fmt_double(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt_double(std::abs(z.imag())) + "i)";
}

std::string fmt_ints(const std::vector<int> &v, char sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += std::to_string(v[i]);
    }
    return out;
}

std::string join(const std::vector<std::string> &v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i > 0 ? "," : "") + v[i];
    }
    return out;
}

}  // namespace

std::string format_transcript(const Transcript &t) {
    std::ostringstream out;
    out << "protocol: " << to_string(t.protocol) << "\n";
    out << "mode: " << to_string(t.mode) << "\n";
    out << "channel:";
    for (const Complex &z : t.channel.lambdas()) {
        out << ' ' << fmt_complex(z);
    }
    out << "\ntarget:";
    for (const Complex &z : t.target.amplitudes()) {
        out << ' ' << fmt_complex(z);
    }
    out << "\nsteps:\n";
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const TranscriptStep &s = t.steps[i];
        out << "  " << i + 1 << ". " << s.operation << " on " << join(s.targets) << "  defect=" << fmt_double(s.defect);
        if (s.non_unitary) {
            out << "  [NON-UNITARY STEP]";
        }
        out << "\n";
    }
    if (std::abs(t.raw_norm - 1.0) > kStructuralTol) {
        out << "raw pre-measurement norm: " << fmt_double(t.raw_norm) << " (renormalized before measurement)\n";
    }
    out << "measurements:\n";
    for (const MeasurementRecord &m : t.measurements) {
        out << "  " << join(m.subsystems) << " in " << m.basis << " basis -> (" << fmt_ints(m.outcome, ',')
            << ")  p=" << fmt_double(m.probability) << "\n";
    }
    out << "classical messages (Alice -> Bob):\n";
    for (const ClassicalMessage &msg : t.messages) {
        out << "  (" << fmt_ints(msg.outcome, ',') << ")\n";
    }
    out << "correction: " << t.correction << "\n";
    out << "bob state:";
    for (Eigen::Index i = 0; i < t.bob_state.size(); ++i) {
        out << ' ' << fmt_complex(t.bob_state(i));
    }
    out << "\nfidelity: " << fmt_double(t.fidelity) << "\n";
    if (t.branch_failed) {
        out << "branch: FAILED (concentration measurement)\n";
    }
    out << "success: " << (t.success ? "true" : "false") << "\n";
    return out.str();
}

std::string summary_line(const Transcript &t) {
    return "summary protocol=" + std::string(to_string(t.protocol)) + " mode=" + std::string(to_string(t.mode)) +
           " d=" + std::to_string(t.target.d()) + " outcome=" + fmt_ints(t.outcome, ',') +
           " fidelity=" + fmt_double(t.fidelity) + " non_unitary=" + (t.has_non_unitary_step() ? "true" : "false") +
           " success=" + (t.success ? "true" : "false");
}

}  // namespace qrsp
