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

#include "qrsp/state_register.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "qrsp/errors.h"

namespace qrsp {

namespace {

std::size_t checked_product(const std::vector<int> &dims) {
    std::size_t n = 1;
    for (int d : dims) {
        if (d < 1) {
            fail(ErrorKind::shape_error, "subsystem dimension must be positive, got " + std::to_string(d));
        }
        n *= static_cast<std::size_t>(d);
        if (n > kMaxRegisterSize) {
            fail(ErrorKind::capacity_exceeded, "register size exceeds " + std::to_string(kMaxRegisterSize));
        }
    }
    return n;
}

/// Offsets of the targeted and untargeted digit combinations. Every amplitude
/// index is uniquely rest[r] + target[s].
struct Layout {
    std::vector<std::size_t> target;
    std::vector<std::size_t> rest;
    std::vector<int> target_dims;
};

std::vector<std::size_t> offsets(const StateRegister &reg, const std::vector<std::size_t> &positions) {
    std::vector<std::size_t> out{0};
    for (std::size_t p : positions) {
        std::size_t stride = reg.stride(p);
        int d = reg.dims()[p];
        std::vector<std::size_t> next;
        next.reserve(out.size() * static_cast<std::size_t>(d));
        for (std::size_t base : out) {
            for (int k = 0; k < d; ++k) {
                next.push_back(base + static_cast<std::size_t>(k) * stride);
            }
        }
        out = std::move(next);
    }
    return out;
}

Layout layout_for(const StateRegister &reg, const std::vector<std::string> &targets) {
    if (targets.empty()) {
        fail(ErrorKind::shape_error, "target list is empty");
    }
    std::vector<std::size_t> positions;
    for (const std::string &t : targets) {
        std::size_t p = reg.position(t);
        if (std::find(positions.begin(), positions.end(), p) != positions.end()) {
            fail(ErrorKind::shape_error, "duplicate target " + t);
        }
        positions.push_back(p);
    }
    std::vector<std::size_t> rest;
    for (std::size_t p = 0; p < reg.dims().size(); ++p) {
        if (std::find(positions.begin(), positions.end(), p) == positions.end()) {
            rest.push_back(p);
        }
    }
    Layout layout;
    layout.target = offsets(reg, positions);
    layout.rest = offsets(reg, rest);
    for (std::size_t p : positions) {
        layout.target_dims.push_back(reg.dims()[p]);
    }
    return layout;
}

std::vector<int> unflatten(std::size_t s, const std::vector<int> &dims) {
    std::vector<int> digits(dims.size());
    for (std::size_t i = dims.size(); i-- > 0;) {
        digits[i] = static_cast<int>(s % static_cast<std::size_t>(dims[i]));
        s /= static_cast<std::size_t>(dims[i]);
    }
    return digits;
}

std::size_t flatten(const std::vector<int> &digits, const std::vector<int> &dims) {
    if (digits.size() != dims.size()) {
        fail(ErrorKind::shape_error, "outcome has " + std::to_string(digits.size()) + " digits, expected " +
                                         std::to_string(dims.size()));
    }
    std::size_t s = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (digits[i] < 0 || digits[i] >= dims[i]) {
            fail(ErrorKind::index_out_of_range,
                 "index " + std::to_string(digits[i]) + " outside dimension " + std::to_string(dims[i]));
        }
        s = s * static_cast<std::size_t>(dims[i]) + static_cast<std::size_t>(digits[i]);
    }
    return s;
}

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.emplace_back(1, static_cast<char>('A' + i));
    }
    return out;
}

void require_basis(const CMat &basis, int dim) {
    if (basis.rows() != dim || basis.cols() != dim) {
        fail(ErrorKind::shape_error, "measurement basis must be " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    double defect = unitarity_defect(basis);
    if (defect > kStructuralTol) {
        fail(ErrorKind::non_unitary_gate, "measurement basis is not orthonormal (defect " + std::to_string(defect) + ")");
    }
}

}  // namespace

StateRegister::StateRegister(Unchecked, std::vector<std::string> labels, std::vector<int> dims, CVec amplitudes)
    : labels_(std::move(labels)), dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
    if (labels_.size() != dims_.size() || dims_.empty()) {
        fail(ErrorKind::shape_error, "labels and dims must be non-empty and of equal length");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        for (std::size_t j = i + 1; j < labels_.size(); ++j) {
            if (labels_[i] == labels_[j]) {
                fail(ErrorKind::shape_error, "duplicate subsystem label " + labels_[i]);
            }
        }
    }
    std::size_t n = checked_product(dims_);
    if (static_cast<std::size_t>(amplitudes_.size()) != n) {
        fail(ErrorKind::shape_error, "amplitude count " + std::to_string(amplitudes_.size()) +
                                         " does not match product of dims " + std::to_string(n));
    }
    if (!all_finite(amplitudes_)) {
        fail(ErrorKind::invalid_state, "register has non-finite amplitudes");
    }
}

StateRegister::StateRegister(std::vector<std::string> labels, std::vector<int> dims, CVec amplitudes, double tol)
    : StateRegister(Unchecked{}, std::move(labels), std::move(dims), std::move(amplitudes)) {
    double n = amplitudes_.norm();
    if (std::abs(n - 1.0) > tol) {
        fail(ErrorKind::invalid_state, "register norm is " + std::to_string(n));
    }
}

StateRegister StateRegister::from_raw(std::vector<std::string> labels, std::vector<int> dims, CVec amplitudes) {
    return StateRegister(Unchecked{}, std::move(labels), std::move(dims), std::move(amplitudes));
}

std::size_t StateRegister::position(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) {
            return i;
        }
    }
    fail(ErrorKind::shape_error, "no subsystem labelled " + std::string(label));
}

std::size_t StateRegister::stride(std::size_t position) const {
    std::size_t s = 1;
    for (std::size_t i = position + 1; i < dims_.size(); ++i) {
        s *= static_cast<std::size_t>(dims_[i]);
    }
    return s;
}

StateRegister StateRegister::normalized() const {
    double n = norm();
    if (n < 1e-300) {
        fail(ErrorKind::degenerate_state, "cannot normalize a zero register");
    }
    return StateRegister(Unchecked{}, labels_, dims_, amplitudes_ / n);
}

double hermiticity_error(const DensityMatrix &m) {
    return (m.rho - m.rho.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const DensityMatrix &m) {
    CMat h = 0.5 * (m.rho + m.rho.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

bool is_physical(const DensityMatrix &m, double tol) {
    if (m.rho.rows() != m.rho.cols() || m.rho.rows() < 1 || !all_finite(m.rho)) {
        return false;
    }
    return hermiticity_error(m) <= tol && std::abs(m.rho.trace() - Complex(1.0, 0)) <= tol &&
           min_eigenvalue(m) >= -tol;
}

StateRegister basis_register(const std::vector<int> &dims, const std::vector<int> &index,
                             std::vector<std::string> labels) {
    if (labels.empty()) {
        labels = default_labels(dims.size());
    }
    std::size_t n = checked_product(dims);
    std::size_t flat = flatten(index, dims);
    CVec amps = CVec::Zero(static_cast<Eigen::Index>(n));
    amps(static_cast<Eigen::Index>(flat)) = 1.0;
    return StateRegister(std::move(labels), dims, std::move(amps));
}

StateRegister channel_register(const ChannelSpec &spec) {
    int d = spec.d();
    CVec amps = CVec::Zero(d * d);
    for (int m = 0; m < d; ++m) {
        amps(m * d + m) = spec.lambdas()[static_cast<std::size_t>(m)];
    }
    return StateRegister({"A", "B"}, {d, d}, std::move(amps));
}

StateRegister tensor_product(const StateRegister &a, const StateRegister &b) {
    std::vector<std::string> labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    std::vector<int> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return StateRegister::from_raw(std::move(labels), std::move(dims), kron(a.amplitudes(), b.amplitudes()));
}

StateRegister apply_gate(const StateRegister &reg, const CMat &gate, const std::vector<std::string> &targets,
                         GateCheck check) {
    Layout layout = layout_for(reg, targets);
    const auto g = static_cast<Eigen::Index>(layout.target.size());
    if (gate.rows() != g || gate.cols() != g) {
        fail(ErrorKind::shape_error, "gate is " + std::to_string(gate.rows()) + "x" + std::to_string(gate.cols()) +
                                         " but targets span dimension " + std::to_string(g));
    }
    if (check == GateCheck::strict) {
        double defect = unitarity_defect(gate);
        if (defect > kStructuralTol) {
            fail(ErrorKind::non_unitary_gate, "gate defect " + std::to_string(defect) + " in strict mode");
        }
    }
    const CVec &in = reg.amplitudes();
    CVec out(in.size());
    CVec local(g);
    for (std::size_t base : layout.rest) {
        for (Eigen::Index s = 0; s < g; ++s) {
            local(s) = in(static_cast<Eigen::Index>(base + layout.target[static_cast<std::size_t>(s)]));
        }
        CVec mapped = gate * local;
        for (Eigen::Index r = 0; r < g; ++r) {
            out(static_cast<Eigen::Index>(base + layout.target[static_cast<std::size_t>(r)])) = mapped(r);
        }
    }
    return StateRegister::from_raw(reg.labels(), reg.dims(), std::move(out));
}

std::vector<OutcomeProbability> born_probabilities(const StateRegister &reg,
                                                   const std::vector<std::string> &targets) {
    Layout layout = layout_for(reg, targets);
    const CVec &amps = reg.amplitudes();
    double total = amps.squaredNorm();
    std::vector<OutcomeProbability> out(layout.target.size());
    for (std::size_t s = 0; s < layout.target.size(); ++s) {
        double p = 0;
        for (std::size_t base : layout.rest) {
            p += std::norm(amps(static_cast<Eigen::Index>(base + layout.target[s])));
        }
        out[s].outcome = unflatten(s, layout.target_dims);
        out[s].probability = total > 0 ? p / total : 0.0;
    }
    return out;
}

CollapseResult collapse(const StateRegister &reg, const std::vector<std::string> &targets,
                        const std::vector<int> &outcome) {
    Layout layout = layout_for(reg, targets);
    std::size_t s = flatten(outcome, layout.target_dims);
    const CVec &amps = reg.amplitudes();
    CVec out = CVec::Zero(amps.size());
    double weight = 0;
    for (std::size_t base : layout.rest) {
        auto i = static_cast<Eigen::Index>(base + layout.target[s]);
        out(i) = amps(i);
        weight += std::norm(amps(i));
    }
    double total = amps.squaredNorm();
    if (total < 1e-12 || weight / total < kProbabilityFloor) {
        fail(ErrorKind::degenerate_state, "outcome branch has zero probability");
    }
    out /= std::sqrt(weight);
    return {weight / total, StateRegister::from_raw(reg.labels(), reg.dims(), std::move(out))};
}

std::size_t sample_outcome(const std::vector<double> &probabilities, SeededRng &rng) {
    double mass = 0;
    for (double p : probabilities) {
        if (p >= kProbabilityFloor) {
            mass += p;
        }
    }
    if (mass < 1e-12) {
        fail(ErrorKind::degenerate_state, "no outcome carries probability mass");
    }
    double u = rng.uniform() * mass;
    std::size_t chosen = probabilities.size();
    double acc = 0;
    for (std::size_t s = 0; s < probabilities.size(); ++s) {
        if (probabilities[s] < kProbabilityFloor) {
            continue;
        }
        chosen = s;
        acc += probabilities[s];
        if (u < acc) {
            break;
        }
    }
    return chosen;
}

MeasureResult measure(const StateRegister &reg, const std::vector<std::string> &targets,
                      const OutcomeChooser &choose) {
    if (reg.amplitudes().squaredNorm() < 1e-12) {
        fail(ErrorKind::degenerate_state, "register has no probability mass");
    }
    std::vector<OutcomeProbability> probs = born_probabilities(reg, targets);
    std::vector<double> p(probs.size());
    for (std::size_t s = 0; s < probs.size(); ++s) {
        p[s] = probs[s].probability;
    }
    std::size_t chosen = choose(p);
    if (chosen >= probs.size()) {
        fail(ErrorKind::index_out_of_range, "chosen outcome index " + std::to_string(chosen));
    }
    CollapseResult collapsed = collapse(reg, targets, probs[chosen].outcome);
    MeasurementRecord record{targets, probs[chosen].outcome, probs[chosen].probability, "computational"};
    return {std::move(record), std::move(collapsed.state)};
}

MeasureResult measure(const StateRegister &reg, const std::vector<std::string> &targets, SeededRng &rng) {
    return measure(reg, targets, [&rng](const std::vector<double> &p) { return sample_outcome(p, rng); });
}

MeasureResult measure_in_basis(const StateRegister &reg, const std::string &target, const CMat &basis,
                               const OutcomeChooser &choose) {
    require_basis(basis, reg.dim_of(target));
    StateRegister rotated = apply_gate(reg, basis.adjoint(), {target}, GateCheck::audit);
    MeasureResult result = measure(rotated, {target}, choose);
    result.state = apply_gate(result.state, basis, {target}, GateCheck::audit);
    result.record.basis = "custom";
    return result;
}

MeasureResult measure_in_basis(const StateRegister &reg, const std::string &target, const CMat &basis,
                               SeededRng &rng) {
    return measure_in_basis(reg, target, basis,
                            [&rng](const std::vector<double> &p) { return sample_outcome(p, rng); });
}

CollapseResult collapse_in_basis(const StateRegister &reg, const std::string &target, const CMat &basis,
                                 int outcome) {
    require_basis(basis, reg.dim_of(target));
    StateRegister rotated = apply_gate(reg, basis.adjoint(), {target}, GateCheck::audit);
    CollapseResult result = collapse(rotated, {target}, {outcome});
    result.state = apply_gate(result.state, basis, {target}, GateCheck::audit);
    return result;
}

DensityMatrix reduced_density(const StateRegister &reg, const std::vector<std::string> &keep) {
    Layout layout = layout_for(reg, keep);
    const CVec &amps = reg.amplitudes();
    double total = amps.squaredNorm();
    if (total < 1e-300) {
        fail(ErrorKind::degenerate_state, "cannot take the partial trace of a zero register");
    }
    const auto g = static_cast<Eigen::Index>(layout.target.size());
    CMat rho = CMat::Zero(g, g);
    CVec local(g);
    for (std::size_t base : layout.rest) {
        for (Eigen::Index s = 0; s < g; ++s) {
            local(s) = amps(static_cast<Eigen::Index>(base + layout.target[static_cast<std::size_t>(s)]));
        }
        rho.noalias() += local * local.adjoint();
    }
    return {rho / total};
}

CVec extract_factor(const StateRegister &reg, const std::string &label) {
    std::size_t p = reg.position(label);
    const CVec &amps = reg.amplitudes();
    Eigen::Index peak = 0;
    amps.cwiseAbs2().maxCoeff(&peak);
    std::size_t stride = reg.stride(p);
    int d = reg.dims()[p];
    std::size_t digit = (static_cast<std::size_t>(peak) / stride) % static_cast<std::size_t>(d);
    std::size_t base = static_cast<std::size_t>(peak) - digit * stride;
    CVec slice(d);
    for (int k = 0; k < d; ++k) {
        slice(k) = amps(static_cast<Eigen::Index>(base + static_cast<std::size_t>(k) * stride));
    }
    slice.normalize();
    DensityMatrix rho = reduced_density(reg, {label});
    double overlap = (slice.adjoint() * rho.rho * slice)(0, 0).real();
    if (overlap < 1 - 1e-9) {
        fail(ErrorKind::invalid_state, "subsystem " + label + " is entangled with the rest of the register");
    }
    return slice;
}

}  // namespace qrsp
