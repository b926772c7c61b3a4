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

#include "qrsp/oracle.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "qrsp/errors.h"
#include "qrsp/rng.h"

namespace qrsp {

namespace {

using Cx = std::complex<double>;

constexpr double kFloor = 1e-15;

// Plain row-major matrix. Deliberately independent of Eigen and the register.
struct Dense {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Cx> a;

    Dense(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Cx(0, 0)) {
    }
    Cx &operator()(std::size_t i, std::size_t j) {
        return a[i * cols + j];
    }
    Cx operator()(std::size_t i, std::size_t j) const {
        return a[i * cols + j];
    }
};

Dense identity(std::size_t n) {
    Dense m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1;
    }
    return m;
}

Dense mul(const Dense &x, const Dense &y) {
    Dense out(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t k = 0; k < x.cols; ++k) {
            Cx v = x(i, k);
            if (v == Cx(0, 0)) {
                continue;
            }
            for (std::size_t j = 0; j < y.cols; ++j) {
                out(i, j) += v * y(k, j);
            }
        }
    }
    return out;
}

Dense add(Dense x, const Dense &y) {
    for (std::size_t i = 0; i < x.a.size(); ++i) {
        x.a[i] += y.a[i];
    }
    return x;
}

Dense scale(Dense x, Cx s) {
    for (Cx &v : x.a) {
        v *= s;
    }
    return x;
}

Dense adjoint(const Dense &x) {
    Dense out(x.cols, x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t j = 0; j < x.cols; ++j) {
            out(j, i) = std::conj(x(i, j));
        }
    }
    return out;
}

Dense kron(const Dense &x, const Dense &y) {
    Dense out(x.rows * y.rows, x.cols * y.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t j = 0; j < x.cols; ++j) {
            for (std::size_t k = 0; k < y.rows; ++k) {
                for (std::size_t l = 0; l < y.cols; ++l) {
                    out(i * y.rows + k, j * y.cols + l) = x(i, j) * y(k, l);
                }
            }
        }
    }
    return out;
}

Dense kron3(const Dense &x, const Dense &y, const Dense &z) {
    return kron(kron(x, y), z);
}

Dense ket(std::size_t d, std::size_t k) {
    Dense v(d, 1);
    v(k, 0) = 1;
    return v;
}

Dense bra(std::size_t d, std::size_t k) {
    return adjoint(ket(d, k));
}

Dense projector(const Dense &v) {
    return mul(v, adjoint(v));
}

/// X^s: |j> -> |j + s mod d>.
Dense shift_power(std::size_t d, long s) {
    Dense m(d, d);
    const long dd = static_cast<long>(d);
    for (long j = 0; j < dd; ++j) {
        m(static_cast<std::size_t>(((j + s) % dd + dd) % dd), static_cast<std::size_t>(j)) = 1;
    }
    return m;
}

double norm2(const Dense &v) {
    double s = 0;
    for (const Cx &z : v.a) {
        s += std::norm(z);
    }
    return s;
}

Cx inner(const Dense &u, const Dense &v) {
    Cx s = 0;
    for (std::size_t i = 0; i < u.a.size(); ++i) {
        s += std::conj(u.a[i]) * v.a[i];
    }
    return s;
}

Dense from_list(const std::vector<Complex> &v) {
    Dense out(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) {
        out(i, 0) = v[i];
    }
    return out;
}

double pure_fidelity(const Dense &target, const Dense &state) {
    return std::norm(inner(target, state)) / (norm2(target) * norm2(state));
}

/// Columns: the target, then Gram-Schmidt over e_0, e_1, ... until d columns.
Dense gram_schmidt_completion(const Dense &first) {
    const std::size_t d = first.rows;
    std::vector<Dense> cols{scale(first, 1 / std::sqrt(norm2(first)))};
    for (std::size_t e = 0; e < d && cols.size() < d; ++e) {
        Dense v = ket(d, e);
        for (int pass = 0; pass < 2; ++pass) {
            for (const Dense &c : cols) {
                v = add(v, scale(c, -inner(c, v)));
            }
        }
        double n = std::sqrt(norm2(v));
        if (n > 1e-6) {
            cols.push_back(scale(v, 1 / n));
        }
    }
    Dense u(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            u(i, j) = cols[j](i, 0);
        }
    }
    return u;
}

struct QubitParams {
    double a, b, gamma;
};

QubitParams qubit_params(const TargetState &t) {
    Cx t0 = t.amplitudes()[0];
    Cx t1 = t.amplitudes()[1];
    double gamma = std::abs(t1) > 0 ? std::arg(t1) - (std::abs(t0) > 0 ? std::arg(t0) : 0.0) : 0.0;
    return {std::abs(t0), std::abs(t1), gamma};
}

/// Nguyen's measurements on a three-qubit ABC state that already holds the
/// maximal pair on AB and |0> on C. Returns one (probability, fidelity) per
/// (mu, nu) outcome with Bob fixed by the Pauli table.
std::vector<BranchEntry> naive_nguyen(const Dense &abc, const TargetState &target) {
    const Dense i2 = identity(2);
    const Dense x = shift_power(2, 1);
    Dense z = identity(2);
    z(1, 1) = -1;
    QubitParams q = qubit_params(target);
    const Dense goal = from_list(target.amplitudes());

    Dense cnot = add(kron3(projector(ket(2, 0)), i2, i2), kron3(projector(ket(2, 1)), i2, x));
    Dense ghz = mul(cnot, abc);
    double total = norm2(ghz);

    Dense mu0(2, 1), mu1(2, 1), nu0(2, 1), nu1(2, 1);
    mu0(0, 0) = q.a;
    mu0(1, 0) = q.b;
    mu1(0, 0) = q.b;
    mu1(1, 0) = -q.a;
    const double s = 1 / std::numbers::sqrt2;
    nu0(0, 0) = s;
    nu0(1, 0) = s * std::polar(1.0, q.gamma);
    nu1(0, 0) = s * std::polar(1.0, -q.gamma);
    nu1(1, 0) = -s;
    Dense phase = identity(2);
    phase(1, 1) = std::polar(1.0, 2 * q.gamma);
    // Bob's fix for each (mu, nu) outcome.
    const Dense fixes[2][2] = {{i2, z}, {mul(z, x), x}};

    std::vector<BranchEntry> out;
    const Dense mus[2] = {mu0, mu1};
    const Dense nus[2] = {nu0, nu1};
    for (int k = 0; k < 2; ++k) {
        Dense after_a = mul(kron3(projector(mus[k]), i2, i2), ghz);
        if (k == 0) {
            after_a = mul(kron3(i2, i2, phase), after_a);
        }
        for (int l = 0; l < 2; ++l) {
            Dense branch = mul(kron3(i2, i2, projector(nus[l])), after_a);
            double p = norm2(branch) / total;
            if (p < kFloor) {
                continue;
            }
            Dense bob = mul(kron3(adjoint(mus[k]), i2, adjoint(nus[l])), branch);
            double f = pure_fidelity(goal, mul(fixes[k][l], bob));
            out.push_back({{k, l}, p, f, false});
        }
    }
    return out;
}

BranchDistribution naive_deterministic(const ChannelSpec &channel, const TargetState &target, Mode mode) {
    const auto d = static_cast<std::size_t>(channel.d());
    if (target.d() != channel.d()) {
        fail(ErrorKind::invalid_state, "channel and target dimensions differ");
    }
    if (mode == Mode::literal && d != 2) {
        fail(ErrorKind::unsupported, "literal mode is defined for qubits only");
    }
    const Dense id = identity(d);
    const Dense goal = from_list(target.amplitudes());

    Dense pair(d * d, 1);
    for (std::size_t m = 0; m < d; ++m) {
        pair = add(pair, scale(kron(ket(d, m), ket(d, m)), channel.lambdas()[m]));
    }
    Dense psi = kron(pair, ket(d, 0));

    Dense encoder(d, d);
    if (mode == Mode::literal) {
        QubitParams q = qubit_params(target);
        Cx off = std::polar(q.b, q.gamma);
        encoder(0, 0) = q.a;
        encoder(0, 1) = -off;
        encoder(1, 0) = off;
        encoder(1, 1) = q.a;
    } else {
        encoder = gram_schmidt_completion(goal);
    }

    Dense add_ac(d * d * d, d * d * d), sub_ab(d * d * d, d * d * d), add_ba(d * d * d, d * d * d);
    for (std::size_t i = 0; i < d; ++i) {
        const long s = static_cast<long>(i);
        Dense p = projector(ket(d, i));
        add_ac = add(add_ac, kron3(p, id, shift_power(d, s)));
        sub_ab = add(sub_ab, kron3(p, shift_power(d, -s), id));
        add_ba = add(add_ba, kron3(shift_power(d, s), p, id));
    }
    psi = mul(add_ac, psi);
    psi = mul(kron3(encoder, id, id), psi);
    psi = mul(sub_ab, psi);
    psi = mul(add_ba, psi);
    const double total = norm2(psi);

    BranchDistribution dist;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t c = 0; c < d; ++c) {
            Dense branch = mul(kron3(projector(ket(d, a)), id, projector(ket(d, c))), psi);
            double p = norm2(branch) / total;
            if (p < kFloor) {
                continue;
            }
            Dense bob = mul(kron3(bra(d, a), id, bra(d, c)), psi);
            Dense fix = id;
            if (a == c && mode == Mode::literal && a == 1) {
                fix(1, 1) = -1;
            } else if (a == c && mode == Mode::repaired) {
                Dense swap = identity(d);
                if (a != 0) {
                    swap(0, 0) = swap(a, a) = 0;
                    swap(0, a) = swap(a, 0) = 1;
                }
                Dense negate(d, d);
                for (std::size_t l = 0; l < d; ++l) {
                    negate((a + d - l) % d, l) = 1;
                }
                fix = mul(mul(mul(encoder, swap), adjoint(encoder)), negate);
            }
            dist.branches.push_back(
                {{static_cast<int>(a), static_cast<int>(c)}, p, pure_fidelity(goal, mul(fix, bob)), false});
        }
    }
    return dist;
}

BranchDistribution naive_probabilistic(const ChannelSpec &channel, const TargetState &target) {
    if (channel.d() != 2 || target.d() != 2) {
        fail(ErrorKind::invalid_state, "probabilistic protocol is qubit-only");
    }
    const double alpha = channel.lambdas()[0].real();
    const double beta = channel.lambdas()[1].real();
    if (std::abs(alpha) > std::abs(beta) + 1e-12) {
        fail(ErrorKind::invalid_state, "probabilistic protocol requires |alpha| <= |beta|");
    }
    const Dense i2 = identity(2);
    const Dense goal = from_list(target.amplitudes());
    Dense psi = add(scale(kron3(ket(2, 0), ket(2, 0), ket(2, 0)), alpha),
                    scale(kron3(ket(2, 1), ket(2, 1), ket(2, 0)), beta));
    Dense cnot = add(kron3(projector(ket(2, 0)), i2, i2), kron3(projector(ket(2, 1)), i2, shift_power(2, 1)));
    const double ratio = alpha / beta;
    const double root = std::sqrt(std::max(0.0, 1 - ratio * ratio));
    Dense block(2, 2);
    block(0, 0) = ratio;
    block(1, 0) = -root;
    block(0, 1) = root;
    block(1, 1) = ratio;
    Dense cu = add(kron3(projector(ket(2, 0)), i2, i2), kron3(projector(ket(2, 1)), i2, block));
    psi = mul(cnot, mul(cu, mul(cnot, psi)));
    const double total = norm2(psi);

    BranchDistribution dist;
    for (std::size_t c = 0; c < 2; ++c) {
        Dense branch = mul(kron3(i2, i2, projector(ket(2, c))), psi);
        double p = norm2(branch) / total;
        if (p < kFloor) {
            continue;
        }
        if (c == 1) {
            // Bob keeps whatever B holds: <goal| rho_B |goal>.
            double f = 0;
            for (std::size_t a = 0; a < 2; ++a) {
                Dense bob = mul(kron3(bra(2, a), i2, bra(2, c)), branch);
                f += std::norm(inner(goal, bob));
            }
            dist.branches.push_back({{1}, p, f / norm2(branch), true});
            continue;
        }
        std::vector<BranchEntry> sub = naive_nguyen(scale(branch, 1 / std::sqrt(norm2(branch))), target);
        double worst = 1;
        for (const BranchEntry &e : sub) {
            worst = std::min(worst, e.fidelity);
        }
        dist.branches.push_back({{0}, p, worst, false});
    }
    return dist;
}

bool same_outcome_space(const BranchDistribution &x, const BranchDistribution &y) {
    if (x.provenance.protocol != y.provenance.protocol) {
        return false;
    }
    std::size_t arity = 0;
    for (const auto *dist : {&x, &y}) {
        for (const BranchEntry &b : dist->branches) {
            if (arity == 0) {
                arity = b.outcome.size();
            } else if (b.outcome.size() != arity) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

double BranchDistribution::total() const {
    double s = 0;
    for (const BranchEntry &b : branches) {
        s += b.probability;
    }
    return s;
}

BranchDistribution enumerate_naive(Protocol protocol, const ChannelSpec &channel, const TargetState &target,
                                   Mode mode) {
    if (channel.d() > 8 || target.d() > 8) {
        fail(ErrorKind::capacity_exceeded, "naive enumeration supports d <= 8");
    }
    BranchDistribution dist;
    switch (protocol) {
        case Protocol::deterministic:
            dist = naive_deterministic(channel, target, mode);
            break;
        case Protocol::probabilistic:
            dist = naive_probabilistic(channel, target);
            mode = Mode::repaired;
            break;
        case Protocol::nguyen: {
            if (target.d() != 2) {
                fail(ErrorKind::invalid_state, "Nguyen protocol is qubit-only");
            }
            const double s = 1 / std::numbers::sqrt2;
            Dense start = add(scale(kron3(ket(2, 0), ket(2, 0), ket(2, 0)), s),
                              scale(kron3(ket(2, 1), ket(2, 1), ket(2, 0)), s));
            dist.branches = naive_nguyen(start, target);
            mode = Mode::repaired;
            break;
        }
    }
    dist.provenance = {protocol, mode, protocol == Protocol::nguyen ? ChannelSpec::maximal(2) : channel, target};
    return dist;
}

BranchDistribution to_distribution(const OutcomeTable &table, const Provenance &provenance) {
    BranchDistribution dist;
    dist.provenance = provenance;
    for (const OutcomeRow &row : table.rows) {
        dist.branches.push_back({row.outcome, row.probability, row.fidelity, row.abandoned});
    }
    return dist;
}

ComparisonReport compare_exact(const BranchDistribution &fast, const BranchDistribution &naive, double tol) {
    if (!same_outcome_space(fast, naive)) {
        fail(ErrorKind::mismatched_outcome_space, "distributions describe different outcome spaces");
    }
    std::map<std::vector<int>, std::pair<const BranchEntry *, const BranchEntry *>> joined;
    for (const BranchEntry &b : fast.branches) {
        joined[b.outcome].first = &b;
    }
    for (const BranchEntry &b : naive.branches) {
        joined[b.outcome].second = &b;
    }
    ComparisonReport report;
    report.threshold = tol;
    for (const auto &[outcome, pair] : joined) {
        OutcomeComparison row;
        row.outcome = outcome;
        row.observed = pair.first ? pair.first->probability : 0.0;
        row.expected = pair.second ? pair.second->probability : 0.0;
        row.statistic = std::abs(row.observed - row.expected);
        if (pair.first && pair.second) {
            row.statistic = std::max(row.statistic, std::abs(pair.first->fidelity - pair.second->fidelity));
        }
        report.max_statistic = std::max(report.max_statistic, row.statistic);
        report.rows.push_back(std::move(row));
    }
    report.pass = report.max_statistic <= tol;
    return report;
}

ComparisonReport compare_sampled(const BranchDistribution &dist, std::int64_t trials, std::uint64_t seed,
                                 double z_threshold) {
    if (trials < 100) {
        fail(ErrorKind::invalid_state, "compare_sampled needs at least 100 trials");
    }
    const Provenance &prov = dist.provenance;
    std::map<std::vector<int>, std::int64_t> counts;
    const ProtocolSampler sampler(prov.protocol, prov.channel, prov.target, prov.mode);
    for (std::int64_t i = 0; i < trials; ++i) {
        SeededRng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
        ++counts[sampler.run(rng).outcome];
    }
    std::map<std::vector<int>, double> expected;
    for (const BranchEntry &b : dist.branches) {
        expected[b.outcome] += b.probability;
    }
    for (const auto &[outcome, n] : counts) {
        expected.try_emplace(outcome, 0.0);
    }

    ComparisonReport report;
    report.threshold = z_threshold;
    const double inf = std::numeric_limits<double>::infinity();
    for (const auto &[outcome, p] : expected) {
        OutcomeComparison row;
        row.outcome = outcome;
        row.expected = p;
        row.trials = trials;
        auto it = counts.find(outcome);
        row.count = it == counts.end() ? 0 : it->second;
        row.observed = double(row.count) / double(trials);
        const double n = double(trials);
        if (p < kFloor) {
            row.statistic = row.count == 0 ? 0.0 : inf;
        } else if (1 - p < kFloor) {
            row.statistic = row.count == trials ? 0.0 : inf;
        } else {
            row.statistic = std::abs((double(row.count) - n * p) / std::sqrt(n * p * (1 - p)));
        }
        report.max_statistic = std::max(report.max_statistic, row.statistic);
        report.rows.push_back(std::move(row));
    }
    report.pass = report.max_statistic <= z_threshold;
    return report;
}

}  // namespace qrsp
