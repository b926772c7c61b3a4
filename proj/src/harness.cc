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

#include "qrsp/harness.h"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qrsp/errors.h"
#include "qrsp/oracle.h"
#include "qrsp/random_states.h"
#include "qrsp/tomography.h"

namespace qrsp {

namespace {

class HelpRequested : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

const std::vector<std::string> kFlags{"protocol", "mode",   "d",     "lambda", "target", "theta-min", "theta-max",
                                      "points",   "trials", "shots", "seed",   "out",    "tolerance", "threads"};

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return "";
    }
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

double to_double(const std::string &field, const std::string &text) {
    errno = 0;
    char *end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError(field, "'" + text + "' is not a finite number");
    }
    return v;
}

std::int64_t to_int(const std::string &field, const std::string &text) {
    errno = 0;
    char *end = nullptr;
    long long v = std::strtoll(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw ConfigError(field, "'" + text + "' is not an integer");
    }
    return v;
}

std::uint64_t to_uint(const std::string &field, const std::string &text) {
    errno = 0;
    char *end = nullptr;
    if (!text.empty() && text[0] == '-') {
        throw ConfigError(field, "must be non-negative");
    }
    unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw ConfigError(field, "'" + text + "' is not an unsigned integer");
    }
    return v;
}

std::vector<Complex> normalized_list(const std::string &field, const std::string &text) {
    std::vector<Complex> v = parse_complex_list(text, field);
    double n = 0;
    for (const Complex &z : v) {
        n += std::norm(z);
    }
    n = std::sqrt(n);
    if (std::abs(n - 1) > kInputNormTol) {
        throw ConfigError(field, "list norm is " + std::to_string(n) + ", expected 1");
    }
    for (Complex &z : v) {
        z /= n;
    }
    return v;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", "cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig build_config(const std::string &command, const std::map<std::string, std::string> &values) {
    RunConfig cfg;
    cfg.command = command;
    auto get = [&values](const std::string &key) -> std::optional<std::string> {
        auto it = values.find(key);
        if (it == values.end()) {
            return std::nullopt;
        }
        return it->second;
    };

    if (auto v = get("protocol")) {
        cfg.protocols.clear();
        for (const std::string &name : split(*v, ',')) {
            try {
                Protocol p = parse_protocol(name);
                if (std::find(cfg.protocols.begin(), cfg.protocols.end(), p) == cfg.protocols.end()) {
                    cfg.protocols.push_back(p);
                }
            } catch (const QrspError &) {
                throw ConfigError("protocol", "unknown protocol '" + name + "'");
            }
        }
    }
    if (auto v = get("mode")) {
        try {
            cfg.mode = parse_mode(*v);
        } catch (const QrspError &) {
            throw ConfigError("mode", "expected repaired or literal, got '" + *v + "'");
        }
    }
    if (auto v = get("d")) {
        std::int64_t d = to_int("d", *v);
        if (d < 2 || d > 64) {
            throw ConfigError("d", "dimension must be between 2 and 64");
        }
        cfg.d = static_cast<int>(d);
    }
    if (auto v = get("lambda")) {
        cfg.lambdas = normalized_list("lambda", *v);
    }
    if (auto v = get("target")) {
        cfg.target = normalized_list("target", *v);
    }
    if (auto v = get("trials")) {
        cfg.trials = to_int("trials", *v);
        if (cfg.trials < 1) {
            throw ConfigError("trials", "must be at least 1");
        }
    }
    if (auto v = get("shots")) {
        std::int64_t s = to_int("shots", *v);
        if (s < 3 || s > 1'000'000'000) {
            throw ConfigError("shots", "must be between 3 and 1e9");
        }
        cfg.shots = static_cast<int>(s);
    }
    if (auto v = get("seed")) {
        cfg.seed = to_uint("seed", *v);
    }
    if (auto v = get("theta-min")) {
        cfg.theta_min = to_double("theta-min", *v);
    }
    if (auto v = get("theta-max")) {
        cfg.theta_max = to_double("theta-max", *v);
    }
    if (auto v = get("points")) {
        std::int64_t p = to_int("points", *v);
        if (p < 1 || p > 100000) {
            throw ConfigError("points", "must be between 1 and 100000");
        }
        cfg.points = static_cast<int>(p);
    }
    if (auto v = get("out")) {
        cfg.out = *v;
    }
    if (auto v = get("tolerance")) {
        cfg.tolerance = to_double("tolerance", *v);
        if (cfg.tolerance <= 0 || cfg.tolerance >= 1) {
            throw ConfigError("tolerance", "must lie in (0, 1)");
        }
    }
    if (auto v = get("threads")) {
        std::int64_t t = to_int("threads", *v);
        if (t < 0 || t > 1024) {
            throw ConfigError("threads", "must be between 0 and 1024");
        }
        cfg.threads = static_cast<int>(t);
    }
    if (auto v = get("suite")) {
        cfg.suite = *v;
    }

    // Cross-field consistency.
    if (cfg.theta_min > cfg.theta_max) {
        throw ConfigError("theta-min", "must not exceed theta-max");
    }
    if (cfg.d == 0) {
        if (!cfg.lambdas.empty()) {
            cfg.d = static_cast<int>(cfg.lambdas.size());
        } else if (!cfg.target.empty()) {
            cfg.d = static_cast<int>(cfg.target.size());
        }
    }
    if (!cfg.lambdas.empty() && static_cast<int>(cfg.lambdas.size()) != cfg.d) {
        throw ConfigError("lambda", "has " + std::to_string(cfg.lambdas.size()) + " entries but d = " +
                                        std::to_string(cfg.d));
    }
    if (!cfg.target.empty() && static_cast<int>(cfg.target.size()) != cfg.d) {
        throw ConfigError("target", "has " + std::to_string(cfg.target.size()) + " entries but d = " +
                                        std::to_string(cfg.d));
    }
    auto uses = [&cfg](Protocol p) {
        return std::find(cfg.protocols.begin(), cfg.protocols.end(), p) != cfg.protocols.end();
    };
    if ((uses(Protocol::probabilistic) || uses(Protocol::nguyen)) && cfg.d != 0 && cfg.d != 2) {
        throw ConfigError("d", "the probabilistic and nguyen protocols are qubit-only (d = 2)");
    }
    if (cfg.mode == Mode::literal && cfg.d != 0 && cfg.d != 2) {
        throw ConfigError("mode", "literal mode requires d = 2");
    }

    if (command == "run") {
        if (cfg.protocols.size() != 1) {
            throw ConfigError("protocol", "run takes exactly one protocol");
        }
        if (cfg.target.empty()) {
            throw ConfigError("target", "required for run");
        }
        if (cfg.lambdas.empty() && cfg.protocols[0] != Protocol::nguyen) {
            throw ConfigError("lambda", "required for run");
        }
    } else if (command == "sweep") {
        if (uses(Protocol::nguyen)) {
            throw ConfigError("protocol", "sweep supports deterministic and probabilistic");
        }
        if (cfg.d != 0 && cfg.d != 2) {
            throw ConfigError("d", "sweeps use the qubit channel (sin theta, cos theta)");
        }
        cfg.d = 2;
        if (cfg.target.empty()) {
            cfg.target = {Complex(0.6, 0), Complex(0, 0.8)};
        }
        std::sort(cfg.protocols.begin(), cfg.protocols.end(),
                  [](Protocol a, Protocol b) { return to_string(a) < to_string(b); });
    } else if (command == "tomo") {
        if (cfg.d != 2) {
            throw ConfigError("d", "tomography is qubit-only (d = 2)");
        }
        if (cfg.target.empty()) {
            throw ConfigError("target", "required for tomo");
        }
        if (cfg.lambdas.empty()) {
            throw ConfigError("lambda", "required for tomo");
        }
    } else if (command == "verify") {
        static const std::vector<std::string> suites{"all", "gates", "protocols", "oracle", "tomo"};
        if (std::find(suites.begin(), suites.end(), cfg.suite) == suites.end()) {
            throw ConfigError("suite", "expected one of all, gates, protocols, oracle, tomo");
        }
    }
    return cfg;
}

int worker_count(const RunConfig &cfg, std::size_t jobs) {
    unsigned n = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
    n = std::max(1u, n);
    return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Runs job(i) for i in [0, n) on a small pool. Results must be written to
/// per-index slots so ordering is scheduler independent.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)> &job) {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (std::thread &t : pool) {
            t.join();
        }
    }
    for (const std::exception_ptr &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

bool is_input_error(ErrorKind k) {
    return k == ErrorKind::invalid_state || k == ErrorKind::unsupported || k == ErrorKind::shape_error ||
           k == ErrorKind::index_out_of_range || k == ErrorKind::capacity_exceeded;
}

// ---- verification suites ----------------------------------------------------

struct Check {
    std::string name;
    bool pass;
    std::string measured;
};

class Checks {
   public:
    void add(std::string name, bool pass, std::string measured) {
        items_.push_back({std::move(name), pass, std::move(measured)});
    }
    void at_most(std::string name, double value, double bound) {
        add(std::move(name), value <= bound, "max=" + fmt(value) + " bound=" + fmt(bound));
    }
    void at_least(std::string name, double value, double bound) {
        add(std::move(name), value >= bound, "min=" + fmt(value) + " bound=" + fmt(bound));
    }
    const std::vector<Check> &items() const {
        return items_;
    }

   private:
    std::vector<Check> items_;
};

double max_abs(const CMat &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void gates_suite(Checks &checks, const VerifyHooks &hooks, std::uint64_t seed) {
    SeededRng rng(derive_seed(seed, {1}));
    double worst = 0;
    for (int d : {2, 3, 5}) {
        CMat x = CMat::Identity(d, d), z = CMat::Identity(d, d);
        for (int k = 0; k < d; ++k) {
            x = pauli_x(d).matrix * x;
            z = pauli_z(d).matrix * z;
        }
        worst = std::max({worst, max_abs(x - CMat::Identity(d, d)), max_abs(z - CMat::Identity(d, d))});
    }
    checks.at_most("gates/pauli_order", worst, 1e-12);

    int violations = 0;
    for (int d = 2; d <= 8; ++d) {
        for (const ShiftTable &t : {ShiftTable::add(d), ShiftTable::subtract(d)}) {
            CMat m = hooks.controlled_shift(d, t).matrix;
            for (int i = 0; i < m.rows(); ++i) {
                int row_ones = 0, col_ones = 0;
                for (int j = 0; j < m.cols(); ++j) {
                    for (Complex v : {m(i, j), m(j, i)}) {
                        if (v != Complex(0, 0) && v != Complex(1, 0)) {
                            ++violations;
                        }
                    }
                    row_ones += m(i, j) == Complex(1, 0);
                    col_ones += m(j, i) == Complex(1, 0);
                }
                violations += (row_ones != 1) + (col_ones != 1);
            }
        }
    }
    checks.add("gates/controlled_shift_is_permutation", violations == 0, "violations=" + std::to_string(violations));

    worst = 0;
    for (int d = 2; d <= 8; ++d) {
        CMat prod = hooks.controlled_shift(d, ShiftTable::subtract(d)).matrix *
                    hooks.controlled_shift(d, ShiftTable::add(d)).matrix;
        worst = std::max(worst, max_abs(prod - CMat::Identity(d * d, d * d)));
    }
    checks.at_most("gates/csub_inverts_cadd", worst, 1e-12);

    worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
        int d = 2 + trial % 7;
        double angle = rng.uniform() * std::numbers::pi / 4;
        TargetState target = random_target(d, rng);
        GateMatrix u = encoding_unitary(target);
        NguyenBases nb = nguyen_bases(std::cos(angle), std::sin(angle), 2 * std::numbers::pi * rng.uniform());
        for (double defect : {pauli_x(d).defect, pauli_z(d).defect, controlled_shift(d, ShiftTable::add(d)).defect,
                              cu_concentration(std::sin(angle), std::cos(angle)).defect, u.defect,
                              negation_shift(d, trial % d).defect, correction_unitary(u, trial % d).defect,
                              unitarity_defect(nb.mu), unitarity_defect(nb.nu), nb.phase.defect}) {
            worst = std::max(worst, defect);
        }
    }
    checks.at_most("gates/constructors_unitary", worst, 1e-10);

    worst = 0;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            double x0 = i / 9.0;
            double x1 = std::sqrt(std::max(0.0, 1 - x0 * x0));
            double theta = 2 * std::numbers::pi * j / 9.0;
            double closed = 2 * std::numbers::sqrt2 * x0 * x1 * std::abs(std::sin(theta));
            worst = std::max(worst, std::abs(encoding_unitary_literal(x0, x1, theta).defect - closed));
        }
    }
    checks.at_most("gates/literal_defect_closed_form", worst, 1e-10);

    worst = 0;
    for (int d = 2; d <= 8; ++d) {
        GateMatrix u = make_gate("U", {d}, random_unitary(d, rng));
        for (int m = 0; m < d; ++m) {
            CVec fixed = correction_unitary(u, m).matrix * branch_state(u.matrix, m);
            worst = std::max(worst, (fixed - u.matrix.col(0)).cwiseAbs().maxCoeff());
        }
    }
    checks.at_most("gates/correction_maps_branch_to_encoded_state", worst, 1e-11);

    worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
        double theta = (0.02 + 0.96 * rng.uniform()) * std::numbers::pi / 4;
        double a = std::sin(theta), b = std::cos(theta);
        StateRegister reg = tensor_product(channel_register(ChannelSpec({a, b})), basis_register({2}, {0}, {"C"}));
        reg = apply_gate(reg, controlled_shift(2, ShiftTable::add(2)), {"A", "C"});
        reg = apply_gate(reg, cu_concentration(a, b), {"A", "C"});
        CVec expect = CVec::Zero(8);
        expect(0) = a;
        expect(7) = a;
        expect(6) = std::sqrt((b - a) * (b + a));
        worst = std::max(worst, (reg.amplitudes() - expect).cwiseAbs().maxCoeff());
    }
    checks.at_most("gates/concentration_amplitudes", worst, 1e-12);
}

void protocols_suite(Checks &checks, std::uint64_t seed, double tol) {
    SeededRng rng(derive_seed(seed, {2}));
    double worst_prob = 0;
    double worst_fid = 0;
    for (int d = 2; d <= 8; ++d) {
        for (int i = 0; i < 10; ++i) {
            OutcomeTable table =
                exact_outcome_table(Protocol::deterministic, random_channel(d, rng), random_target(d, rng),
                                    Mode::repaired);
            worst_prob = std::max(worst_prob, std::abs(1 - success_probability(table, tol)));
            for (const OutcomeRow &row : table.rows) {
                worst_fid = std::max(worst_fid, 1 - row.fidelity);
            }
        }
    }
    checks.at_most("protocols/deterministic_success_is_one", worst_prob, 1e-12);
    checks.at_most("protocols/deterministic_branch_fidelity_deficit", worst_fid, 1e-10);

    double worst = 0;
    TargetState target({Complex(0.6, 0), Complex(0, 0.8)});
    for (int i = 0; i <= 20; ++i) {
        double theta = std::numbers::pi / 4 * i / 20;
        OutcomeTable table =
            exact_outcome_table(Protocol::probabilistic, ChannelSpec::from_theta(theta), target, Mode::repaired);
        worst = std::max(worst, std::abs(success_probability(table, tol) - 2 * std::pow(std::sin(theta), 2)));
    }
    checks.at_most("protocols/probabilistic_success_is_2sin2", worst, 1e-12);

    worst = 0;
    double min_fid = 1;
    for (int i = 0; i < 20; ++i) {
        OutcomeTable table =
            exact_outcome_table(Protocol::nguyen, ChannelSpec::maximal(2), random_target(2, rng), Mode::repaired);
        worst = std::max(worst, table.rows.size() == 4 ? 0.0 : 1.0);
        for (const OutcomeRow &row : table.rows) {
            worst = std::max(worst, std::abs(row.probability - 0.25));
            min_fid = std::min(min_fid, row.fidelity);
        }
    }
    checks.at_most("protocols/nguyen_quarter_branches", worst, 1e-12);
    checks.at_least("protocols/nguyen_branch_fidelity", min_fid, 1 - 1e-10);

    worst = 0;
    for (int i = 0; i < 20; ++i) {
        double phi = 2 * std::numbers::pi * rng.uniform();
        double chi = (0.05 + 0.9 * rng.uniform()) * std::numbers::pi / 2;
        ChannelSpec channel({std::sin(chi), std::cos(chi)});
        TargetState real_target({std::cos(phi), std::sin(phi)});
        OutcomeTable lit = exact_outcome_table(Protocol::deterministic, channel, real_target, Mode::literal);
        OutcomeTable rep = exact_outcome_table(Protocol::deterministic, channel, real_target, Mode::repaired);
        if (lit.rows.size() != rep.rows.size()) {
            worst = 1;
            continue;
        }
        for (std::size_t r = 0; r < lit.rows.size(); ++r) {
            worst = std::max({worst, std::abs(lit.rows[r].probability - rep.rows[r].probability),
                              std::abs(lit.rows[r].fidelity - rep.rows[r].fidelity),
                              lit.rows[r].outcome == rep.rows[r].outcome ? 0.0 : 1.0});
        }
    }
    checks.at_most("protocols/literal_equals_repaired_for_real_targets", worst, 1e-12);

    int bad = 0;
    for (int i = 0; i < 50; ++i) {
        Protocol p = static_cast<Protocol>(i % 3);
        SeededRng run_rng(derive_seed(seed, {2, static_cast<std::uint64_t>(i)}));
        Transcript t = run_protocol(p, ChannelSpec::from_theta(0.3), random_target(2, rng), Mode::repaired, run_rng);
        std::vector<int> sent;
        for (const ClassicalMessage &m : t.messages) {
            sent.insert(sent.end(), m.outcome.begin(), m.outcome.end());
        }
        std::vector<int> measured;
        for (const MeasurementRecord &m : t.measurements) {
            measured.insert(measured.end(), m.outcome.begin(), m.outcome.end());
        }
        bad += sent != measured;
    }
    checks.add("protocols/messages_carry_only_outcomes", bad == 0, "mismatches=" + std::to_string(bad));
}

void oracle_suite(Checks &checks, std::uint64_t seed) {
    SeededRng rng(derive_seed(seed, {3}));
    struct Case {
        Protocol protocol;
        Mode mode;
        int d;
    };
    const std::vector<Case> cases{{Protocol::deterministic, Mode::repaired, 2}, {Protocol::deterministic, Mode::repaired, 3},
                                  {Protocol::deterministic, Mode::repaired, 4}, {Protocol::deterministic, Mode::literal, 2},
                                  {Protocol::probabilistic, Mode::repaired, 2}, {Protocol::nguyen, Mode::repaired, 2}};
    for (const Case &c : cases) {
        double worst = 0;
        for (int i = 0; i < 30; ++i) {
            ChannelSpec channel = random_channel(c.d, rng);
            if (c.protocol == Protocol::probabilistic || c.mode == Mode::literal) {
                double theta = (0.02 + 0.98 * rng.uniform()) * std::numbers::pi / 4;
                channel = ChannelSpec::from_theta(theta);
            }
            TargetState target = random_target(c.d, rng);
            Provenance prov{c.protocol, c.mode, channel, target};
            BranchDistribution fast =
                to_distribution(exact_outcome_table(c.protocol, channel, target, c.mode), prov);
            BranchDistribution naive = enumerate_naive(c.protocol, channel, target, c.mode);
            worst = std::max(worst, compare_exact(fast, naive).max_statistic);
        }
        checks.at_most("oracle/exact_vs_naive_" + std::string(to_string(c.protocol)) + "_" +
                           std::string(to_string(c.mode)) + "_d" + std::to_string(c.d),
                       worst, 1e-10);
    }

    TargetState target({Complex(0.6, 0), Complex(0, 0.8)});
    const std::vector<std::pair<Protocol, ChannelSpec>> sampled{
        {Protocol::deterministic, ChannelSpec({0.6, 0.8})},
        {Protocol::probabilistic, ChannelSpec({0.6, 0.8})},
        {Protocol::nguyen, ChannelSpec::maximal(2)}};
    for (std::size_t i = 0; i < sampled.size(); ++i) {
        const auto &[protocol, channel] = sampled[i];
        BranchDistribution dist = enumerate_naive(protocol, channel, target, Mode::repaired);
        ComparisonReport report = compare_sampled(dist, 10000, derive_seed(seed, {3, i}));
        checks.add("oracle/sampled_" + std::string(to_string(protocol)) + "_4sigma", report.pass,
                   "max|z|=" + fmt(report.max_statistic) + " bound=4");
    }
}

void tomo_suite(Checks &checks, std::uint64_t seed) {
    SeededRng rng(derive_seed(seed, {4}));
    int unphysical = 0;
    for (int i = 0; i < 1000; ++i) {
        PauliEstimates e;
        e.rx = 3 * rng.uniform() - 1.5;
        e.ry = 3 * rng.uniform() - 1.5;
        e.rz = 3 * rng.uniform() - 1.5;
        unphysical += !is_physical(reconstruct_qubit(e));
    }
    checks.add("tomo/reconstruction_physical", unphysical == 0, "unphysical=" + std::to_string(unphysical) + "/1000");

    int within = 0;
    const int runs = 20;
    for (int i = 0; i < runs; ++i) {
        CVec state = random_unit_vector(2, rng);
        SeededRng shot_rng(derive_seed(seed, {4, static_cast<std::uint64_t>(i)}));
        TomoResult r = tomograph(state, state, 100000, shot_rng);
        within += r.trace_distance_to_target <= 0.02;
    }
    checks.at_least("tomo/trace_distance_within_0.02_fraction", double(within) / runs, 0.95);
}

}  // namespace

std::vector<Complex> parse_complex_list(std::string_view text, const std::string &field) {
    if (trim(text).empty()) {
        throw ConfigError(field, "empty list");
    }
    std::vector<Complex> out;
    for (const std::string &entry : split(text, ':')) {
        std::vector<std::string> parts = split(entry, ',');
        if (parts.size() > 2 || parts[0].empty()) {
            throw ConfigError(field, "entry '" + entry + "' must be 're' or 're,im'");
        }
        double re = to_double(field, parts[0]);
        double im = parts.size() == 2 ? to_double(field, parts[1]) : 0.0;
        out.emplace_back(re, im);
    }
    return out;
}

std::map<std::string, std::string> parse_config_file(std::string_view text) {
    std::map<std::string, std::string> out;
    int line_no = 0;
    for (const std::string &raw : split(text, '\n')) {
        ++line_no;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) {
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config", "line " + std::to_string(line_no) + " is not 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) {
            key = key.substr(2);
        }
        if (key != "suite" && std::find(kFlags.begin(), kFlags.end(), key) == kFlags.end()) {
            throw ConfigError("config", "unknown key '" + key + "' on line " + std::to_string(line_no));
        }
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

RunConfig parse_config(const std::vector<std::string> &args) {
    CLI::App app{"Remote state preparation simulator", "qrsp"};
    app.require_subcommand(1, 1);
    std::map<std::string, std::string> flag_values;
    std::string config_path;
    std::string suite;
    std::vector<std::pair<std::string, CLI::Option *>> options;

    auto add_common = [&](CLI::App *sub) {
        for (const std::string &name : kFlags) {
            options.emplace_back(name, sub->add_option("--" + name, flag_values[name]));
        }
        sub->add_option("--config", config_path, "flat key = value file; flags override it");
    };
    CLI::App *run = app.add_subcommand("run", "run one protocol instance and print its transcript");
    CLI::App *sweep = app.add_subcommand("sweep", "sweep theta and write CSV");
    CLI::App *verify = app.add_subcommand("verify", "run the invariant and oracle suites");
    CLI::App *tomo = app.add_subcommand("tomo", "tomograph Bob's state after deterministic RSP");
    for (CLI::App *sub : {run, sweep, verify, tomo}) {
        add_common(sub);
    }
    verify->add_option("suite", suite, "all | gates | protocols | oracle | tomo");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError &e) {
        throw ConfigError("command line", e.what());
    }

    std::map<std::string, std::string> values;
    if (!config_path.empty()) {
        values = parse_config_file(read_file(config_path));
    }
    for (const auto &[name, opt] : options) {
        if (opt->count() > 0) {
            values[name] = flag_values[name];
        }
    }
    if (!suite.empty()) {
        values["suite"] = suite;
    }
    std::string command = app.get_subcommands().front()->get_name();
    return build_config(command, values);
}

std::vector<SweepRow> sweep_rows(const RunConfig &cfg) {
    const TargetState target(cfg.target);
    const ProtocolOptions options{cfg.tolerance};
    struct Job {
        Protocol protocol;
        int point;
    };
    std::vector<Job> jobs;
    for (Protocol p : cfg.protocols) {
        for (int i = 0; i < cfg.points; ++i) {
            jobs.push_back({p, i});
        }
    }
    std::vector<SweepRow> rows(jobs.size());
    parallel_for(jobs.size(), worker_count(cfg, jobs.size()), [&](std::size_t j) {
        const Job &job = jobs[j];
        double theta =
            cfg.points == 1 ? cfg.theta_min
                            : cfg.theta_min + (cfg.theta_max - cfg.theta_min) * job.point / (cfg.points - 1);
        ChannelSpec channel = ChannelSpec::from_theta(theta);
        Mode mode = job.protocol == Protocol::deterministic ? cfg.mode : Mode::repaired;
        SweepRow row;
        row.theta = theta;
        row.alpha = channel.lambdas()[0].real();
        row.beta = channel.lambdas()[1].real();
        row.protocol = job.protocol;
        row.mode = mode;
        row.d = 2;
        row.trials = cfg.trials;
        row.seed = cfg.seed;
        row.exact_prob =
            success_probability(exact_outcome_table(job.protocol, channel, target, mode, options), cfg.tolerance);
        double fidelity_sum = 0;
        const ProtocolSampler sampler(job.protocol, channel, target, mode, options);
        for (std::int64_t t = 0; t < cfg.trials; ++t) {
            SeededRng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(job.point), static_cast<std::uint64_t>(t)}));
            const Transcript &tr = sampler.run(rng);
            row.successes += tr.success;
            fidelity_sum += tr.fidelity;
        }
        row.est_prob = double(row.successes) / double(cfg.trials);
        row.mean_fidelity = fidelity_sum / double(cfg.trials);
        rows[j] = row;
    });
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow &a, const SweepRow &b) {
        if (a.protocol != b.protocol) {
            return to_string(a.protocol) < to_string(b.protocol);
        }
        return a.theta < b.theta;
    });
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow> &rows) {
    std::string out(kSweepHeader);
    out += '\n';
    for (const SweepRow &r : rows) {
        out += fmt(r.theta) + ',' + fmt(r.alpha) + ',' + fmt(r.beta) + ',' + std::string(to_string(r.protocol)) + ',' +
               std::string(to_string(r.mode)) + ',' + std::to_string(r.d) + ',' + std::to_string(r.trials) + ',' +
               std::to_string(r.successes) + ',' + fmt(r.est_prob) + ',' + fmt(r.exact_prob) + ',' +
               fmt(r.mean_fidelity) + ',' + std::to_string(r.seed) + '\n';
    }
    return out;
}

int cmd_run(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    Protocol protocol = cfg.protocols.at(0);
    ChannelSpec channel = protocol == Protocol::nguyen ? ChannelSpec::maximal(2) : ChannelSpec(cfg.lambdas);
    TargetState target(cfg.target);
    SeededRng rng(cfg.seed);
    Transcript t = run_protocol(protocol, channel, target, cfg.mode, rng, ProtocolOptions{cfg.tolerance});
    out << format_transcript(t) << summary_line(t) << "\n";
    if (t.success || (protocol == Protocol::probabilistic && t.branch_failed)) {
        return kExitOk;
    }
    err << "invariant breach: fidelity " << fmt(t.fidelity) << " on a branch that must succeed\n";
    return kExitFailure;
}

int cmd_sweep(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    std::string csv = sweep_csv(sweep_rows(cfg));
    if (cfg.out.empty() || cfg.out == "-") {
        out << csv;
        return kExitOk;
    }
    std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
    if (!file) {
        err << "config error: out: cannot write '" << cfg.out << "'\n";
        return kExitConfig;
    }
    file << csv;
    file.close();
    if (!file) {
        err << "config error: out: write to '" << cfg.out << "' failed\n";
        return kExitConfig;
    }
    out << "wrote " << cfg.points * static_cast<int>(cfg.protocols.size()) << " rows to " << cfg.out << "\n";
    return kExitOk;
}

int cmd_verify(const RunConfig &cfg, std::ostream &out, const VerifyHooks &hooks) {
    Checks checks;
    const bool all = cfg.suite == "all";
    if (all || cfg.suite == "gates") {
        gates_suite(checks, hooks, cfg.seed);
    }
    if (all || cfg.suite == "protocols") {
        protocols_suite(checks, cfg.seed, cfg.tolerance);
    }
    if (all || cfg.suite == "oracle") {
        oracle_suite(checks, cfg.seed);
    }
    if (all || cfg.suite == "tomo") {
        tomo_suite(checks, cfg.seed);
    }
    int failed = 0;
    for (const Check &c : checks.items()) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.measured << "\n";
        failed += !c.pass;
    }
    out << "verify " << cfg.suite << ": " << checks.items().size() << " checks, " << failed << " failed\n";
    return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_tomo(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    ChannelSpec channel(cfg.lambdas);
    TargetState target(cfg.target);
    SeededRng rng(cfg.seed);
    Transcript t = run_deterministic_rsp(channel, target, Mode::repaired, rng, ProtocolOptions{cfg.tolerance});
    DensityMatrix exact = pure_density(t.bob_state);
    SeededRng shot_rng(derive_seed(cfg.seed, {1}));
    PauliEstimates est = sample_pauli_expectations(exact, cfg.shots, shot_rng);
    PauliEstimates truth = bloch_vector(exact);
    DensityMatrix rho = reconstruct_qubit(est);
    Eigen::SelfAdjointEigenSolver<CMat> solver(rho.rho, Eigen::EigenvaluesOnly);
    const bool physical = is_physical(rho);

    out << "rsp outcome: (" << t.outcome[0] << "," << t.outcome[1] << ")  exact fidelity " << fmt(t.fidelity) << "\n";
    out << "shots: " << cfg.shots << " (x " << est.shots_x << ", y " << est.shots_y << ", z " << est.shots_z << ")\n";
    out << "bloch estimate: " << fmt(est.rx) << " " << fmt(est.ry) << " " << fmt(est.rz) << "\n";
    out << "bloch exact:    " << fmt(truth.rx) << " " << fmt(truth.ry) << " " << fmt(truth.rz) << "\n";
    out << "eigenvalues: " << fmt(solver.eigenvalues()(0)) << " " << fmt(solver.eigenvalues()(1)) << "\n";
    out << "fidelity_mixed: " << fmt(fidelity_mixed(rho, target.vector().normalized())) << "\n";
    out << "trace_distance: " << fmt(trace_distance(rho, exact)) << "\n";
    out << "physical: " << (physical ? "true" : "false") << "\n";
    if (!physical) {
        err << "invariant breach: reconstructed state is not physical\n";
        return kExitFailure;
    }
    return kExitOk;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    RunConfig cfg;
    try {
        cfg = parse_config(args);
    } catch (const HelpRequested &h) {
        out << h.what();
        return kExitOk;
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        if (cfg.command == "run") {
            return cmd_run(cfg, out, err);
        }
        if (cfg.command == "sweep") {
            return cmd_sweep(cfg, out, err);
        }
        if (cfg.command == "verify") {
            return cmd_verify(cfg, out);
        }
        return cmd_tomo(cfg, out, err);
    } catch (const QrspError &e) {
        if (is_input_error(e.kind())) {
            err << "config error: " << e.what() << "\n";
            return kExitConfig;
        }
        err << "internal error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace qrsp
