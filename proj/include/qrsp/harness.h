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

#ifndef QRSP_HARNESS_H
#define QRSP_HARNESS_H

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qrsp/gates.h"
#include "qrsp/protocols.h"

namespace qrsp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitFailure = 2;

/// Invalid command line or config file. `field` names the offending option.
class ConfigError : public std::runtime_error {
   public:
    ConfigError(std::string field, const std::string &message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {
    }
    const std::string &field() const noexcept {
        return field_;
    }

   private:
    std::string field_;
};

struct RunConfig {
    std::string command;
    std::vector<Protocol> protocols{Protocol::deterministic};
    Mode mode = Mode::repaired;
    int d = 0;
    std::vector<Complex> lambdas;
    std::vector<Complex> target;
    std::int64_t trials = 1000;
    int shots = 100000;
    std::uint64_t seed = 1;
    double theta_min = 0;
    double theta_max = 0.78539816339744830962;
    int points = 21;
    std::string out;
    double tolerance = 1e-9;
    std::string suite = "all";
    /// 0 picks std::thread::hardware_concurrency().
    int threads = 0;
};

/// Lists whose norm is within this of 1 are accepted and renormalized.
inline constexpr double kInputNormTol = 1e-4;

/// Colon-separated entries, each "re" or "re,im". Throws ConfigError naming `field`.
std::vector<Complex> parse_complex_list(std::string_view text, const std::string &field);

/// Flat `key = value` lines; `#` starts a comment. Keys are flag names without dashes.
std::map<std::string, std::string> parse_config_file(std::string_view text);

/// argv-style arguments without the program name. Config-file values are read
/// first and flags override them. Throws ConfigError.
RunConfig parse_config(const std::vector<std::string> &args);

struct SweepRow {
    double theta = 0;
    double alpha = 0;
    double beta = 0;
    Protocol protocol = Protocol::deterministic;
    Mode mode = Mode::repaired;
    int d = 2;
    std::int64_t trials = 0;
    std::int64_t successes = 0;
    double est_prob = 0;
    double exact_prob = 0;
    double mean_fidelity = 0;
    std::uint64_t seed = 0;
};

inline constexpr std::string_view kSweepHeader =
    "theta,alpha,beta,protocol,mode,d,trials,successes,est_prob,exact_prob,mean_fidelity,seed";

/// One row per (protocol, grid point), sorted by (protocol name, theta).
std::vector<SweepRow> sweep_rows(const RunConfig &config);
std::string sweep_csv(const std::vector<SweepRow> &rows);

/// Hooks for injecting faults into the verification suite.
struct VerifyHooks {
    std::function<GateMatrix(int, const ShiftTable &)> controlled_shift = [](int d, const ShiftTable &t) {
        return qrsp::controlled_shift(d, t);
    };
};

int cmd_run(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_sweep(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_verify(const RunConfig &config, std::ostream &out, const VerifyHooks &hooks = {});
int cmd_tomo(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Full CLI: parse, dispatch, map errors onto exit codes 0/1/2.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace qrsp

#endif
