/*
   Copyright 2026 The etcsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "etcsim/model.hpp"
#include "etcsim/policies.hpp"
#include "etcsim/rng.hpp"

namespace etcsim {

enum class PolicyKind { event, event_vector, periodic, always, nominal };

struct PolicySpec {
    PolicyKind kind = PolicyKind::event;
    int T = 1;                 // periodic
    std::int64_t anchor = 0;   // nominal
    std::optional<int> D;      // overrides PerformanceSpec::D for the policy
};

enum class NoiseKind { gaussian, uniform, zero };

using System = std::variant<ScalarSystem, VectorSystem>;

struct RunConfig {
    System system;
    PerformanceSpec spec;
    Channel channel;
    PolicySpec policy;
    int horizon = 300;
    int n_runs = 1000;
    std::uint64_t seed = 1;
    std::vector<double> x0;
    NoiseKind noise = NoiseKind::gaussian;

    bool is_vector() const { return std::holds_alternative<VectorSystem>(system); }
    GainConstants gains() const;
    int policy_D() const { return policy.D.value_or(spec.D); }
    double x0_sq() const;
};

const char* to_string(PolicyKind kind);
const char* to_string(NoiseKind kind);

/// Throws std::invalid_argument when the configuration cannot be simulated
/// (shape mismatch, policy/system mismatch, failed standing assumptions for
/// the event-triggered policies).
void check_run_config(const RunConfig& cfg);

std::unique_ptr<TransmissionPolicy> make_policy(const RunConfig& cfg);

/// r = 0 when nothing is sent; otherwise r = 1 iff u < p, u ~ U[0, 1).
bool sample_reception(bool transmit, const Channel& ch, double u);

/// Full trace of one run; deterministic in (cfg.seed, run_index).
std::vector<TraceRecord> run_trajectory(const RunConfig& cfg, std::uint64_t run_index);

/// Per-step ensemble averages over cfg.n_runs trajectories.
struct EnsembleStats {
    int horizon = 0;
    int n_runs = 0;
    std::vector<double> mean_x2;  // E|x_k|^2
    std::vector<double> bound;    // max{c^{2k} |x_0|^2, B}
    std::vector<double> frac;     // running transmission fraction F_0^k
    std::vector<double> mean_h;
    std::vector<std::int64_t> tx_cumulative;  // sum over runs of #{1 <= i <= k : t_i = 1}
    std::int64_t transmissions = 0;           // over k >= 1, all runs
    std::int64_t receptions = 0;
};

/// OpenMP ensemble. Runs are grouped in fixed-size blocks reduced in block
/// order, so results do not depend on the thread count. threads <= 0 uses
/// ensemble_threads().
EnsembleStats run_ensemble(const RunConfig& cfg, int threads = 0);

/// Plain loop over runs; the reference for run_ensemble.
EnsembleStats run_ensemble_serial(const RunConfig& cfg);

/// ETCSIM_THREADS when set to a positive integer, otherwise all cores.
int ensemble_threads();

struct ObjectiveResult {
    bool pass = true;
    std::int64_t worst_k = 0;
    double worst_ratio = 0.0;  // max_k mean_x2 / bound
};

/// Passes iff mean_x2[k] <= (1 + slack) max{c^{2k} x0_sq, B} for every k.
ObjectiveResult objective_check(const EnsembleStats& stats, const PerformanceSpec& spec,
                                double x0_sq, double slack);

/// Mean of the running fraction over the last `share` of the horizon.
double tail_fraction(const EnsembleStats& stats, double share = 0.25);

}  // namespace etcsim
