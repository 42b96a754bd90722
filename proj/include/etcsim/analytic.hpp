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
#include <optional>
#include <stdexcept>

#include "etcsim/model.hpp"

namespace etcsim {

/// Raised when a geometric series b^s (1-p)^s that defines one of the
/// expectations does not converge, i.e. b (1-p) >= 1.
class DivergenceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Sensor-side information entering the look-ahead criterion.
struct LookaheadInputs {
    double x = 0.0;          // x_k
    double e = 0.0;          // e_k (or e_k^+)
    std::int64_t elapsed = 1;  // k - R_k
    double x_at_R_sq = 0.0;  // x_{R_k}^2
};

/// g_D(b) = b^D / (1 - b (1 - p)).
double geometric_factor(double b, double p, double D);

/// ceil(log(x_at_R_sq / B) / log(1/c^2)), snapping ratios within 1e-9 of an
/// integer to that integer. Returns 0 for x_at_R_sq == 0.
std::int64_t steps_to_bound(double x_at_R_sq, double B, double c);

/// q_k^D = max{0, steps_to_bound - elapsed - D}.
std::int64_t q_kD(double x_at_R_sq, double B, std::int64_t elapsed, int D, double c);

/// Closed-form look-ahead criterion G_k^D under the nominal policy.
double lookahead_G(const LookaheadInputs& in, const GainConstants& g, const PerformanceSpec& spec,
                   const Channel& ch, int D);
inline double lookahead_G(const LookaheadInputs& in, const GainConstants& g,
                          const PerformanceSpec& spec, const Channel& ch)
{
    return lookahead_G(in, g, spec, ch, spec.D);
}

/// Closed-form performance-evaluation function G^+ at a reception time with
/// squared state x_sq.
double perf_eval_Gplus(double x_sq, const GainConstants& g, const PerformanceSpec& spec,
                       const Channel& ch, int D);

/// H(s, y): expected h, s steps after a reception with squared state y and no
/// reception in between.
double open_loop_H(double s, double y, const GainConstants& g, const PerformanceSpec& spec);

/// State-uniform bound on G^+ at horizon `horizon` (negative certifies
/// feasibility). Defined for real horizon >= 0.
double script_G(double horizon, const GainConstants& g, const PerformanceSpec& spec,
                const Channel& ch);

/// Sufficient condition for a period-T time-triggered policy. Divergent
/// series (a^{2T}(1-p) >= 1) report false.
bool periodic_sufficient(int T, const GainConstants& g, const PerformanceSpec& spec,
                         const Channel& ch);

/// Largest T >= 1 with periodic_sufficient(T), or nullopt if T = 1 fails.
std::optional<int> max_sufficient_period(const GainConstants& g, const PerformanceSpec& spec,
                                         const Channel& ch);

}  // namespace etcsim
