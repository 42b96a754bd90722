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

#include "etcsim/analytic.hpp"
#include "etcsim/model.hpp"
#include "etcsim/policies.hpp"

namespace etcsim {

// Reference values computed by direct summation over the time of the next
// reception. They share no algebra with the closed forms and exist to check
// them.

struct SeriesResult {
    double value = 0.0;
    double scale = 0.0;  // sum of |summands|; use as the denominator of relative errors
    int terms = 0;
};

/// sum_{s >= D} E[h_{k+s} | I_k, first reception at k+s] (1-p)^{s-D} p, with
/// the inner expectation written out from the plant recursion. Summation
/// stops once the geometric tail bound drops below tol * scale.
SeriesResult oracle_series_G(const LookaheadInputs& in, const GainConstants& g,
                             const PerformanceSpec& spec, const Channel& ch, int D,
                             double tol = 1e-12);

/// Same sum conditioned on a reception with squared state x_sq.
SeriesResult oracle_series_Gplus(double x_sq, const GainConstants& g, const PerformanceSpec& spec,
                                 const Channel& ch, int D, double tol = 1e-12);

/// Series of hbar weighted by the first-reception probabilities.
SeriesResult oracle_series_Gbar(const VectorBoundInputs& in, const GainConstants& g,
                                const PerformanceSpec& spec, const Channel& ch, int D,
                                double tol = 1e-12);

/// Scalar sensor state entering the one-step tower check.
struct TowerState {
    double x = 0.0;
    double e = 0.0;            // e_k (pre-reception)
    std::int64_t elapsed = 1;  // k - R_k
    double x_at_R_sq = 0.0;
};

struct TowerResiduals {
    // E_v[G_{k+1}^D] - G_k^{D+1} with r_k = 0, and
    // E_v[G_{k+1}^D] - G^+(x_k^2, D+1) with r_k = 1.
    double exact_idle = 0.0;
    double exact_received = 0.0;
    double scale_idle = 0.0;
    double scale_received = 0.0;
    // Monte-Carlo estimates of the same differences with standard errors.
    double mc_idle = 0.0;
    double mc_idle_se = 0.0;
    double mc_received = 0.0;
    double mc_received_se = 0.0;
};

/// One-step tower identities for a scalar system. The exact branch averages
/// over the two Gauss-Hermite nodes +-sqrt(M), which integrates a quadratic
/// in v exactly; the threshold index q does not depend on v. n_mc Gaussian
/// draws from `seed` give the Monte-Carlo audit (skipped for n_mc = 0).
TowerResiduals oracle_tower_check(const TowerState& st, const ScalarSystem& sys,
                                  const PerformanceSpec& spec, const Channel& ch, int D,
                                  int n_mc = 0, std::uint64_t seed = 1);

}  // namespace etcsim
