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
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace etcsim {

/// Scalar plant x_{k+1} = a x_k + L xhat_k^+ + v_k with noise variance M.
struct ScalarSystem {
    double a = 0.0;
    double L = 0.0;
    double M = 0.0;

    double a_bar() const { return a + L; }
    double m_bar() const { return M / (a * a - 1.0); }

    /// Builds the system from the closed-loop gain instead of L.
    static ScalarSystem from_closed_loop(double a, double a_bar, double M)
    {
        return ScalarSystem{a, a_bar - a, M};
    }
};

/// Vector plant x_{k+1} = A x_k + Q L xhat_k^+ + v_k, cov(v) = Sigma.
///
/// Norms and the noise square root are computed once in make(); the struct
/// is immutable afterwards and may be shared between trajectories.
struct VectorSystem {
    Eigen::MatrixXd A;
    Eigen::MatrixXd Q;
    Eigen::MatrixXd L;
    Eigen::MatrixXd Sigma;

    Eigen::MatrixXd A_bar;
    Eigen::MatrixXd QL;
    Eigen::MatrixXd noise_root;  // S with S S^T = Sigma
    double norm_A = 0.0;
    double norm_A_bar = 0.0;
    double M_bar = 0.0;

    Eigen::Index dim() const { return A.rows(); }

    /// Throws std::invalid_argument on shape mismatch or an indefinite /
    /// non-symmetric Sigma.
    static VectorSystem make(Eigen::MatrixXd A, Eigen::MatrixXd Q, Eigen::MatrixXd L,
                             Eigen::MatrixXd Sigma);
};

/// Spectral norm via the largest eigenvalue of M^T M.
double spectral_norm(const Eigen::MatrixXd& m);

struct Channel {
    double p = 1.0;  // success probability
};

struct PerformanceSpec {
    double c = 0.0;  // convergence rate
    double B = 0.0;  // ultimate bound
    int D = 1;       // look-ahead horizon
};

/// The three scalars every closed form is written in: drift gain, closed-loop
/// gain and the normalised noise constant. For vector systems these are the
/// norm-based surrogates (|A|, |A_bar|, tr(Sigma)/(|A|^2-1)).
struct GainConstants {
    double a = 0.0;
    double a_bar = 0.0;
    double m_bar = 0.0;

    /// Per-step noise power M (tr(Sigma) in the vector case).
    double noise_power() const { return m_bar * (a * a - 1.0); }
};

GainConstants gains_of(const ScalarSystem& sys);
GainConstants gains_of(const VectorSystem& sys);

struct AssumptionCheck {
    std::string name;
    bool passed = false;
    double value = 0.0;  // the quantity that was compared
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;

    bool ok() const;
    const AssumptionCheck* first_failure() const;
};

AssumptionReport validate_assumptions(const ScalarSystem& sys, const PerformanceSpec& spec,
                                      const Channel& ch);
AssumptionReport validate_assumptions(const VectorSystem& sys, const PerformanceSpec& spec,
                                      const Channel& ch);

enum class Mode { idle, transmit };

/// Full loop bookkeeping at step k. The "plus" fields describe the state after
/// the channel outcome at k; before it is known they equal the pre-reception
/// fields (the r_k = 0 reading).
template <typename Vec>
struct LoopState {
    std::int64_t k = 0;
    Vec x{};
    Vec x_hat{};
    Vec x_hat_plus{};
    Vec e{};
    Vec e_plus{};
    std::int64_t last_reception = 0;       // R_k
    std::int64_t last_reception_plus = 0;  // R_k^+
    Vec x_at_R{};
};

using ScalarState = LoopState<double>;
using VectorState = LoopState<Eigen::VectorXd>;

inline double squared_norm(double v) { return v * v; }
inline double squared_norm(const Eigen::VectorXd& v) { return v.squaredNorm(); }

/// State at k = 0 with xhat_0 = x_0 (S_0 = 0; the forced reception at 0 is
/// applied by the caller through apply_reception).
ScalarState initial_state(const ScalarSystem& sys, double x0);
VectorState initial_state(const VectorSystem& sys, const Eigen::VectorXd& x0);

/// Resolves the channel outcome at step k: fills xhat^+, e^+ and R_k^+.
ScalarState apply_reception(ScalarState s, bool received);
VectorState apply_reception(VectorState s, bool received);

/// Advances a resolved state one step with noise sample v.
ScalarState advance(const ScalarState& s, const ScalarSystem& sys, double v);
VectorState advance(const VectorState& s, const VectorSystem& sys, const Eigen::VectorXd& v);

/// apply_reception followed by advance.
ScalarState plant_step(const ScalarState& s, const ScalarSystem& sys, double v, bool received);
VectorState plant_step(const VectorState& s, const VectorSystem& sys, const Eigen::VectorXd& v,
                       bool received);

/// h_k = |x_k|^2 - max{c^{2(k-R_k)} |x_{R_k}|^2, B}.
double performance_h(double x_sq, double x_at_R_sq, std::int64_t elapsed,
                     const PerformanceSpec& spec);

template <typename Vec>
double performance_h(const LoopState<Vec>& s, const PerformanceSpec& spec)
{
    return performance_h(squared_norm(s.x), squared_norm(s.x_at_R), s.k - s.last_reception,
                         spec);
}

/// One row of a simulated trajectory.
struct TraceRecord {
    std::int64_t k = 0;
    std::vector<double> x;
    double x_sq = 0.0;
    int t = 0;
    int r = 0;
    double h = 0.0;
    double trigger = 0.0;  // NaN when the policy did not evaluate a trigger
    Mode mode = Mode::idle;
};

}  // namespace etcsim
