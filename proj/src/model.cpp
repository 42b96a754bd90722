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

#include "etcsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace etcsim {

double spectral_norm(const Eigen::MatrixXd& m)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.transpose() * m,
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("spectral_norm: eigensolver failed");
    }
    return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

VectorSystem VectorSystem::make(Eigen::MatrixXd A, Eigen::MatrixXd Q, Eigen::MatrixXd L,
                                Eigen::MatrixXd Sigma)
{
    const auto n = A.rows();
    if (A.cols() != n || n == 0) {
        throw std::invalid_argument("A must be a non-empty square matrix");
    }
    if (Q.rows() != n) {
        throw std::invalid_argument("Q must have as many rows as A");
    }
    if (L.rows() != Q.cols() || L.cols() != n) {
        throw std::invalid_argument("L must be m x n where Q is n x m");
    }
    if (Sigma.rows() != n || Sigma.cols() != n) {
        throw std::invalid_argument("Sigma must be n x n");
    }
    const double asym = (Sigma - Sigma.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, Sigma.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("Sigma must be symmetric");
    }

    VectorSystem sys;
    sys.QL = Q * L;
    sys.A_bar = A + sys.QL;
    sys.norm_A = spectral_norm(A);
    sys.norm_A_bar = spectral_norm(sys.A_bar);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Sigma);
    const double tol = 1e-12 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    if (eig.eigenvalues().minCoeff() < -tol) {
        throw std::invalid_argument("Sigma must be positive semi-definite");
    }
    const Eigen::VectorXd root_vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    sys.noise_root = eig.eigenvectors() * root_vals.asDiagonal();

    sys.M_bar = Sigma.trace() / (sys.norm_A * sys.norm_A - 1.0);
    sys.A = std::move(A);
    sys.Q = std::move(Q);
    sys.L = std::move(L);
    sys.Sigma = std::move(Sigma);
    return sys;
}

GainConstants gains_of(const ScalarSystem& sys)
{
    return GainConstants{sys.a, sys.a_bar(), sys.m_bar()};
}

GainConstants gains_of(const VectorSystem& sys)
{
    return GainConstants{sys.norm_A, sys.norm_A_bar, sys.M_bar};
}

bool AssumptionReport::ok() const
{
    return std::all_of(checks.begin(), checks.end(),
                       [](const AssumptionCheck& c) { return c.passed; });
}

const AssumptionCheck* AssumptionReport::first_failure() const
{
    for (const auto& c : checks) {
        if (!c.passed) return &c;
    }
    return nullptr;
}

namespace {

AssumptionReport common_checks(const GainConstants& g, double noise, const PerformanceSpec& spec,
                               const Channel& ch, const char* drift_name)
{
    AssumptionReport r;
    const double a2 = g.a * g.a;
    const double ab2 = g.a_bar * g.a_bar;
    const double c2 = spec.c * spec.c;
    auto add = [&r](std::string name, bool ok, double v) {
        r.checks.push_back(AssumptionCheck{std::move(name), ok && std::isfinite(v), v});
    };
    add(std::string(drift_name) + " > 1", std::abs(g.a) > 1.0, std::abs(g.a));
    add("a_bar^2 < c^2", ab2 < c2, ab2);
    add("c^2 < 1", c2 < 1.0 && spec.c > 0.0, c2);
    add("0 < p <= 1", ch.p > 0.0 && ch.p <= 1.0, ch.p);
    add("a^2 (1 - p) < 1", a2 * (1.0 - ch.p) < 1.0, a2 * (1.0 - ch.p));
    add("noise > 0", noise > 0.0, noise);
    add("B >= 0", spec.B >= 0.0, spec.B);
    add("D >= 1", spec.D >= 1, spec.D);
    return r;
}

}  // namespace

AssumptionReport validate_assumptions(const ScalarSystem& sys, const PerformanceSpec& spec,
                                      const Channel& ch)
{
    return common_checks(gains_of(sys), sys.M, spec, ch, "|a|");
}

AssumptionReport validate_assumptions(const VectorSystem& sys, const PerformanceSpec& spec,
                                      const Channel& ch)
{
    return common_checks(gains_of(sys), sys.Sigma.trace(), spec, ch, "|A|");
}

ScalarState initial_state(const ScalarSystem&, double x0)
{
    ScalarState s;
    s.x = x0;
    s.x_hat = x0;
    s.x_hat_plus = x0;
    s.e = 0.0;
    s.e_plus = 0.0;
    s.x_at_R = x0;
    return s;
}

VectorState initial_state(const VectorSystem& sys, const Eigen::VectorXd& x0)
{
    if (x0.size() != sys.dim()) {
        throw std::invalid_argument("initial state has the wrong dimension");
    }
    VectorState s;
    s.x = x0;
    s.x_hat = x0;
    s.x_hat_plus = x0;
    s.e = Eigen::VectorXd::Zero(x0.size());
    s.e_plus = s.e;
    s.x_at_R = x0;
    return s;
}

namespace {

template <typename Vec>
LoopState<Vec> resolve(LoopState<Vec> s, bool received)
{
    if (received) {
        s.x_hat_plus = s.x;
        s.e_plus = s.x - s.x_hat_plus;
        s.last_reception_plus = s.k;
    } else {
        s.x_hat_plus = s.x_hat;
        s.e_plus = s.e;
        s.last_reception_plus = s.last_reception;
    }
    return s;
}

// Bookkeeping shared by both variants once x_{k+1} and xhat_{k+1} are known.
template <typename Vec>
LoopState<Vec> next_bookkeeping(const LoopState<Vec>& s, Vec x_next, Vec x_hat_next)
{
    LoopState<Vec> n;
    n.k = s.k + 1;
    n.last_reception = s.last_reception_plus;
    n.last_reception_plus = n.last_reception;
    n.x_at_R = (s.last_reception_plus == s.k) ? s.x : s.x_at_R;
    n.e = x_next - x_hat_next;
    n.e_plus = n.e;
    n.x = std::move(x_next);
    n.x_hat_plus = x_hat_next;
    n.x_hat = std::move(x_hat_next);
    return n;
}

}  // namespace

ScalarState apply_reception(ScalarState s, bool received) { return resolve(std::move(s), received); }

VectorState apply_reception(VectorState s, bool received)
{
    return resolve(std::move(s), received);
}

ScalarState advance(const ScalarState& s, const ScalarSystem& sys, double v)
{
    const double x_next = sys.a_bar() * s.x - sys.L * s.e_plus + v;
    const double x_hat_next = sys.a_bar() * s.x_hat_plus;
    return next_bookkeeping(s, x_next, x_hat_next);
}

VectorState advance(const VectorState& s, const VectorSystem& sys, const Eigen::VectorXd& v)
{
    Eigen::VectorXd x_next = sys.A * s.x + sys.QL * s.x_hat_plus + v;
    Eigen::VectorXd x_hat_next = sys.A_bar * s.x_hat_plus;
    return next_bookkeeping(s, std::move(x_next), std::move(x_hat_next));
}

ScalarState plant_step(const ScalarState& s, const ScalarSystem& sys, double v, bool received)
{
    return advance(apply_reception(s, received), sys, v);
}

VectorState plant_step(const VectorState& s, const VectorSystem& sys, const Eigen::VectorXd& v,
                       bool received)
{
    return advance(apply_reception(s, received), sys, v);
}

double performance_h(double x_sq, double x_at_R_sq, std::int64_t elapsed,
                     const PerformanceSpec& spec)
{
    const double decayed = std::pow(spec.c, 2.0 * static_cast<double>(elapsed)) * x_at_R_sq;
    return x_sq - std::max(decayed, spec.B);
}

}  // namespace etcsim
