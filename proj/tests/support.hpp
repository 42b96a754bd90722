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

// Reference setups shared by the test programs.

#pragma once

#include <cmath>

#include "etcsim/model.hpp"
#include "etcsim/sim.hpp"

namespace etcsim::testing {

inline ScalarSystem scalar_system()
{
    return ScalarSystem::from_closed_loop(1.05, 0.95 * 0.98, 1.0);
}

inline PerformanceSpec scalar_spec(int D = 1)
{
    return PerformanceSpec{0.98, 15.5, D};
}

inline Channel scalar_channel()
{
    return Channel{0.6};
}

inline VectorSystem vector_system()
{
    Eigen::MatrixXd A(2, 2), L(2, 2), S(2, 2);
    A << 0.8, 0.5, -0.5, 1.0;
    L << 0.1310, -0.5000, 0.5000, -1.8820;
    S << 0.1, 0.05, 0.05, 0.1;
    return VectorSystem::make(A, Eigen::MatrixXd::Identity(2, 2), L, S);
}

inline PerformanceSpec vector_spec(int D = 1)
{
    return PerformanceSpec{0.98, 2.93, D};
}

inline Channel vector_channel()
{
    return Channel{0.8};
}

inline RunConfig scalar_run(PolicyKind kind, int D = 1, int n_runs = 1000)
{
    RunConfig cfg;
    cfg.system = scalar_system();
    cfg.spec = scalar_spec(D);
    cfg.channel = scalar_channel();
    cfg.policy.kind = kind;
    cfg.horizon = 300;
    cfg.n_runs = n_runs;
    cfg.seed = 2024;
    cfg.x0 = {10.0 * 15.5};
    return cfg;
}

inline RunConfig vector_run(int D = 1, int n_runs = 1000)
{
    RunConfig cfg;
    cfg.system = vector_system();
    cfg.spec = vector_spec(D);
    cfg.channel = vector_channel();
    cfg.policy.kind = PolicyKind::event_vector;
    cfg.horizon = 200;
    cfg.n_runs = n_runs;
    cfg.seed = 2024;
    cfg.x0 = {10.0 * 2.93, -5.0 * 2.93};
    return cfg;
}

inline double rel_err(double got, double want, double scale)
{
    return std::abs(got - want) / std::max(std::abs(scale), 1e-300);
}

}  // namespace etcsim::testing
