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

// Times the serial reference against the OpenMP kernels on the scalar and
// vector reference setups and checks that both produce the same numbers.
//
// usage: etcsim_bench [n_runs] [repeats]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include <omp.h>

#include "etcsim/certify.hpp"
#include "etcsim/sim.hpp"

using namespace etcsim;

namespace {

double best_seconds(int repeats, const std::function<void()>& fn)
{
    double best = INFINITY;
    for (int i = 0; i < repeats; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

double max_abs_diff(const EnsembleStats& a, const EnsembleStats& b)
{
    double d = 0.0;
    for (std::size_t k = 0; k < a.mean_x2.size(); ++k) {
        d = std::max({d, std::abs(a.mean_x2[k] - b.mean_x2[k]), std::abs(a.mean_h[k] - b.mean_h[k]),
                      std::abs(a.frac[k] - b.frac[k])});
    }
    return d;
}

void bench_ensemble(const char* name, const RunConfig& cfg, int repeats)
{
    EnsembleStats serial, parallel;
    const double ts = best_seconds(repeats, [&] { serial = run_ensemble_serial(cfg); });
    const double tp = best_seconds(repeats, [&] { parallel = run_ensemble(cfg); });
    std::printf("%-18s serial %8.3f s  parallel %8.3f s  speedup %5.2fx  max|diff| %.3g\n", name,
                ts, tp, ts / tp, max_abs_diff(serial, parallel));
}

}  // namespace

int main(int argc, char** argv)
{
    const int n_runs = argc > 1 ? std::atoi(argv[1]) : 1000;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
    std::printf("threads: %d (ETCSIM_THREADS caps this)\n", ensemble_threads());

    RunConfig scalar;
    scalar.system = ScalarSystem::from_closed_loop(1.05, 0.95 * 0.98, 1.0);
    scalar.spec = PerformanceSpec{0.98, 15.5, 1};
    scalar.channel = Channel{0.6};
    scalar.policy.kind = PolicyKind::event;
    scalar.horizon = 300;
    scalar.n_runs = n_runs;
    scalar.seed = 2024;
    scalar.x0 = {155.0};
    bench_ensemble("scalar event D=1", scalar, repeats);

    Eigen::MatrixXd A(2, 2), Q = Eigen::MatrixXd::Identity(2, 2), L(2, 2), S(2, 2);
    A << 0.8, 0.5, -0.5, 1.0;
    L << 0.1310, -0.5000, 0.5000, -1.8820;
    S << 0.1, 0.05, 0.05, 0.1;
    RunConfig vec;
    vec.system = VectorSystem::make(A, Q, L, S);
    vec.spec = PerformanceSpec{0.98, 2.93, 1};
    vec.channel = Channel{0.8};
    vec.policy.kind = PolicyKind::event_vector;
    vec.horizon = 200;
    vec.n_runs = n_runs;
    vec.seed = 2024;
    vec.x0 = {29.3, -14.65};
    bench_ensemble("vector event D=1", vec, repeats);

    const auto g = gains_of(std::get<ScalarSystem>(scalar.system));
    const auto grid = log_grid(1e-3 * 15.5, 20.0 * 15.5, 20000);
    const double ts = best_seconds(repeats, [&] {
        (void)verify_H_monotone_sign_serial(g, scalar.spec, grid, 500);
    });
    const double tp = best_seconds(repeats, [&] {
        (void)verify_H_monotone_sign(g, scalar.spec, grid, 500);
    });
    std::printf("%-18s serial %8.3f s  parallel %8.3f s  speedup %5.2fx\n", "H sign sweep", ts, tp,
                ts / tp);
    return 0;
}
