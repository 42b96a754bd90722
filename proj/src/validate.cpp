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

#include "etcsim/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "etcsim/analytic.hpp"
#include "etcsim/certify.hpp"
#include "etcsim/oracles.hpp"
#include "etcsim/rng.hpp"

namespace etcsim {

bool ValidationReport::ok() const
{
    return first_failure() == nullptr;
}

const CheckResult* ValidationReport::first_failure() const
{
    for (const auto& c : checks) {
        if (!c.passed && !c.informational) return &c;
    }
    return nullptr;
}

namespace {

constexpr int kSamples = 100;
constexpr double kSeriesTol = 1e-8;
constexpr double kTowerTol = 1e-10;

std::string fmt(const char* f, double v)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

class Draws {
public:
    explicit Draws(std::uint64_t seed) : stream_(seed, 0, StreamTag::aux) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * stream_.uniform(n_++); }
    std::int64_t integer(std::int64_t lo, std::int64_t hi)
    {
        return lo + static_cast<std::int64_t>(stream_.uniform(n_++) * static_cast<double>(hi - lo + 1));
    }

private:
    CounterStream stream_;
    std::uint64_t n_ = 0;
};

CheckResult series_check_scalar(const RunConfig& cfg, const GainConstants& g)
{
    Draws draws(cfg.seed);
    const double root_B = std::sqrt(cfg.spec.B);
    double worst = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const LookaheadInputs in{draws.uniform(-20.0, 20.0) * root_B,
                                 draws.uniform(-3.0, 3.0) * root_B, draws.integer(1, 40),
                                 draws.uniform(0.0, 200.0) * cfg.spec.B};
        const auto s = oracle_series_G(in, g, cfg.spec, cfg.channel, cfg.spec.D);
        const double closed = lookahead_G(in, g, cfg.spec, cfg.channel, cfg.spec.D);
        worst = std::max(worst, std::abs(closed - s.value) / std::max(s.scale, 1e-300));

        const double x_sq = draws.uniform(0.0, 400.0) * cfg.spec.B;
        const auto sp = oracle_series_Gplus(x_sq, g, cfg.spec, cfg.channel, cfg.spec.D);
        const double cp = perf_eval_Gplus(x_sq, g, cfg.spec, cfg.channel, cfg.spec.D);
        worst = std::max(worst, std::abs(cp - sp.value) / std::max(sp.scale, 1e-300));
    }
    return {"series_oracle", worst <= kSeriesTol, false, fmt("worst relative error %.3g", worst)};
}

CheckResult series_check_vector(const RunConfig& cfg, const GainConstants& g)
{
    Draws draws(cfg.seed);
    const double root_B = std::sqrt(cfg.spec.B);
    double worst = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const VectorBoundInputs in{draws.uniform(0.0, 20.0) * root_B,
                                   draws.uniform(0.0, 3.0) * root_B, draws.integer(1, 40),
                                   draws.uniform(0.0, 200.0) * cfg.spec.B};
        const auto s = oracle_series_Gbar(in, g, cfg.spec, cfg.channel, cfg.spec.D);
        const double closed = Gbar(in, g, cfg.spec, cfg.channel, cfg.spec.D);
        worst = std::max(worst, std::abs(closed - s.value) / std::max(s.scale, 1e-300));

        const double x_sq = draws.uniform(0.0, 400.0) * cfg.spec.B;
        const auto sp = oracle_series_Gplus(x_sq, g, cfg.spec, cfg.channel, cfg.spec.D);
        const double jp = Jbar(x_sq, g, cfg.spec, cfg.channel, cfg.spec.D);
        worst = std::max(worst, std::abs(jp - sp.value) / std::max(sp.scale, 1e-300));
    }
    return {"series_oracle", worst <= kSeriesTol, false, fmt("worst relative error %.3g", worst)};
}

CheckResult tower_check(const RunConfig& cfg, const ScalarSystem& sys)
{
    Draws draws(cfg.seed + 1);
    const double root_B = std::sqrt(cfg.spec.B);
    double worst = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const TowerState st{draws.uniform(-20.0, 20.0) * root_B, draws.uniform(-3.0, 3.0) * root_B,
                            draws.integer(1, 40), draws.uniform(0.0, 200.0) * cfg.spec.B};
        const auto r = oracle_tower_check(st, sys, cfg.spec, cfg.channel, cfg.spec.D);
        worst = std::max({worst, std::abs(r.exact_idle) / r.scale_idle,
                          std::abs(r.exact_received) / r.scale_received});
    }
    return {"tower_identity", worst <= kTowerTol, false, fmt("worst scaled residual %.3g", worst)};
}

void full_checks(const RunConfig& cfg, const GainConstants& g, ValidationReport& rep)
{
    const auto bstar = compute_B_star(g, cfg.spec.c);
    const bool above = cfg.spec.B > bstar.B_star;
    const std::string regime = above ? "" : " (B <= B*, not required)";

    {
        const auto grid = log_grid(1e-3 * cfg.spec.B, 20.0 * cfg.spec.B, 200);
        const auto res = verify_H_monotone_sign(g, cfg.spec, grid, 500);
        std::string detail = res.ok ? "no violation" : fmt("violation at y = %.6g", res.first_violation->y);
        rep.checks.push_back({"H_sign_monotone", res.ok, !above, detail + regime});
    }
    {
        const double U = U_of_B(cfg.spec.B, g, cfg.spec.c);
        const auto grid = log_grid(cfg.spec.B * (1.0 + 1e-9), 100.0 * std::max(U, cfg.spec.B), 400);
        int bad = 0;
        for (double y : grid) {
            const auto kind = classify_case(y, g, cfg.spec).kind;
            if (kind == HCase::III || kind == HCase::IV) ++bad;
        }
        rep.checks.push_back({"case_sweep", bad == 0, !above,
                              fmt("%.0f grid points in case III or IV", bad) + regime});
    }
    {
        // Admissible horizons must form an initial segment and script_G must
        // be convex in the horizon.
        std::vector<double> v;
        for (int d = 0; d <= 20; ++d) v.push_back(script_G(d, g, cfg.spec, cfg.channel));
        bool segment = true;
        bool seen_gap = false;
        for (int d = 1; d <= 20; ++d) {
            if (v[d] < 0.0 && seen_gap) segment = false;
            if (v[d] >= 0.0) seen_gap = true;
        }
        double min_second = INFINITY;
        for (int d = 1; d < 20; ++d) min_second = std::min(min_second, v[d + 1] - 2.0 * v[d] + v[d - 1]);
        const double tol = 1e-9 * std::max(1.0, std::abs(v.back()));
        rep.checks.push_back({"script_G_admissible_segment", segment && min_second >= -tol, false,
                              fmt("min second difference %.3g", min_second)});

        int first_drop = -1;
        for (int d = 0; d < 20 && first_drop < 0; ++d) {
            if (!(v[d + 1] > v[d])) first_drop = d;
        }
        rep.checks.push_back({"script_G_strictly_increasing", first_drop < 0, true,
                              first_drop < 0 ? "increasing on 0..20"
                                             : fmt("decreases after horizon %.0f", first_drop)});
    }
}

ValidationReport run(const RunConfig& cfg, bool full)
{
    ValidationReport rep;
    const auto g = cfg.gains();
    if (const auto* sys = std::get_if<ScalarSystem>(&cfg.system)) {
        rep.checks.push_back(series_check_scalar(cfg, g));
        rep.checks.push_back(tower_check(cfg, *sys));
    } else {
        rep.checks.push_back(series_check_vector(cfg, g));
    }
    if (full) full_checks(cfg, g, rep);
    return rep;
}

}  // namespace

ValidationReport validate_quick(const RunConfig& cfg)
{
    return run(cfg, false);
}

ValidationReport validate_full(const RunConfig& cfg)
{
    return run(cfg, true);
}

}  // namespace etcsim
