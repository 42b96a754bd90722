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

#include "etcsim/certify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "etcsim/analytic.hpp"

namespace etcsim {

namespace {

// Implementation constants of the B* search.
struct LogConstants {
    double P1;  // log(a^2 / a_bar^2)
    double P2;  // log(a^2 c^2 / a_bar^2)
    double P3;  // log(1 / c^2)
    double P4;  // log(log(1/a_bar^2) / (M_bar log a^2))
};

LogConstants log_constants(const GainConstants& g, double c)
{
    const double a2 = g.a * g.a;
    const double ab2 = g.a_bar * g.a_bar;
    const double c2 = c * c;
    return LogConstants{std::log(a2 / ab2), std::log(a2 * c2 / ab2), std::log(1.0 / c2),
                        std::log(std::log(1.0 / ab2) / (g.m_bar * std::log(a2)))};
}

double open_loop_common(double s, double y, const GainConstants& g)
{
    return std::pow(g.a_bar * g.a_bar, s) * y + g.m_bar * (std::pow(g.a * g.a, s) - 1.0);
}

}  // namespace

double f1(double s, double y, const GainConstants& g, const PerformanceSpec& spec)
{
    return open_loop_common(s, y, g) - std::pow(spec.c * spec.c, s) * y;
}

double f2(double s, double y, const GainConstants& g, const PerformanceSpec& spec)
{
    return open_loop_common(s, y, g) - spec.B;
}

double s_doublestar(double y, const PerformanceSpec& spec)
{
    return (std::log(y) - std::log(spec.B)) / std::log(1.0 / (spec.c * spec.c));
}

double s_star(double y, const GainConstants& g)
{
    const double a2 = g.a * g.a;
    const double ab2 = g.a_bar * g.a_bar;
    return std::log(y * std::log(1.0 / ab2) / (g.m_bar * std::log(a2))) / std::log(a2 / ab2);
}

double W(double y, const GainConstants& g, const PerformanceSpec& spec)
{
    return s_star(y, g) - s_doublestar(y, spec);
}

double U_of_B(double B, const GainConstants& g, double c)
{
    const double a2 = g.a * g.a;
    const double ab2 = g.a_bar * g.a_bar;
    const double c2 = c * c;
    const double log_U = std::log(B * std::log(1.0 / ab2) / (g.m_bar * std::log(a2))) *
                             std::log(1.0 / c2) / std::log(a2 * c2 / ab2) +
                         std::log(B);
    return std::exp(log_U);
}

double U_of_B_log(double B, const GainConstants& g, double c)
{
    const auto k = log_constants(g, c);
    return std::exp(k.P1 / k.P2 * std::log(B) + k.P3 * k.P4 / k.P2);
}

double F_star(double y, const GainConstants& g, const PerformanceSpec& spec)
{
    return f2(s_star(y, g), y, g, spec);
}

double F_doublestar(double y, const GainConstants& g, const PerformanceSpec& spec)
{
    return f1(s_doublestar(y, spec), y, g, spec);
}

double F_doublestar_at_U(double B, const GainConstants& g, double c)
{
    const PerformanceSpec spec{c, B, 1};
    return F_doublestar(U_of_B_log(B, g, c), g, spec);
}

double F_doublestar_at_U_slope(double B, const GainConstants& g, double c)
{
    const auto k = log_constants(g, c);
    const double s = (std::log(B) + k.P4) / k.P2;  // s**(U(B))
    const double Y = std::pow(g.a_bar * g.a_bar, s) * U_of_B_log(B, g, c) +
                     g.m_bar * std::pow(g.a * g.a, s);
    return Y * std::log(g.a * g.a) / (k.P2 * B) - 1.0;
}

double critical_B_c(const GainConstants& g, double c)
{
    return g.m_bar * std::log(g.a * g.a) / std::log(c * c / (g.a_bar * g.a_bar));
}

BStarResult compute_B_star(const GainConstants& g, double c)
{
    const auto k = log_constants(g, c);
    BStarResult out;
    out.B_c = critical_B_c(g, c);
    out.B_0 = std::exp(-k.P4);
    out.slope_at_B_0 = F_doublestar_at_U_slope(out.B_0, g, c);

    if (out.slope_at_B_0 <= 0.0) {
        out.B_star = out.B_c;
        return out;
    }

    // Strictly concave with a zero at B_0 and positive slope there: march
    // right until the value turns negative, then bisect.
    double lo = out.B_0;
    double hi = 2.0 * out.B_0;
    int doublings = 0;
    while (F_doublestar_at_U(hi, g, c) >= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 200) {
            throw BracketingError("compute_B_star: no sign change within 200 doublings");
        }
    }
    while ((hi - lo) > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (F_doublestar_at_U(mid, g, c) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.B_z = 0.5 * (lo + hi);
    out.B_star = std::max(out.B_c, *out.B_z);
    return out;
}

CaseLabel classify_case(double y, const GainConstants& g, const PerformanceSpec& spec)
{
    CaseLabel label;
    label.s_star = s_star(y, g);
    label.s_doublestar = s_doublestar(y, spec);
    label.F_star = F_star(y, g, spec);
    label.F_doublestar = F_doublestar(y, g, spec);
    if (label.s_star < label.s_doublestar) {
        label.kind = HCase::I;
    } else if (label.F_doublestar <= 0.0) {
        label.kind = HCase::II;
    } else if (label.F_star > 0.0) {
        label.kind = HCase::III;
    } else {
        label.kind = HCase::IV;
    }
    return label;
}

namespace {

std::optional<SignViolation> scan_one(double y, const GainConstants& g,
                                      const PerformanceSpec& spec, int s_max)
{
    int first_positive = -1;
    for (int s = 0; s <= s_max; ++s) {
        const double h = open_loop_H(static_cast<double>(s), y, g, spec);
        if (h > 0.0) {
            if (first_positive < 0) first_positive = s;
        } else if (first_positive >= 0) {
            return SignViolation{y, first_positive, s};
        }
    }
    return std::nullopt;
}

}  // namespace

MonotoneSignResult verify_H_monotone_sign_serial(const GainConstants& g,
                                                 const PerformanceSpec& spec,
                                                 std::span<const double> y_grid, int s_max)
{
    MonotoneSignResult out;
    for (double y : y_grid) {
        if (auto v = scan_one(y, g, spec, s_max)) {
            out.ok = false;
            out.first_violation = v;
            break;
        }
    }
    return out;
}

MonotoneSignResult verify_H_monotone_sign(const GainConstants& g, const PerformanceSpec& spec,
                                          std::span<const double> y_grid, int s_max)
{
    const auto n = static_cast<std::ptrdiff_t>(y_grid.size());
    std::vector<std::optional<SignViolation>> found(y_grid.size());

#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        found[static_cast<std::size_t>(i)] = scan_one(y_grid[static_cast<std::size_t>(i)], g,
                                                      spec, s_max);
    }

    MonotoneSignResult out;
    for (const auto& v : found) {
        if (v) {
            out.ok = false;
            out.first_violation = v;
            break;
        }
    }
    return out;
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> out;
    if (n <= 0) return out;
    if (n == 1) return {lo};
    out.reserve(static_cast<std::size_t>(n));
    const double l0 = std::log(lo);
    const double step = (std::log(hi) - l0) / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i) {
        out.push_back(std::exp(l0 + step * i));
    }
    out.back() = hi;
    return out;
}

namespace {

// script_G(D) < 0, with divergence counting as infeasible.
bool horizon_feasible(int D, const GainConstants& g, const PerformanceSpec& spec,
                      const Channel& ch)
{
    try {
        return script_G(static_cast<double>(D), g, spec, ch) < 0.0;
    } catch (const DivergenceError&) {
        return false;
    }
}

}  // namespace

CertificationReport certify(const GainConstants& g, const PerformanceSpec& spec,
                            const Channel& ch, int Bcal_max, bool fraction_bound_valid)
{
    CertificationReport r;
    r.B = spec.B;
    r.D = spec.D;
    const auto bstar = compute_B_star(g, spec.c);
    r.B_c = bstar.B_c;
    r.B_star = bstar.B_star;
    r.B_above_B_star = spec.B > r.B_star;
    r.G_at_D = script_G(static_cast<double>(spec.D), g, spec, ch);
    const bool horizon_ok = r.G_at_D < 0.0;
    r.feasible = r.B_above_B_star && horizon_ok;

    // script_G is convex in D, so admissible horizons form an interval and a
    // positive, increasing value can never come back below zero.
    constexpr int kMaxHorizon = 100'000;
    double prev = std::numeric_limits<double>::infinity();
    for (int d = 1; d <= kMaxHorizon; ++d) {
        double value = 0.0;
        try {
            value = script_G(static_cast<double>(d), g, spec, ch);
        } catch (const DivergenceError&) {
            break;
        }
        if (value < 0.0) {
            r.feasible_D_max = d;
        } else if (r.feasible_D_max || value > prev) {
            break;
        }
        prev = value;
    }

    if (horizon_ok) {
        int b = 0;
        while (b + 1 <= Bcal_max && horizon_feasible(spec.D + b + 1, g, spec, ch)) ++b;
        r.Bcal = b;
        if (fraction_bound_valid) {
            r.fraction_bound = 1.0 / (1.0 + b * ch.p);
        }
    }

    if (horizon_ok) {
        for (int d = 1; d < spec.D; ++d) {
            if (!horizon_feasible(d, g, spec, ch)) r.smaller_D_consistent = false;
        }
    }

    if (fraction_bound_valid) {
        r.periodic_T_max = max_sufficient_period(g, spec, ch);
    }
    return r;
}

}  // namespace etcsim
