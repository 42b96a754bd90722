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

#include "etcsim/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace etcsim {

double geometric_factor(double b, double p, double D)
{
    const double ratio = b * (1.0 - p);
    if (!(ratio < 1.0)) {
        throw DivergenceError("geometric series diverges: b(1-p) = " + std::to_string(ratio) +
                              " >= 1 (b = " + std::to_string(b) + ", p = " +
                              std::to_string(p) + ")");
    }
    return std::pow(b, D) / (1.0 - ratio);
}

std::int64_t steps_to_bound(double x_at_R_sq, double B, double c)
{
    if (!(B > 0.0)) {
        throw std::invalid_argument("steps_to_bound requires B > 0");
    }
    if (x_at_R_sq <= 0.0) {
        return 0;
    }
    const double ratio = std::log(x_at_R_sq / B) / std::log(1.0 / (c * c));
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9) {
        return static_cast<std::int64_t>(nearest);
    }
    return static_cast<std::int64_t>(std::ceil(ratio));
}

std::int64_t q_kD(double x_at_R_sq, double B, std::int64_t elapsed, int D, double c)
{
    if (x_at_R_sq <= 0.0) {
        return 0;
    }
    return std::max<std::int64_t>(0, steps_to_bound(x_at_R_sq, B, c) - elapsed - D);
}

namespace {

// The bracketed max-term shared by G and G^+:
//   g_D(c^2) z + (B/p - c^{2q} g_D(c^2) z)(1-p)^q
double bound_term(double z, std::int64_t q, double gc, const PerformanceSpec& spec, double p)
{
    const double qd = static_cast<double>(q);
    const double tail = std::pow(1.0 - p, qd);
    const double decay = std::pow(spec.c * spec.c, qd);
    return gc * z + (spec.B / p - decay * gc * z) * tail;
}

}  // namespace

double lookahead_G(const LookaheadInputs& in, const GainConstants& g, const PerformanceSpec& spec,
                   const Channel& ch, int D)
{
    const double p = ch.p;
    const double d = static_cast<double>(D);
    const double g_cl = geometric_factor(g.a_bar * g.a_bar, p, d);
    const double g_mix = geometric_factor(g.a * g.a_bar, p, d);
    const double g_ol = geometric_factor(g.a * g.a, p, d);
    const double g_c = geometric_factor(spec.c * spec.c, p, d);

    const double z =
        std::pow(spec.c * spec.c, static_cast<double>(in.elapsed)) * in.x_at_R_sq;
    const auto q = q_kD(in.x_at_R_sq, spec.B, in.elapsed, D, spec.c);

    const double quad = g_cl * in.x * in.x + 2.0 * (g_mix - g_cl) * in.x * in.e +
                        (g_ol - 2.0 * g_mix + g_cl) * in.e * in.e;
    const double noise = g.m_bar * (g_ol - 1.0 / p);
    return p * (quad + noise - bound_term(z, q, g_c, spec, p));
}

double perf_eval_Gplus(double x_sq, const GainConstants& g, const PerformanceSpec& spec,
                       const Channel& ch, int D)
{
    const double p = ch.p;
    const double d = static_cast<double>(D);
    const double g_cl = geometric_factor(g.a_bar * g.a_bar, p, d);
    const double g_ol = geometric_factor(g.a * g.a, p, d);
    const double g_c = geometric_factor(spec.c * spec.c, p, d);
    const auto q = q_kD(x_sq, spec.B, 0, D, spec.c);
    return p * (g_cl * x_sq + g.m_bar * (g_ol - 1.0 / p) - bound_term(x_sq, q, g_c, spec, p));
}

double open_loop_H(double s, double y, const GainConstants& g, const PerformanceSpec& spec)
{
    const double closed = std::pow(g.a_bar * g.a_bar, s) * y;
    const double noise = g.m_bar * (std::pow(g.a * g.a, s) - 1.0);
    return closed + noise - std::max(std::pow(spec.c * spec.c, s) * y, spec.B);
}

double script_G(double horizon, const GainConstants& g, const PerformanceSpec& spec,
                const Channel& ch)
{
    const double p = ch.p;
    const double c2 = spec.c * spec.c;
    const double g_cl = geometric_factor(g.a_bar * g.a_bar, p, horizon);
    const double g_c = geometric_factor(c2, p, horizon);
    const double g_ol = geometric_factor(g.a * g.a, p, horizon);
    return (g_cl - g_c) * spec.B / std::pow(c2, horizon) + g.m_bar * (g_ol - 1.0 / p);
}

namespace {

struct PeriodicTerms {
    bool diverges = false;
    double value = 0.0;      // left-hand side of the sufficient condition
    double noise_part = 0.0; // M_bar (g_1(a^{2T}) - 1/p)
};

PeriodicTerms periodic_terms(int T, const GainConstants& g, const PerformanceSpec& spec,
                             const Channel& ch)
{
    const double p = ch.p;
    const double t = static_cast<double>(T);
    const double a_T = std::pow(g.a * g.a, t);
    if (!(a_T * (1.0 - p) < 1.0)) {
        return PeriodicTerms{true, 0.0, 0.0};
    }
    const double c_T = std::pow(spec.c * spec.c, t);
    const double ab_T = std::pow(g.a_bar * g.a_bar, t);
    PeriodicTerms out;
    out.noise_part = g.m_bar * (geometric_factor(a_T, p, 1.0) - 1.0 / p);
    out.value = (geometric_factor(ab_T, p, 1.0) - geometric_factor(c_T, p, 1.0)) * spec.B / c_T +
                out.noise_part;
    return out;
}

}  // namespace

bool periodic_sufficient(int T, const GainConstants& g, const PerformanceSpec& spec,
                         const Channel& ch)
{
    if (T < 1) {
        throw std::invalid_argument("periodic_sufficient requires T >= 1");
    }
    const auto terms = periodic_terms(T, g, spec, ch);
    return !terms.diverges && terms.value < 0.0;
}

std::optional<int> max_sufficient_period(const GainConstants& g, const PerformanceSpec& spec,
                                         const Channel& ch)
{
    // The bound term is >= -B/p for every T, so once the (increasing) noise
    // part reaches B/p no larger period can satisfy the condition.
    constexpr int kMaxPeriod = 1'000'000;
    std::optional<int> best;
    for (int T = 1; T <= kMaxPeriod; ++T) {
        const auto terms = periodic_terms(T, g, spec, ch);
        if (terms.diverges) break;
        if (terms.value < 0.0) best = T;
        if (terms.noise_part >= spec.B / ch.p) break;
    }
    return best;
}

}  // namespace etcsim
