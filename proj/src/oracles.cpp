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

#include "etcsim/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "etcsim/rng.hpp"

namespace etcsim {

namespace {

constexpr int kMaxTerms = 1'000'000;

// Sums term(s) * (1-p)^{s-D} p for s = D, D+1, ... . Every |term(s)| must be
// at most K a^{2s}, which gives the tail bound
//   p K a^{2D} rho^{S+1-D} / (1 - rho),  rho = a^2 (1-p).
template <typename Term>
SeriesResult sum_first_reception(Term&& term, double K, double a, const Channel& ch, int D,
                                 double tol)
{
    const double p = ch.p;
    const double a2 = a * a;
    const double rho = a2 * (1.0 - p);
    if (!(rho < 1.0)) throw DivergenceError("series oracle: a^2 (1-p) >= 1");

    SeriesResult out;
    double weight = p;  // (1-p)^{s-D} p
    double growth = K * p * std::pow(a2, static_cast<double>(D));  // p K a^{2D} rho^{s-D}
    for (int s = D; s < D + kMaxTerms; ++s) {
        const double v = weight * term(s);
        out.value += v;
        out.scale += std::abs(v);
        ++out.terms;
        growth *= rho;
        const double tail = growth / (1.0 - rho);
        if (weight == 0.0 || tail <= tol * out.scale) break;
        weight *= 1.0 - p;
    }
    return out;
}

}  // namespace

SeriesResult oracle_series_G(const LookaheadInputs& in, const GainConstants& g,
                             const PerformanceSpec& spec, const Channel& ch, int D, double tol)
{
    const double a = g.a;
    const double ab = g.a_bar;
    const double M = g.noise_power();
    const double c2 = spec.c * spec.c;
    const double xhat = in.x - in.e;

    // Without receptions xhat evolves as a_bar^s xhat and the error as
    // a^s e plus accumulated noise, so x_{k+s} = a_bar^s xhat + a^s e + w_s
    // with E w_s^2 = M (1 + a^2 + ... + a^{2(s-1)}).
    // Summands are requested for s = D, D+1, ... in order; the noise sum is
    // extended one power at a time.
    int summed = 0;
    double powers = 0.0;
    auto term = [&](int s) {
        const double sd = static_cast<double>(s);
        const double mean = std::pow(ab, sd) * xhat + std::pow(a, sd) * in.e;
        for (; summed < s; ++summed) powers += std::pow(a, 2.0 * summed);
        const double noise = M * powers;
        const double bound = std::max(
            std::pow(c2, static_cast<double>(in.elapsed) + sd) * in.x_at_R_sq, spec.B);
        return mean * mean + noise - bound;
    };
    const double K = (std::abs(xhat) + std::abs(in.e)) * (std::abs(xhat) + std::abs(in.e)) +
                     M / (a * a - 1.0) + in.x_at_R_sq + spec.B;
    return sum_first_reception(term, K, a, ch, D, tol);
}

SeriesResult oracle_series_Gplus(double x_sq, const GainConstants& g, const PerformanceSpec& spec,
                                 const Channel& ch, int D, double tol)
{
    return oracle_series_G(LookaheadInputs{std::sqrt(x_sq), 0.0, 0, x_sq}, g, spec, ch, D, tol);
}

SeriesResult oracle_series_Gbar(const VectorBoundInputs& in, const GainConstants& g,
                                const PerformanceSpec& spec, const Channel& ch, int D,
                                double tol)
{
    auto term = [&](int s) { return hbar(s, in, g, spec); };
    const double lead = in.x_norm + 2.0 * in.e_norm;
    const double K = lead * lead + g.m_bar + in.x_at_R_sq + spec.B;
    return sum_first_reception(term, K, g.a, ch, D, tol);
}

TowerResiduals oracle_tower_check(const TowerState& st, const ScalarSystem& sys,
                                  const PerformanceSpec& spec, const Channel& ch, int D,
                                  int n_mc, std::uint64_t seed)
{
    const auto g = gains_of(sys);
    const double sigma = std::sqrt(sys.M);
    const double ab = sys.a_bar();

    // r_k = 0: xhat^+ = xhat, so x' = a_bar x - L e + v and e' = a e + v.
    auto idle_next = [&](double v) {
        const LookaheadInputs next{ab * st.x - sys.L * st.e + v, sys.a * st.e + v,
                                   st.elapsed + 1, st.x_at_R_sq};
        return lookahead_G(next, g, spec, ch, D);
    };
    // r_k = 1: xhat^+ = x, so x' = a_bar x + v, e' = v and R_{k+1} = k.
    auto received_next = [&](double v) {
        const LookaheadInputs next{ab * st.x + v, v, 1, st.x * st.x};
        return lookahead_G(next, g, spec, ch, D);
    };

    const double target_idle =
        lookahead_G(LookaheadInputs{st.x, st.e, st.elapsed, st.x_at_R_sq}, g, spec, ch, D + 1);
    const double target_received = perf_eval_Gplus(st.x * st.x, g, spec, ch, D + 1);

    TowerResiduals out;
    const double e_idle = 0.5 * (idle_next(sigma) + idle_next(-sigma));
    const double e_received = 0.5 * (received_next(sigma) + received_next(-sigma));
    out.exact_idle = e_idle - target_idle;
    out.exact_received = e_received - target_received;
    out.scale_idle = std::max({std::abs(e_idle), std::abs(target_idle), 1.0});
    out.scale_received = std::max({std::abs(e_received), std::abs(target_received), 1.0});

    if (n_mc > 0) {
        const CounterStream stream(seed, 0, StreamTag::aux);
        double s1 = 0.0, s2 = 0.0, r1 = 0.0, r2 = 0.0;
        for (int i = 0; i < n_mc; ++i) {
            const double v = sigma * stream.normal(static_cast<std::uint64_t>(i));
            const double di = idle_next(v) - target_idle;
            const double dr = received_next(v) - target_received;
            s1 += di;
            s2 += di * di;
            r1 += dr;
            r2 += dr * dr;
        }
        const double n = static_cast<double>(n_mc);
        auto se = [n](double m1, double m2) {
            const double mean = m1 / n;
            const double var = std::max(0.0, m2 / n - mean * mean);
            return std::sqrt(var / n);
        };
        out.mc_idle = s1 / n;
        out.mc_idle_se = se(s1, s2);
        out.mc_received = r1 / n;
        out.mc_received_se = se(r1, r2);
    }
    return out;
}

}  // namespace etcsim
