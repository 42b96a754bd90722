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

#include "etcsim/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace etcsim {

NominalPolicy::NominalPolicy(std::int64_t anchor, int D) : anchor_(anchor), D_(D)
{
    if (D < 0) throw std::invalid_argument("NominalPolicy requires D >= 0");
}

PolicyDecision NominalPolicy::decide(const SensorInfo& info)
{
    const bool silent = info.k >= anchor_ && info.k < anchor_ + D_;
    return PolicyDecision{!silent, std::nullopt};
}

std::unique_ptr<TransmissionPolicy> NominalPolicy::clone() const
{
    return std::make_unique<NominalPolicy>(*this);
}

PeriodicPolicy::PeriodicPolicy(int T) : T_(T)
{
    if (T < 1) throw std::invalid_argument("PeriodicPolicy requires T >= 1");
}

PolicyDecision PeriodicPolicy::decide(const SensorInfo& info)
{
    return PolicyDecision{info.k % T_ == 0, std::nullopt};
}

std::unique_ptr<TransmissionPolicy> PeriodicPolicy::clone() const
{
    return std::make_unique<PeriodicPolicy>(*this);
}

PolicyDecision AlwaysTransmitPolicy::decide(const SensorInfo&)
{
    return PolicyDecision{true, std::nullopt};
}

std::unique_ptr<TransmissionPolicy> AlwaysTransmitPolicy::clone() const
{
    return std::make_unique<AlwaysTransmitPolicy>(*this);
}

PolicyDecision TwoPhaseTrigger::decide(const SensorInfo& info)
{
    if (mode_ == Mode::transmit) {
        return PolicyDecision{true, std::nullopt};
    }
    const double value = trigger_value(info);
    if (value >= 0.0) {
        mode_ = Mode::transmit;
    }
    return PolicyDecision{mode_ == Mode::transmit, value};
}

void TwoPhaseTrigger::notify_reception(bool received)
{
    if (received) mode_ = Mode::idle;
}

EventTriggeredPolicy::EventTriggeredPolicy(GainConstants gains, PerformanceSpec spec, Channel ch,
                                           int D)
    : gains_(gains), spec_(spec), ch_(ch), D_(D)
{
}

std::unique_ptr<TransmissionPolicy> EventTriggeredPolicy::clone() const
{
    return std::make_unique<EventTriggeredPolicy>(*this);
}

double EventTriggeredPolicy::trigger_value(const SensorInfo& info) const
{
    const LookaheadInputs in{info.x[0], info.e[0], info.k - info.last_reception, info.x_at_R_sq};
    return lookahead_G(in, gains_, spec_, ch_, D_);
}

double hbar(int s, const VectorBoundInputs& in, const GainConstants& g,
            const PerformanceSpec& spec)
{
    const double sd = static_cast<double>(s);
    const double as = std::pow(g.a, sd);
    const double abs_ = std::pow(g.a_bar, sd);
    const double X = in.x_norm;
    const double E = in.e_norm;
    const double bound =
        std::max(std::pow(spec.c * spec.c, static_cast<double>(in.elapsed) + sd) * in.x_at_R_sq,
                 spec.B);
    return abs_ * abs_ * X * X + 2.0 * abs_ * (as + abs_) * X * E +
           (as * as + 2.0 * as * abs_ + abs_ * abs_) * E * E + g.m_bar * (as * as - 1.0) - bound;
}

double hbar_plus(int s, double x_sq, const GainConstants& g, const PerformanceSpec& spec)
{
    const double sd = static_cast<double>(s);
    return std::pow(g.a_bar * g.a_bar, sd) * x_sq + g.m_bar * (std::pow(g.a * g.a, sd) - 1.0) -
           std::max(std::pow(spec.c * spec.c, sd) * x_sq, spec.B);
}

double Gbar(const VectorBoundInputs& in, const GainConstants& g, const PerformanceSpec& spec,
            const Channel& ch, int D)
{
    // Summing each power of the norms against (1-p)^{s-D} p turns b^s into
    // p g_D(b); the max-term splits at q exactly as in the scalar case.
    const double p = ch.p;
    const double d = static_cast<double>(D);
    const double g_cl = geometric_factor(g.a_bar * g.a_bar, p, d);
    const double g_mix = geometric_factor(g.a * g.a_bar, p, d);
    const double g_ol = geometric_factor(g.a * g.a, p, d);
    const double g_c = geometric_factor(spec.c * spec.c, p, d);

    const double z =
        std::pow(spec.c * spec.c, static_cast<double>(in.elapsed)) * in.x_at_R_sq;
    const auto q = q_kD(in.x_at_R_sq, spec.B, in.elapsed, D, spec.c);
    const double qd = static_cast<double>(q);
    const double tail = std::pow(1.0 - p, qd);
    const double decay = std::pow(spec.c * spec.c, qd);

    const double X = in.x_norm;
    const double E = in.e_norm;
    const double quad = g_cl * X * X + 2.0 * (g_mix + g_cl) * X * E +
                        (g_ol + 2.0 * g_mix + g_cl) * E * E;
    const double noise = g.m_bar * (g_ol - 1.0 / p);
    const double bound = g_c * z + (spec.B / p - decay * g_c * z) * tail;
    return p * (quad + noise - bound);
}

double Jbar(double x_sq, const GainConstants& g, const PerformanceSpec& spec, const Channel& ch,
            int D)
{
    return perf_eval_Gplus(x_sq, g, spec, ch, D);
}

VectorEventTriggeredPolicy::VectorEventTriggeredPolicy(GainConstants gains, PerformanceSpec spec,
                                                       Channel ch, int D)
    : gains_(gains), spec_(spec), ch_(ch), D_(D)
{
}

std::unique_ptr<TransmissionPolicy> VectorEventTriggeredPolicy::clone() const
{
    return std::make_unique<VectorEventTriggeredPolicy>(*this);
}

double VectorEventTriggeredPolicy::trigger_value(const SensorInfo& info) const
{
    const auto norm = [](std::span<const double> v) {
        return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    };
    const VectorBoundInputs in{norm(info.x), norm(info.e), info.k - info.last_reception,
                               info.x_at_R_sq};
    return Gbar(in, gains_, spec_, ch_, D_);
}

}  // namespace etcsim
