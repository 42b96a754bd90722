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
#include <memory>
#include <optional>
#include <span>
#include <type_traits>

#include "etcsim/analytic.hpp"
#include "etcsim/model.hpp"

namespace etcsim {

/// What the sensor knows when it decides at step k (the set I_k).
struct SensorInfo {
    std::int64_t k = 0;
    std::int64_t last_reception = 0;  // R_k < k
    std::span<const double> x;
    std::span<const double> e;
    double x_at_R_sq = 0.0;
};

template <typename Vec>
SensorInfo sensor_info(const LoopState<Vec>& s)
{
    if constexpr (std::is_same_v<Vec, double>) {
        return SensorInfo{s.k, s.last_reception, std::span<const double>(&s.x, 1),
                          std::span<const double>(&s.e, 1), squared_norm(s.x_at_R)};
    } else {
        return SensorInfo{s.k, s.last_reception,
                          std::span<const double>(s.x.data(), static_cast<std::size_t>(s.x.size())),
                          std::span<const double>(s.e.data(), static_cast<std::size_t>(s.e.size())),
                          squared_norm(s.x_at_R)};
    }
}

struct PolicyDecision {
    bool transmit = false;
    std::optional<double> trigger;  // G or G_bar when it was evaluated
};

/// A transmission policy instance. Instances carry their phase and belong to
/// one trajectory; clone() gives a fresh copy in the same phase.
class TransmissionPolicy {
public:
    virtual ~TransmissionPolicy() = default;

    virtual PolicyDecision decide(const SensorInfo& info) = 0;
    virtual void notify_reception(bool /*received*/) {}
    virtual Mode mode() const { return Mode::idle; }
    virtual std::unique_ptr<TransmissionPolicy> clone() const = 0;
};

/// Silent on [anchor, anchor + D - 1], transmitting from anchor + D on.
/// Steps before the anchor transmit.
class NominalPolicy final : public TransmissionPolicy {
public:
    NominalPolicy(std::int64_t anchor, int D);

    PolicyDecision decide(const SensorInfo& info) override;
    std::unique_ptr<TransmissionPolicy> clone() const override;

private:
    std::int64_t anchor_;
    int D_;
};

/// Transmits when k mod T == 0.
class PeriodicPolicy final : public TransmissionPolicy {
public:
    explicit PeriodicPolicy(int T);

    PolicyDecision decide(const SensorInfo& info) override;
    std::unique_ptr<TransmissionPolicy> clone() const override;

private:
    int T_;
};

class AlwaysTransmitPolicy final : public TransmissionPolicy {
public:
    PolicyDecision decide(const SensorInfo& info) override;
    std::unique_ptr<TransmissionPolicy> clone() const override;
};

/// Two-phase trigger machine. While idle the trigger value is evaluated and
/// a value >= 0 switches to the transmit phase; the transmit phase persists,
/// without re-evaluating, until a reception returns it to idle.
class TwoPhaseTrigger : public TransmissionPolicy {
public:
    PolicyDecision decide(const SensorInfo& info) final;
    void notify_reception(bool received) final;
    Mode mode() const final { return mode_; }

protected:
    virtual double trigger_value(const SensorInfo& info) const = 0;

private:
    Mode mode_ = Mode::idle;
};

/// Event-triggered policy for scalar plants driven by the exact look-ahead
/// criterion G_k^D.
class EventTriggeredPolicy final : public TwoPhaseTrigger {
public:
    EventTriggeredPolicy(GainConstants gains, PerformanceSpec spec, Channel ch, int D);

    std::unique_ptr<TransmissionPolicy> clone() const override;

protected:
    double trigger_value(const SensorInfo& info) const override;

private:
    GainConstants gains_;
    PerformanceSpec spec_;
    Channel ch_;
    int D_;
};

/// Inputs of the vector-case upper bounds: norms only.
struct VectorBoundInputs {
    double x_norm = 0.0;
    double e_norm = 0.0;
    std::int64_t elapsed = 1;
    double x_at_R_sq = 0.0;
};

/// Upper bound on E[h_{k+s}] given I_k and reception at k+s.
double hbar(int s, const VectorBoundInputs& in, const GainConstants& g,
            const PerformanceSpec& spec);

/// Upper bound on E[h_{S_j+s}] given I_{S_j}^+ and next reception at S_j+s.
double hbar_plus(int s, double x_sq, const GainConstants& g, const PerformanceSpec& spec);

/// Closed form of sum_{s>=D} hbar(s) (1-p)^{s-D} p.
double Gbar(const VectorBoundInputs& in, const GainConstants& g, const PerformanceSpec& spec,
            const Channel& ch, int D);

/// Closed form of sum_{s>=D} hbar_plus(s) (1-p)^{s-D} p; coincides with
/// perf_eval_Gplus evaluated at the norm-based gains.
double Jbar(double x_sq, const GainConstants& g, const PerformanceSpec& spec, const Channel& ch,
            int D);

/// Event-triggered policy for vector plants driven by G_bar.
class VectorEventTriggeredPolicy final : public TwoPhaseTrigger {
public:
    VectorEventTriggeredPolicy(GainConstants gains, PerformanceSpec spec, Channel ch, int D);

    std::unique_ptr<TransmissionPolicy> clone() const override;

protected:
    double trigger_value(const SensorInfo& info) const override;

private:
    GainConstants gains_;
    PerformanceSpec spec_;
    Channel ch_;
    int D_;
};

}  // namespace etcsim
