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

#include "etcsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <omp.h>

namespace etcsim {

GainConstants RunConfig::gains() const
{
    return std::visit([](const auto& sys) { return gains_of(sys); }, system);
}

double RunConfig::x0_sq() const
{
    double s = 0.0;
    for (double v : x0) s += v * v;
    return s;
}

const char* to_string(PolicyKind kind)
{
    switch (kind) {
    case PolicyKind::event: return "event";
    case PolicyKind::event_vector: return "event_vector";
    case PolicyKind::periodic: return "periodic";
    case PolicyKind::always: return "always";
    case PolicyKind::nominal: return "nominal";
    }
    return "?";
}

const char* to_string(NoiseKind kind)
{
    switch (kind) {
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::uniform: return "uniform";
    case NoiseKind::zero: return "zero";
    }
    return "?";
}

void check_run_config(const RunConfig& cfg)
{
    if (cfg.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (cfg.n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
    const auto n = std::visit(
        [](const auto& sys) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(sys)>, ScalarSystem>) {
                return 1;
            } else {
                return static_cast<std::size_t>(sys.dim());
            }
        },
        cfg.system);
    if (cfg.x0.size() != n) throw std::invalid_argument("x0 has the wrong dimension");
    if (!(cfg.channel.p > 0.0 && cfg.channel.p <= 1.0)) {
        throw std::invalid_argument("channel success probability must lie in (0, 1]");
    }

    const auto kind = cfg.policy.kind;
    if (kind == PolicyKind::event && cfg.is_vector()) {
        throw std::invalid_argument("policy 'event' needs a scalar system; use 'event_vector'");
    }
    if (kind == PolicyKind::event_vector && !cfg.is_vector()) {
        throw std::invalid_argument("policy 'event_vector' needs a vector system");
    }
    if (kind == PolicyKind::periodic && cfg.policy.T < 1) {
        throw std::invalid_argument("periodic policy needs T >= 1");
    }
    if (kind == PolicyKind::event || kind == PolicyKind::event_vector) {
        PerformanceSpec spec = cfg.spec;
        spec.D = cfg.policy_D();
        const auto report = std::visit(
            [&](const auto& sys) { return validate_assumptions(sys, spec, cfg.channel); },
            cfg.system);
        if (const auto* bad = report.first_failure()) {
            throw std::invalid_argument("standing assumption violated: " + bad->name);
        }
    }
}

std::unique_ptr<TransmissionPolicy> make_policy(const RunConfig& cfg)
{
    switch (cfg.policy.kind) {
    case PolicyKind::event:
        return std::make_unique<EventTriggeredPolicy>(cfg.gains(), cfg.spec, cfg.channel,
                                                      cfg.policy_D());
    case PolicyKind::event_vector:
        return std::make_unique<VectorEventTriggeredPolicy>(cfg.gains(), cfg.spec, cfg.channel,
                                                            cfg.policy_D());
    case PolicyKind::periodic: return std::make_unique<PeriodicPolicy>(cfg.policy.T);
    case PolicyKind::always: return std::make_unique<AlwaysTransmitPolicy>();
    case PolicyKind::nominal:
        return std::make_unique<NominalPolicy>(cfg.policy.anchor, cfg.policy_D());
    }
    throw std::logic_error("unknown policy kind");
}

bool sample_reception(bool transmit, const Channel& ch, double u)
{
    return transmit && u < ch.p;
}

namespace {

double noise_component(NoiseKind kind, const CounterStream& stream, std::uint64_t index)
{
    switch (kind) {
    case NoiseKind::gaussian: return stream.normal(index);
    case NoiseKind::uniform: return std::numbers::sqrt3 * (2.0 * stream.uniform(index) - 1.0);
    case NoiseKind::zero: return 0.0;
    }
    return 0.0;
}

struct StepView {
    std::int64_t k;
    double x_sq;
    bool t;
    bool r;
    double h;
    double trigger;
    Mode mode;
};

class NoiseSource {
public:
    NoiseSource(const RunConfig& cfg, std::uint64_t run)
        : kind_(cfg.noise), stream_(cfg.seed, run, StreamTag::noise)
    {
    }

    double scalar(std::int64_t k, double variance) const
    {
        return std::sqrt(variance) * noise_component(kind_, stream_, static_cast<std::uint64_t>(k));
    }

    Eigen::VectorXd vector(std::int64_t k, const Eigen::MatrixXd& root) const
    {
        const auto n = root.cols();
        Eigen::VectorXd z(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            z[i] = noise_component(kind_, stream_,
                                   static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(n) +
                                       static_cast<std::uint64_t>(i));
        }
        return root * z;
    }

private:
    NoiseKind kind_;
    CounterStream stream_;
};

// Steps one run from k = 0 to cfg.horizon, handing each step to `emit`
// together with the current loop state.
template <typename Sys, typename Emit>
void simulate_run(const RunConfig& cfg, const Sys& sys, std::uint64_t run, Emit&& emit)
{
    const NoiseSource noise(cfg, run);
    const CounterStream channel(cfg.seed, run, StreamTag::channel);
    auto policy = make_policy(cfg);

    auto state = [&] {
        if constexpr (std::is_same_v<Sys, ScalarSystem>) {
            return initial_state(sys, cfg.x0.front());
        } else {
            return initial_state(sys, Eigen::Map<const Eigen::VectorXd>(
                                          cfg.x0.data(), static_cast<Eigen::Index>(cfg.x0.size())));
        }
    }();

    for (std::int64_t k = 0; k <= cfg.horizon; ++k) {
        bool t = true;
        bool r = true;
        double trigger = std::numeric_limits<double>::quiet_NaN();
        if (k > 0) {
            const auto decision = policy->decide(sensor_info(state));
            t = decision.transmit;
            if (decision.trigger) trigger = *decision.trigger;
            r = sample_reception(t, cfg.channel, channel.uniform(static_cast<std::uint64_t>(k)));
        }
        const Mode mode = policy->mode();
        policy->notify_reception(r);

        emit(StepView{k, squared_norm(state.x), t, r, performance_h(state, cfg.spec), trigger, mode},
             state);

        if (k == cfg.horizon) break;
        if constexpr (std::is_same_v<Sys, ScalarSystem>) {
            state = plant_step(state, sys, noise.scalar(k, sys.M), r);
        } else {
            state = plant_step(state, sys, noise.vector(k, sys.noise_root), r);
        }
    }
}

template <typename Emit>
void simulate_any(const RunConfig& cfg, std::uint64_t run, Emit&& emit)
{
    std::visit([&](const auto& sys) { simulate_run(cfg, sys, run, emit); }, cfg.system);
}

struct Accumulator {
    std::vector<double> sum_x2;
    std::vector<double> sum_h;
    std::vector<std::int64_t> tx_cumulative;
    std::int64_t transmissions = 0;
    std::int64_t receptions = 0;

    explicit Accumulator(int horizon)
        : sum_x2(static_cast<std::size_t>(horizon) + 1, 0.0),
          sum_h(static_cast<std::size_t>(horizon) + 1, 0.0),
          tx_cumulative(static_cast<std::size_t>(horizon) + 1, 0)
    {
    }

    void add_run(const RunConfig& cfg, std::uint64_t run)
    {
        std::int64_t tx = 0;
        simulate_any(cfg, run, [&](const StepView& v, const auto&) {
            const auto i = static_cast<std::size_t>(v.k);
            sum_x2[i] += v.x_sq;
            sum_h[i] += v.h;
            if (v.k > 0) {
                tx += v.t ? 1 : 0;
                receptions += v.r ? 1 : 0;
            }
            tx_cumulative[i] += tx;
        });
        transmissions += tx;
    }

    void merge(const Accumulator& other)
    {
        for (std::size_t i = 0; i < sum_x2.size(); ++i) {
            sum_x2[i] += other.sum_x2[i];
            sum_h[i] += other.sum_h[i];
            tx_cumulative[i] += other.tx_cumulative[i];
        }
        transmissions += other.transmissions;
        receptions += other.receptions;
    }

    EnsembleStats finish(const RunConfig& cfg) const
    {
        EnsembleStats s;
        s.horizon = cfg.horizon;
        s.n_runs = cfg.n_runs;
        const double n = static_cast<double>(cfg.n_runs);
        const double x0_sq = cfg.x0_sq();
        const std::size_t len = sum_x2.size();
        s.mean_x2.resize(len);
        s.mean_h.resize(len);
        s.bound.resize(len);
        s.frac.resize(len);
        s.tx_cumulative = tx_cumulative;
        for (std::size_t k = 0; k < len; ++k) {
            s.mean_x2[k] = sum_x2[k] / n;
            s.mean_h[k] = sum_h[k] / n;
            s.bound[k] = std::max(
                std::pow(cfg.spec.c * cfg.spec.c, static_cast<double>(k)) * x0_sq, cfg.spec.B);
            s.frac[k] = k == 0 ? 0.0
                               : static_cast<double>(tx_cumulative[k]) /
                                     (n * static_cast<double>(k));
        }
        s.transmissions = transmissions;
        s.receptions = receptions;
        return s;
    }
};

constexpr int kBlockRuns = 16;

}  // namespace

std::vector<TraceRecord> run_trajectory(const RunConfig& cfg, std::uint64_t run_index)
{
    check_run_config(cfg);
    std::vector<TraceRecord> trace;
    trace.reserve(static_cast<std::size_t>(cfg.horizon) + 1);
    simulate_any(cfg, run_index, [&](const StepView& v, const auto& state) {
        TraceRecord rec;
        rec.k = v.k;
        if constexpr (std::is_same_v<std::decay_t<decltype(state.x)>, double>) {
            rec.x = {state.x};
        } else {
            rec.x.assign(state.x.data(), state.x.data() + state.x.size());
        }
        rec.x_sq = v.x_sq;
        rec.t = v.t ? 1 : 0;
        rec.r = v.r ? 1 : 0;
        rec.h = v.h;
        rec.trigger = v.trigger;
        rec.mode = v.mode;
        trace.push_back(std::move(rec));
    });
    return trace;
}

int ensemble_threads()
{
    if (const char* env = std::getenv("ETCSIM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return omp_get_max_threads();
}

EnsembleStats run_ensemble(const RunConfig& cfg, int threads)
{
    check_run_config(cfg);
    if (threads <= 0) threads = ensemble_threads();

    const int n_blocks = (cfg.n_runs + kBlockRuns - 1) / kBlockRuns;
    std::vector<Accumulator> blocks(static_cast<std::size_t>(n_blocks), Accumulator(cfg.horizon));
    std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int b = 0; b < n_blocks; ++b) {
        try {
            const int first = b * kBlockRuns;
            const int last = std::min(cfg.n_runs, first + kBlockRuns);
            auto& acc = blocks[static_cast<std::size_t>(b)];
            for (int run = first; run < last; ++run) {
                acc.add_run(cfg, static_cast<std::uint64_t>(run));
            }
        } catch (...) {
#pragma omp critical(etcsim_ensemble_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    Accumulator total(cfg.horizon);
    for (const auto& b : blocks) total.merge(b);
    return total.finish(cfg);
}

EnsembleStats run_ensemble_serial(const RunConfig& cfg)
{
    check_run_config(cfg);
    Accumulator total(cfg.horizon);
    for (int run = 0; run < cfg.n_runs; ++run) {
        total.add_run(cfg, static_cast<std::uint64_t>(run));
    }
    return total.finish(cfg);
}

ObjectiveResult objective_check(const EnsembleStats& stats, const PerformanceSpec& spec,
                                double x0_sq, double slack)
{
    ObjectiveResult out;
    for (std::size_t k = 0; k < stats.mean_x2.size(); ++k) {
        const double bound =
            std::max(std::pow(spec.c * spec.c, static_cast<double>(k)) * x0_sq, spec.B);
        const double ratio = stats.mean_x2[k] / bound;
        if (ratio > out.worst_ratio) {
            out.worst_ratio = ratio;
            out.worst_k = static_cast<std::int64_t>(k);
        }
        if (stats.mean_x2[k] > (1.0 + slack) * bound) out.pass = false;
    }
    return out;
}

double tail_fraction(const EnsembleStats& stats, double share)
{
    const auto len = stats.frac.size();
    if (len < 2) return 0.0;
    auto first = static_cast<std::size_t>(std::floor(static_cast<double>(len) * (1.0 - share)));
    first = std::clamp<std::size_t>(first, 1, len - 1);
    double sum = 0.0;
    for (std::size_t k = first; k < len; ++k) sum += stats.frac[k];
    return sum / static_cast<double>(len - first);
}

}  // namespace etcsim
