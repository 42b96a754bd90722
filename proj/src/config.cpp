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

#include "etcsim/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace etcsim {

ConfigError::ConfigError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line)
{
}

const RawConfig::Entry* RawConfig::find(std::string_view key) const
{
    const auto it = entries.find(std::string(key));
    return it == entries.end() ? nullptr : &it->second;
}

namespace {

constexpr std::array kKnownKeys = {
    "system.type", "system.a",      "system.L",     "system.a_bar", "system.M",
    "system.A",    "system.Q",      "system.Sigma", "channel.p",    "spec.c",
    "spec.B",      "spec.D",        "run.horizon",  "run.n_runs",   "run.seed",
    "run.x0",      "run.noise",     "policy.kind",  "policy.T",     "policy.D",
    "policy.anchor",
};

constexpr std::array kNumericKeys = {
    "system.a", "system.L",    "system.a_bar", "system.M",   "channel.p",
    "spec.c",   "spec.B",      "spec.D",       "run.horizon", "run.n_runs",
    "run.seed", "run.x0",      "policy.T",     "policy.D",    "policy.anchor",
};

std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

bool known_key(std::string_view key)
{
    return std::find(kKnownKeys.begin(), kKnownKeys.end(), key) != kKnownKeys.end();
}

double parse_double(const RawConfig::Entry& entry, std::string_view text, const std::string& key)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ConfigError(entry.line, "'" + key + "': not a finite number: '" +
                                          std::string(text) + "'");
    }
    return v;
}

template <typename Int>
Int parse_int(const RawConfig::Entry& entry, std::string_view text, const std::string& key)
{
    text = trim(text);
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(entry.line, "'" + key + "': not an integer: '" + std::string(text) + "'");
    }
    return v;
}

std::vector<double> parse_list(const RawConfig::Entry& entry, const std::string& key)
{
    std::vector<double> out;
    std::string_view rest = entry.value;
    while (true) {
        const auto comma = rest.find(',');
        out.push_back(parse_double(entry, rest.substr(0, comma), key));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

class Reader {
public:
    explicit Reader(const RawConfig& raw) : raw_(raw) {}

    const RawConfig::Entry& require(const std::string& key) const
    {
        const auto* e = raw_.find(key);
        if (!e) throw ConfigError(0, "missing key '" + key + "'");
        return *e;
    }

    double number(const std::string& key) const
    {
        const auto& e = require(key);
        return parse_double(e, e.value, key);
    }

    template <typename Int>
    Int integer(const std::string& key, Int fallback) const
    {
        const auto* e = raw_.find(key);
        return e ? parse_int<Int>(*e, e->value, key) : fallback;
    }

    std::string word(const std::string& key, const std::string& fallback) const
    {
        const auto* e = raw_.find(key);
        return e ? e->value : fallback;
    }

    int line(const std::string& key) const
    {
        const auto* e = raw_.find(key);
        return e ? e->line : 0;
    }

    bool has(const std::string& key) const { return raw_.find(key) != nullptr; }

private:
    const RawConfig& raw_;
};

Eigen::MatrixXd matrix_rows(const RawConfig::Entry& entry, const std::string& key,
                            Eigen::Index rows)
{
    const auto v = parse_list(entry, key);
    const auto n = static_cast<Eigen::Index>(v.size());
    if (rows <= 0 || n % rows != 0) {
        throw ConfigError(entry.line, "'" + key + "': " + std::to_string(n) +
                                          " entries do not fill " + std::to_string(rows) +
                                          " rows");
    }
    const Eigen::Index cols = n / rows;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v[static_cast<std::size_t>(i * cols + j)];
    return m;
}

System build_system(const Reader& r)
{
    const auto type = r.word("system.type", "scalar");
    if (type == "scalar") {
        for (const char* k : {"system.A", "system.Q", "system.Sigma"}) {
            if (r.has(k)) throw ConfigError(r.line(k), std::string("'") + k + "' is for vector systems");
        }
        const double a = r.number("system.a");
        const double M = r.number("system.M");
        const bool has_L = r.has("system.L");
        const bool has_ab = r.has("system.a_bar");
        if (has_L == has_ab) {
            throw ConfigError(r.line(has_L ? "system.a_bar" : "system.a"),
                              "give exactly one of 'system.L' and 'system.a_bar'");
        }
        if (has_ab) return ScalarSystem::from_closed_loop(a, r.number("system.a_bar"), M);
        return ScalarSystem{a, r.number("system.L"), M};
    }
    if (type == "vector") {
        for (const char* k : {"system.a", "system.a_bar", "system.M"}) {
            if (r.has(k)) throw ConfigError(r.line(k), std::string("'") + k + "' is for scalar systems");
        }
        const auto& A_entry = r.require("system.A");
        const auto nA = parse_list(A_entry, "system.A").size();
        const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(nA))));
        if (n * n != static_cast<Eigen::Index>(nA)) {
            throw ConfigError(A_entry.line, "'system.A' must be square");
        }
        Eigen::MatrixXd A = matrix_rows(A_entry, "system.A", n);
        Eigen::MatrixXd Q = matrix_rows(r.require("system.Q"), "system.Q", n);
        Eigen::MatrixXd L = matrix_rows(r.require("system.L"), "system.L", Q.cols());
        Eigen::MatrixXd S = matrix_rows(r.require("system.Sigma"), "system.Sigma", n);
        try {
            return VectorSystem::make(std::move(A), std::move(Q), std::move(L), std::move(S));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(A_entry.line, e.what());
        }
    }
    throw ConfigError(r.line("system.type"), "unknown system type '" + type + "'");
}

PolicyKind parse_policy_kind(const std::string& s, int line)
{
    if (s == "event") return PolicyKind::event;
    if (s == "event_vector") return PolicyKind::event_vector;
    if (s == "periodic") return PolicyKind::periodic;
    if (s == "always") return PolicyKind::always;
    if (s == "nominal") return PolicyKind::nominal;
    throw ConfigError(line, "unknown policy kind '" + s + "'");
}

NoiseKind parse_noise(const std::string& s, int line)
{
    if (s == "gaussian") return NoiseKind::gaussian;
    if (s == "uniform") return NoiseKind::uniform;
    if (s == "zero") return NoiseKind::zero;
    throw ConfigError(line, "unknown noise kind '" + s + "'");
}

}  // namespace

RawConfig parse_config_text(std::string_view text)
{
    RawConfig raw;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            static constexpr std::array kSections = {"system", "channel", "spec", "run", "policy"};
            if (std::find(kSections.begin(), kSections.end(), section) == kSections.end()) {
                throw ConfigError(line_no, "unknown section [" + section + "]");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        if (section.empty()) throw ConfigError(line_no, "key outside of any section");
        const auto key = section + "." + std::string(trim(line.substr(0, eq)));
        const auto value = std::string(trim(line.substr(eq + 1)));
        if (!known_key(key)) throw ConfigError(line_no, "unknown key '" + key + "'");
        if (value.empty()) throw ConfigError(line_no, "empty value for '" + key + "'");
        if (raw.entries.count(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
        raw.entries.emplace(key, RawConfig::Entry{value, line_no});
    }
    return raw;
}

RawConfig load_config_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

RunConfig build_run_config(const RawConfig& raw)
{
    const Reader r(raw);
    RunConfig cfg;
    cfg.system = build_system(r);
    const bool vec = cfg.is_vector();

    cfg.channel.p = r.number("channel.p");
    cfg.spec.c = r.number("spec.c");
    cfg.spec.B = r.number("spec.B");
    cfg.spec.D = r.integer<int>("spec.D", 1);

    cfg.horizon = r.integer<int>("run.horizon", vec ? 200 : 300);
    cfg.n_runs = r.integer<int>("run.n_runs", 1000);
    cfg.seed = r.integer<std::uint64_t>("run.seed", 1);
    cfg.noise = parse_noise(r.word("run.noise", "gaussian"), r.line("run.noise"));
    const auto& x0 = r.require("run.x0");
    cfg.x0 = parse_list(x0, "run.x0");
    const auto n = vec ? static_cast<std::size_t>(std::get<VectorSystem>(cfg.system).dim()) : 1u;
    if (cfg.x0.size() != n) {
        throw ConfigError(x0.line, "'run.x0' needs " + std::to_string(n) + " entries");
    }
    if (cfg.horizon < 1) throw ConfigError(r.line("run.horizon"), "'run.horizon' must be >= 1");
    if (cfg.n_runs < 1) throw ConfigError(r.line("run.n_runs"), "'run.n_runs' must be >= 1");
    if (cfg.spec.D < 1) throw ConfigError(r.line("spec.D"), "'spec.D' must be >= 1");

    cfg.policy.kind = parse_policy_kind(r.word("policy.kind", vec ? "event_vector" : "event"),
                                        r.line("policy.kind"));
    cfg.policy.T = r.integer<int>("policy.T", 1);
    cfg.policy.anchor = r.integer<std::int64_t>("policy.anchor", 0);
    if (r.has("policy.D")) {
        cfg.policy.D = r.integer<int>("policy.D", 1);
        if (*cfg.policy.D < 1) throw ConfigError(r.line("policy.D"), "'policy.D' must be >= 1");
    }
    if (cfg.policy.T < 1) throw ConfigError(r.line("policy.T"), "'policy.T' must be >= 1");
    return cfg;
}

bool is_numeric_param(std::string_view path)
{
    return std::find(kNumericKeys.begin(), kNumericKeys.end(), path) != kNumericKeys.end();
}

void set_param(RawConfig& raw, std::string_view path, const std::string& value)
{
    if (!is_numeric_param(path)) {
        throw ConfigError(0, "unknown parameter path '" + std::string(path) + "'");
    }
    auto& entry = raw.entries[std::string(path)];
    entry.value = value;
}

}  // namespace etcsim
