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

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "etcsim/sim.hpp"

namespace etcsim {

/// Parse or validation error; line is 0 when the problem is a missing key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& what);

    int line() const { return line_; }

private:
    int line_;
};

/// Flat `[section]` / `key = value` file. Keys are stored as "section.key".
struct RawConfig {
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, Entry> entries;

    const Entry* find(std::string_view key) const;
};

/// Rejects unknown sections and keys, duplicates and malformed lines.
RawConfig parse_config_text(std::string_view text);
RawConfig load_config_file(const std::string& path);

/// Typed configuration. Defaults: system.type = scalar, spec.D = 1,
/// run.horizon = 300 (scalar) or 200 (vector), run.n_runs = 1000,
/// run.seed = 1, run.noise = gaussian, policy.kind = event / event_vector.
RunConfig build_run_config(const RawConfig& raw);

/// True for the numeric leaves a sweep may address (e.g. "channel.p").
bool is_numeric_param(std::string_view path);

/// Overwrites one numeric leaf; throws ConfigError for an unknown path.
void set_param(RawConfig& raw, std::string_view path, const std::string& value);

}  // namespace etcsim
