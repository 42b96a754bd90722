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

#include <string>
#include <vector>

#include "etcsim/sim.hpp"

namespace etcsim {

struct CheckResult {
    std::string name;
    bool passed = false;
    bool informational = false;  // reported, but never fails the suite
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool ok() const;
    const CheckResult* first_failure() const;
};

/// Closed forms against the series oracles and, for scalar systems, the
/// one-step tower identities.
ValidationReport validate_quick(const RunConfig& cfg);

/// validate_quick plus the H sign sweep, the case classification sweep and
/// the admissible-horizon structure of script_G.
ValidationReport validate_full(const RunConfig& cfg);

}  // namespace etcsim
