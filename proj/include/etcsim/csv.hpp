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

#include <ostream>
#include <string>
#include <vector>

#include "etcsim/certify.hpp"
#include "etcsim/model.hpp"
#include "etcsim/sim.hpp"

namespace etcsim {

// All writers emit a header row, LF line endings and 17 significant digits.

/// Shortest "%.17g" rendering; NaN becomes an empty field.
std::string format_double(double v);

/// k,x,t,r,h,G (scalar) or k,x1,...,xn,t,r,h,G (vector).
void write_trajectory_csv(std::ostream& out, const std::vector<TraceRecord>& trace);

/// k,mean_x2,bound,frac,mean_h
void write_ensemble_csv(std::ostream& out, const EnsembleStats& stats);

/// key,value rows: B_c, B_star, D, feasible, Bcal, fraction_bound, T_max.
/// Absent optional values are written as "none".
void write_certify_csv(std::ostream& out, const CertificationReport& report);

/// Writes `content` to `path` in binary mode; throws std::runtime_error.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace etcsim
