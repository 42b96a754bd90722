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

#include "etcsim/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace etcsim {

std::string format_double(double v)
{
    if (std::isnan(v)) return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TraceRecord>& trace)
{
    const std::size_t n = trace.empty() ? 1 : trace.front().x.size();
    out << "k";
    if (n == 1) {
        out << ",x";
    } else {
        for (std::size_t i = 1; i <= n; ++i) out << ",x" << i;
    }
    out << ",t,r,h,G\n";
    for (const auto& rec : trace) {
        out << rec.k;
        for (double xi : rec.x) out << ',' << format_double(xi);
        out << ',' << rec.t << ',' << rec.r << ',' << format_double(rec.h) << ','
            << format_double(rec.trigger) << '\n';
    }
}

void write_ensemble_csv(std::ostream& out, const EnsembleStats& stats)
{
    out << "k,mean_x2,bound,frac,mean_h\n";
    for (std::size_t k = 0; k < stats.mean_x2.size(); ++k) {
        out << k << ',' << format_double(stats.mean_x2[k]) << ',' << format_double(stats.bound[k])
            << ',' << format_double(stats.frac[k]) << ',' << format_double(stats.mean_h[k])
            << '\n';
    }
}

void write_certify_csv(std::ostream& out, const CertificationReport& report)
{
    auto opt_int = [](const std::optional<int>& v) {
        return v ? std::to_string(*v) : std::string("none");
    };
    out << "key,value\n";
    out << "B_c," << format_double(report.B_c) << '\n';
    out << "B_star," << format_double(report.B_star) << '\n';
    out << "D," << report.D << '\n';
    out << "feasible," << (report.feasible ? "true" : "false") << '\n';
    out << "Bcal," << opt_int(report.Bcal) << '\n';
    out << "fraction_bound,"
        << (report.fraction_bound ? format_double(*report.fraction_bound) : std::string("none"))
        << '\n';
    out << "T_max," << opt_int(report.periodic_T_max) << '\n';
}

void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << content;
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace etcsim
