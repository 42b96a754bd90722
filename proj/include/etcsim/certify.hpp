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

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "etcsim/model.hpp"

namespace etcsim {

// H(s, y) = min{f1(s, y), f2(s, y)}.
double f1(double s, double y, const GainConstants& g, const PerformanceSpec& spec);
double f2(double s, double y, const GainConstants& g, const PerformanceSpec& spec);

/// Crossing point of f1 and f2: (log y - log B) / log(1/c^2).
double s_doublestar(double y, const PerformanceSpec& spec);

/// Minimiser of f2(., y) over the reals.
double s_star(double y, const GainConstants& g);

/// W(y) = s_star(y) - s_doublestar(y); strictly decreasing on [B, inf).
double W(double y, const GainConstants& g, const PerformanceSpec& spec);

/// Zero of W, written directly from the defining expressions.
double U_of_B(double B, const GainConstants& g, double c);

/// Same zero through log U = (P1/P2) log B + P3 P4 / P2.
double U_of_B_log(double B, const GainConstants& g, double c);

double F_star(double y, const GainConstants& g, const PerformanceSpec& spec);
double F_doublestar(double y, const GainConstants& g, const PerformanceSpec& spec);

/// B -> F**(U(B)) evaluated with ultimate bound B.
double F_doublestar_at_U(double B, const GainConstants& g, double c);

/// d/dB F**(U(B)) = Y(B) log(a^2) / (P2 B) - 1.
double F_doublestar_at_U_slope(double B, const GainConstants& g, double c);

/// Lower critical constant M_bar log(a^2) / log(c^2 / a_bar^2).
double critical_B_c(const GainConstants& g, double c);

class BracketingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BStarResult {
    double B_star = 0.0;
    double B_c = 0.0;
    double B_0 = 0.0;
    std::optional<double> B_z;  // second zero of F**(U(.)), when it exists
    double slope_at_B_0 = 0.0;
};

/// Threshold above which H(., y) is sign-monotone for every y. Throws
/// BracketingError if no sign change is found within 200 doublings.
BStarResult compute_B_star(const GainConstants& g, double c);

enum class HCase { I, II, III, IV };

struct CaseLabel {
    HCase kind = HCase::I;
    double s_star = 0.0;
    double s_doublestar = 0.0;
    double F_star = 0.0;
    double F_doublestar = 0.0;
};

/// Which of the four shapes H(., y) takes for y > B.
CaseLabel classify_case(double y, const GainConstants& g, const PerformanceSpec& spec);

struct SignViolation {
    double y = 0.0;
    int first_positive = 0;  // first s with H > 0
    int dip = 0;             // later s with H <= 0
};

struct MonotoneSignResult {
    bool ok = true;
    std::optional<SignViolation> first_violation;  // smallest grid index that fails
};

/// Scans s = 0..s_max for every y and checks that H(., y) never returns to
/// <= 0 after turning positive. Grid points are checked in parallel.
MonotoneSignResult verify_H_monotone_sign(const GainConstants& g, const PerformanceSpec& spec,
                                          std::span<const double> y_grid, int s_max);

/// Single-threaded reference for verify_H_monotone_sign.
MonotoneSignResult verify_H_monotone_sign_serial(const GainConstants& g,
                                                 const PerformanceSpec& spec,
                                                 std::span<const double> y_grid, int s_max);

/// n logarithmically spaced values on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);

struct CertificationReport {
    double B_c = 0.0;
    double B_star = 0.0;
    double B = 0.0;
    int D = 1;
    double G_at_D = 0.0;
    bool B_above_B_star = false;
    bool feasible = false;
    std::optional<int> feasible_D_max;     // largest D >= 1 with script_G(D) < 0
    std::optional<int> Bcal;               // largest admissible extra idle steps
    std::optional<double> fraction_bound;  // 1 / (1 + Bcal p); scalar systems only
    std::optional<int> periodic_T_max;
    bool smaller_D_consistent = true;      // feasible at D implies feasible at D' < D
};

/// Assembles the feasibility report. `fraction_bound_valid` is false for
/// vector systems, where no transmission-fraction bound is available.
CertificationReport certify(const GainConstants& g, const PerformanceSpec& spec,
                            const Channel& ch, int Bcal_max, bool fraction_bound_valid = true);

}  // namespace etcsim
