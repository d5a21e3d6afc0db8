#pragma once

// epsilon-almost-period search and equi / non-equi membership verdicts.

#include <optional>
#include <utility>
#include <vector>

#include "wap/verdict.hpp"
#include "wap/weylnorms.hpp"

namespace wap {

struct ClassConfig {
    Family family = Family::Paren;
    Variant variant = Variant::Base;
    ExponentSpec p = ExponentSpec::constant(1.0);
    PhiSpec phi = PhiSpec::identity();
    WeightSpec weight = WeightSpec::one();
    bool equi = true;
    std::vector<double> eps_list{0.2};
    GridSpec l_search = GridSpec::geometric(1.0, 256.0, 9);  // equi only
    std::vector<double> L_ladder{1.0, 2.0, 4.0, 8.0};
    GridSpec limsup_l_grid = GridSpec::geometric(2.0, 256.0, 8);  // non-equi only
    std::optional<double> tau_step;  // default L * clamp(eps/4, 1/1024, 1/8)
    // Explicit tau scan range; replaces the default near/far blocks.
    std::optional<std::pair<double, double>> scan_range;
    int window_count = 8;
    Domain domain = Domain::Line;
    std::optional<GridSpec> t_grid;
};

// Seminorm used for a single tau: the plain seminorm at l (equi) or the
// trailing-octave limsup over cfg.limsup_l_grid (non-equi).
struct PeriodValue {
    double value = 0.0;
    double l = 0.0;  // l at which value is attained
};
// With stop_above set, evaluation may stop early once the value exceeds it.
PeriodValue period_value(const FunctionSpec& f, double l, double tau, const ClassConfig& cfg,
                         std::optional<double> stop_above = std::nullopt);

struct PeriodSearch {
    std::optional<double> tau;  // first tau with value <= eps
    double best_tau = 0.0;      // smallest value seen (witness when tau is empty)
    double best_value = kInf;
    double best_l = 0.0;
    int tried = 0;
};

// Scan tau over [a, a + L] (structural candidates first).
PeriodSearch find_period(const FunctionSpec& f, double eps, double l, double a, double L, const ClassConfig& cfg);

// find_period on m consecutive length-L intervals starting at `start`.
Verdict relative_density_scan(const FunctionSpec& f, double eps, double l, double L, const ClassConfig& cfg,
                              double start, int m);

// Interval starts used for (l, L): explicit scan range, or a block centred
// at 0 plus (equi only) a block starting at 4l.
std::vector<double> interval_starts(double l, double L, const ClassConfig& cfg);

Verdict membership_report(const FunctionSpec& f, const ClassConfig& cfg);

// Re-evaluates a membership witness with one seminorm call.
double recheck_witness(const FunctionSpec& f, const ClassConfig& cfg, const Witness& w);

}  // namespace wap
