#pragma once

// Weyl vanishing functionals on [0, inf) and their iterated-limit verdicts.

#include <functional>
#include <optional>

#include "wap/apclass.hpp"
#include "wap/verdict.hpp"
#include "wap/weylnorms.hpp"

namespace wap {

// Equi: lim_l limsup_t sup_x.  Weyl: lim_t limsup_l sup_x.
enum class LimitOrder { Equi, Weyl };

std::string to_string(LimitOrder o);

struct VanishingConfig {
    ExponentSpec p = ExponentSpec::constant(1.0);
    PhiSpec phi = PhiSpec::identity();
    WeightSpec weight = WeightSpec::one();
    Variant variant = Variant::Base;
    LimitOrder order = LimitOrder::Equi;
    std::optional<GridSpec> x_grid;  // default: coarse grid on [0, t + 4l] plus anchors
    GridSpec t_grid = GridSpec::geometric(16.0, 262144.0, 15);
    GridSpec l_grid = GridSpec::geometric(1.0, 256.0, 9);
    double threshold = 0.2;
    int x_points = 257;
};

// Defaults for the weyl order: t is the outer variable.
VanishingConfig weyl_order_defaults();

struct VanishingValue {
    double value = 0.0;
    double argmax_x = 0.0;
};

// sup over x >= 0 of the variant expression for v -> q(t + v) on [x, x + l].
VanishingValue vanishing_functional(const FunctionSpec& q, const VanishingConfig& cfg, double l, double t);

// Window quantity before the weight: ||phi(|q(t + .)|)||_{L^p[x, x+l]} (base).
double vanishing_window(const FunctionSpec& q, const VanishingConfig& cfg, double l, double t, double x);

Verdict vanishing_verdict(const FunctionSpec& q, const VanishingConfig& cfg);

// Iterated limit lim_outer limsup_inner of a table (outer-major values).
// Inner limsup is the trailing-octave max. Satisfied: trailing outer values
// non-increasing, last <= threshold, inner not growing at the last outer
// point. Violated: inner grows at every outer point past the threshold, or
// trailing outer values non-decreasing above it. Otherwise inconclusive.
struct IteratedTable {
    std::vector<double> outer, inner;
    std::vector<double> values;
    std::vector<double> argmax_x;  // optional, same layout
    bool outer_is_l = true;        // names the axes in the witness
    double threshold = 0.2;
    std::string label;
};
Verdict iterated_limit_verdict(const IteratedTable& tab);

// G(t) ||phi(|q(t + .)|)||_{L^p[0,1]} (variant 0), G(t) phi(||q(t+.)||) (1),
// phi(G(t) ||q(t+.)||) (2).
double stepanov_vanishing_functional(const FunctionSpec& q, const ExponentSpec& p, const PhiSpec& phi,
                                     const std::function<double(double)>& G, double t, int variant);

// lim_t of the functional on a t-grid: satisfied when the trailing values
// are non-increasing and below threshold.
Verdict stepanov_vanishing_verdict(const FunctionSpec& q, const ExponentSpec& p, const PhiSpec& phi,
                                   const std::function<double(double)>& G, int variant, const GridSpec& t_grid,
                                   double threshold);

enum class TirsenMode { ExponentPair, Constant, Crude };

// ExponentPair: 2 max(l^{inf(1/r-1/p)}, l^{sup(1/r-1/p)}) F;
// Constant: l^{1/r-1/p} F (constant exponents only); Crude: 2 (1 + l) F.
WeightSpec tirsen_transform(const WeightSpec& F, const ExponentSpec& r, const ExponentSpec& p, TirsenMode mode);

// membership_report on g and vanishing_verdict on q; satisfied iff both are.
Verdict asymptotic_decomposition_check(const FunctionSpec& g, const FunctionSpec& q, const ClassConfig& g_cfg,
                                       const VanishingConfig& q_cfg);

}  // namespace wap
