#pragma once

// Weighted Weyl-type seminorms: paren windows [t, t+l] and bracket windows
// rescaled to [0, 1], each in three variants by where phi is applied.

#include <optional>
#include <utility>
#include <vector>

#include "wap/funcspace.hpp"
#include "wap/grid.hpp"
#include "wap/varlebesgue.hpp"

namespace wap {

enum class Family { Paren, Bracket };
// Base: F * ||phi(|D|)||; Sub1: F * phi(||D||); Sub2: phi(F * ||D||).
enum class Variant { Base, Sub1, Sub2 };

std::string to_string(Family f);
std::string to_string(Variant v);

struct SeminormRequest {
    FunctionSpec f;
    double tau = 0.0;
    ExponentSpec p = ExponentSpec::constant(1.0);
    PhiSpec phi = PhiSpec::identity();
    WeightSpec weight = WeightSpec::one();
    double l = 1.0;
    Family family = Family::Paren;
    Variant variant = Variant::Base;
    std::optional<GridSpec> t_grid;  // default_t_grid() when empty
    Domain domain = Domain::Line;
    bool refine = true;
    bool emit_curve = false;
    bool untranslated = false;  // measure f itself instead of f(. + tau) - f
    // Stop at the first t whose value exceeds this; the result is then only
    // a lower bound (still above the threshold). Anchors are tried first.
    std::optional<double> stop_above;
    LuxOptions lux{};
};

struct SeminormResult {
    double value = 0.0;
    double argmax_t = 0.0;
    std::vector<std::pair<double, double>> curve;  // (t, value), when requested
};

// Uniform step l/16 on [-T, T] (or [0, T]), T = max(8l, 64) + |tau|.
GridSpec default_t_grid(double l, double tau, Domain domain);

// Value of the seminorm expression at a single t.
double seminorm_at(const SeminormRequest& req, double t);

SeminormResult paren_seminorm(const SeminormRequest& req);
SeminormResult bracket_seminorm(const SeminormRequest& req);
// Dispatches on req.family.
SeminormResult seminorm(const SeminormRequest& req);

struct LimsupResult {
    double value = 0.0;  // max over the trailing octave of the l-grid
    double argmax_l = 0.0;
    std::vector<double> ls;
    std::vector<SeminormResult> per_l;
};

// Seminorm on each l of the grid (req.l is ignored; a fixed req.t_grid is
// reused for every l).
LimsupResult limsup_over_l(const SeminormRequest& req, const GridSpec& l_grid);

// Same windows with f itself in place of the difference.
SeminormResult untranslated_norm(const FunctionSpec& f, const ExponentSpec& p, const PhiSpec& phi,
                                 const WeightSpec& F, double l, Variant variant, Family family = Family::Paren,
                                 std::optional<GridSpec> t_grid = std::nullopt, Domain domain = Domain::Line);

enum class StevateWhich { F1, F2 };

// F1(l,t) = F(l,t) l / varphi(l);  F2(l,t) = varphi(F(l,t) l) / l.
WeightSpec stevate_transform(const WeightSpec& F, std::function<double(double)> varphi, StevateWhich which);

}  // namespace wap
