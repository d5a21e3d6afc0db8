#pragma once

// Modular, Luxemburg norm, windowed and Stepanov-type norms, and the
// inequality checkers for variable-exponent spaces.

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wap/funcspace.hpp"
#include "wap/grid.hpp"
#include "wap/verdict.hpp"

namespace wap {

enum class NormMethod { Exact, PowerQuadrature, BisectionExact, BisectionQuadrature };

std::string to_string(NormMethod m);

struct LuxOptions {
    double tol = 1e-12;  // relative bracket width
    bool force_bisection = false;
    bool force_quadrature = false;
    quad::Options quad{};
};

struct NormResult {
    double value = 0.0;
    NormMethod method = NormMethod::Exact;
    double modular_at_value = 0.0;
    int iterations = 0;
    double error_bound = 0.0;
};

// rho(g / lambda) on [a, b] for a fixed (g, p, window). Builds the piece
// list (exact path) or a quadrature mesh once; each call is then a sum.
class ModularEvaluator {
public:
    ModularEvaluator(const FunctionSpec& g, const ExponentSpec& p, double a, double b, bool force_quadrature = false,
                     const quad::Options& qopt = {});

    double operator()(double lambda) const;
    bool exact() const { return exact_; }
    bool zero() const { return zero_; }
    // Largest sampled ||g|| (pieces or nodes, plus breakpoint samples).
    double sup_sample() const { return sup_; }
    // (int ||g||^p)^{1/p} shortcut; valid only for constant finite p.
    std::optional<double> closed_form() const;

private:
    struct Group {
        double p;
        std::vector<double> norms;
        std::vector<double> weights;
    };
    std::vector<Group> groups_;
    std::vector<double> var_norms_, var_weights_, var_exps_;
    double inf_sup_ = 0.0;  // sup ||g|| over segments where p = inf
    bool has_inf_ = false;
    bool exact_ = true;
    bool zero_ = true;
    double sup_ = 0.0;
    std::optional<double> constant_p_;
};

double modular(const FunctionSpec& g, const ExponentSpec& p, double a, double b);

NormResult luxemburg_norm(const FunctionSpec& g, const ExponentSpec& p, double a, double b,
                          const LuxOptions& opt = {});

// Norm of g on [t, t + l].
double windowed_norm(const FunctionSpec& g, const ExponentSpec& p, double t, double l, const LuxOptions& opt = {});

struct SupResult {
    double value = 0.0;
    double argmax = 0.0;
};

// sup over t-grid of ||f(. + t)||_{L^{p(x)}[0,1]} (exponent on [0,1]).
// Grid lower bound of the true sup; refined around the argmax.
SupResult stepanov_norm(const FunctionSpec& f, const ExponentSpec& p, const GridSpec& t_grid);

// As stepanov_norm with the exponent at absolute coordinates on [t, t+1].
SupResult bs_norm(const FunctionSpec& f, const ExponentSpec& p, const GridSpec& t_grid);

// ||u v||_q <= 2 ||u||_p ||v||_r with 1/q = 1/p + 1/r on [a, b].
Verdict holder_check(const FunctionSpec& u, const FunctionSpec& v, const ExponentSpec& p, const ExponentSpec& q,
                     const ExponentSpec& r, double a, double b);

// ||f||_{L^1[t,t+l]} <= 2 (1 + l) ||f||_{L^{p}[t,t+l]}.
Verdict embedding_check(const FunctionSpec& f, const ExponentSpec& p, double t, double l);

// ||g|| <= ||f|| on [a, b] (checked on samples) implies norm(g) <= norm(f).
Verdict domination_check(const FunctionSpec& f, const FunctionSpec& g, const ExponentSpec& p, double a, double b);

// phi(sum a_k x_k) vs sum a_k phi(x_k) with x_k = 0 beyond xs.size();
// direction follows phi's convexity flag (reversed for concave phi).
Verdict jensen_series_check(const PhiSpec& phi, const SequenceSpec& a, std::span<const double> xs);

// Sup over candidates, then `levels` passes of step/10 around the argmax
// (clipped to [lo, hi]). Ties go to the smallest argument. When `curve` is
// given it receives every (t, value) evaluated, sorted by t.
SupResult refine_sup(const std::function<double(double)>& fn, std::vector<double> candidates, double step,
                     double lo, double hi, int levels = 3,
                     std::vector<std::pair<double, double>>* curve = nullptr);

}  // namespace wap
