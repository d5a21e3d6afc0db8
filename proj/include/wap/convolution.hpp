#pragma once

// Convolution products against kernel norms, the series H, Hp, W, W2, Wp,
// the theorem-condition tables and the kernel growth bounds.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wap/ergodic.hpp"
#include "wap/funcspace.hpp"
#include "wap/grid.hpp"
#include "wap/verdict.hpp"

namespace wap {

// int_{v0}^{v1} R(v) h(x - v) dv. Exact sum over pieces when h is
// piecewise constant, adaptive quadrature otherwise.
Vec convolve_segment(const KernelSpec& R, const FunctionSpec& h, double x, double v0, double v1, double tol);

// G(x) = int_0^inf R(v) g(x - v) dv, tail cut where sup|g| * tail(R) < tol/2.
Vec infinite_convolution(const KernelSpec& R, const FunctionSpec& g, double x, double tol = 1e-10);

// G as a callable function (scalar g only; norm of the value otherwise).
FunctionSpec convolution_function(const KernelSpec& R, const FunctionSpec& g, double tol = 1e-10);

struct SplitResult {
    Vec H;   // int_0^t R(t-s) (g(s) + q(s)) ds, computed directly
    Vec H1;  // int_t^inf R(s) g(t-s) ds
    Vec H2;  // int_0^t R(t-s) q(s) ds
    Vec G;   // infinite convolution of g at t
};
SplitResult finite_convolution_split(const KernelSpec& R, const FunctionSpec& g, const FunctionSpec& q, double t,
                                     double tol = 1e-10);

// t -> ||H2(t)|| as a half-line function with kinks at the breakpoints of q.
FunctionSpec h2_function(const KernelSpec& R, const FunctionSpec& q, double tol = 1e-10);

enum class SeriesKind { H, Hp, W, W2, Wp };
std::string to_string(SeriesKind k);

struct SeriesParams {
    KernelSpec R = KernelSpec::exp_decay(1.0, 1.0, 1.0);
    ExponentSpec q = ExponentSpec::constant(2.0);
    std::function<double(double)> varphi;  // empty: identity
    WeightSpec F = WeightSpec::one();
    SequenceSpec a = SequenceSpec::geometric(0.5);
    std::function<double(long)> b;  // empty: 2^{-k}
    double l = 1.0;
    double x = 0.0;
    double tol = 1e-10;
    long max_terms = 1L << 16;
};

struct SeriesResult {
    double value = 0.0;  // partial sum plus estimated tail
    long terms = 0;
    double tail = 0.0;
    bool converged = false;  // a summable tail model was identified
    std::string tail_model;
};

// Generic positive series with tail extrapolation.
SeriesResult sum_series(const std::function<double(long)>& term, double tol, long max_terms);

SeriesResult series_eval(SeriesKind which, const SeriesParams& prm);

// ||varphi(|R(v + shift)|)||_{L^{q(v)}[a, b]}.
double kernel_window_norm(const KernelSpec& R, const std::function<double(double)>& varphi, const ExponentSpec& q,
                          double shift, double a, double b);

enum class TheoremId { Jensen, KrajeqWeak, Kraj, Jensenjen, Prcko, Sub1, Sub2, Napolje, Univer };
std::string to_string(TheoremId id);
std::optional<TheoremId> theorem_from_string(const std::string& s);

struct TheoremConfig {
    KernelSpec R = KernelSpec::exp_decay(1.0, 1.0, 1.0);
    ExponentSpec p = ExponentSpec::constant(2.0);
    std::optional<ExponentSpec> q;  // default: conjugate of p
    std::function<double(double)> varphi;  // empty: identity
    PhiSpec phi = PhiSpec::identity();
    WeightSpec F = WeightSpec::one();
    WeightSpec F1 = WeightSpec::one();
    SequenceSpec a = SequenceSpec::geometric(0.5);
    std::function<double(long)> b;                // empty: 2^{-k}
    std::function<double(double)> omega;          // empty: identity
    std::function<double(double, double)> S;      // empty: 1
    GridSpec l_grid = GridSpec::geometric(1.0, 64.0, 7);
    GridSpec t_grid = GridSpec::uniform(-8.0, 8.0, 5);
    std::vector<double> eps_list{0.5, 0.1};
    double tol = 1e-10;
};

struct TheoremConditionReport {
    std::string theorem;
    std::vector<DiagnosticRow> series;      // series values per (l, x)
    std::vector<DiagnosticRow> conditions;  // condition integral per (t, l[, eps])
    bool all_satisfied = true;
    std::optional<Witness> first_violation;
    std::string conclusion;
    double max_condition = 0.0;
};

// Conjugate exponent 1/p + 1/q = 1 (p = 1 gives q = inf).
ExponentSpec conjugate_exponent(const ExponentSpec& p);

TheoremConditionReport check_theorem(TheoremId id, const TheoremConfig& cfg);

// int_{kl}^{(k+1)l} t^{(beta-1)q} / (1 + t^gamma)^q dt against the closed
// form bound (k+1)^{(beta-1)q} l^{(beta-1)q+1} / (1 + (kl)^{q gamma}).
Verdict section41_bound_check(long k, double l, double q, double beta, double gamma);

// l * (sum_k (int_{kl}^{(k+1)l} ...)^{1/q})^p over the l-grid (p > 1), or
// l * sum_k sup_{[kl,(k+1)l]} t^{beta-1}/(1+t^gamma) (p = 1). Satisfied when
// the trailing values do not increase.
Verdict bluz_check(double p, double beta, double gamma, const GridSpec& l_grid);

struct PropFiniteConfig {
    ExponentSpec q_exp = ExponentSpec::constant(1.0);  // exponent of part (i)
    WeightSpec F = WeightSpec::power_of_l(-1.0);
    WeightSpec F1 = WeightSpec::power_of_l(-1.0);
    double M = 1.0;
    GridSpec s_grid = GridSpec::uniform(0.0, 16.0, 17);  // t-grid for S(t)
    VanishingConfig vcfg = [] {
        VanishingConfig c;
        c.t_grid = GridSpec::geometric(16.0, 4096.0, 9);
        c.l_grid = GridSpec::geometric(1.0, 64.0, 7);
        c.x_points = 65;
        return c;
    }();
    double threshold = 0.2;
    double tol = 1e-10;
};

struct PropFiniteReport {
    std::vector<std::pair<double, double>> S;  // (t, S(t))
    bool S_decays = false;
    Verdict hypothesis;  // iterated limit of the double-integral bound
    double zran_ratio = 0.0;
    bool zran_ok = false;
    Verdict conclusion;  // vanishing verdict of H2 with weight F1
};

PropFiniteReport check_prop_finite(const KernelSpec& R, const FunctionSpec& q, const PropFiniteConfig& cfg);

// (psi * f)(x) = int psi(x - y) f(y) dy for scalar psi.
Vec scalar_convolution(const FunctionSpec& psi, const FunctionSpec& f, double x, double tol = 1e-10);

// psi * f as a callable function (scalar f), kinks at pairwise breakpoint sums.
FunctionSpec scalar_convolution_function(const FunctionSpec& psi, const FunctionSpec& f, double tol = 1e-10);

struct InvarianceConfig {
    ExponentSpec p = ExponentSpec::constant(1.0);   // class exponent of f (q is its conjugate)
    ExponentSpec p1 = ExponentSpec::constant(1.0);  // target exponent
    std::function<double(double)> varphi;           // empty: identity
    WeightSpec F = WeightSpec::one();
    WeightSpec F1 = WeightSpec::one();
    SequenceSpec a = SequenceSpec::two_sided_geometric(0.5);
    Family family = Family::Paren;
    GridSpec l_grid = GridSpec::geometric(1.0, 16.0, 5);
    GridSpec t_grid = GridSpec::uniform(-4.0, 4.0, 3);
    bool drop_factor_two = false;  // allowed for constant exponents
    double tol = 1e-10;
};

TheoremConditionReport check_convolution_invariance(const FunctionSpec& psi, const InvarianceConfig& cfg);

}  // namespace wap
