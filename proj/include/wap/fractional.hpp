#pragma once

// Fractional kernels g_zeta, Caputo and Weyl-Liouville derivatives, and
// mild solutions of the relaxation problems.

#include <optional>
#include <string>

#include "wap/funcspace.hpp"
#include "wap/verdict.hpp"

namespace wap {

struct FracConfig {
    double zeta = 0.5;             // in (0, 1]
    std::optional<double> h;       // default 1e-3 * max(1, t)
    std::optional<double> tail_T;  // Weyl-Liouville history cutoff; default: doubled until the tail bound fits
    double tol = 1e-6;             // tail tolerance on the derivative
    double quad_tol = 1e-13;
};

struct FracResult {
    double value = 0.0;
    VerdictStatus status = VerdictStatus::SatisfiedOnGrid;
    double h = 0.0;
    double tail_T = 0.0;
    double tail_bound = 0.0;  // bound on the derivative of the discarded history
    std::string note;
};

// t^{zeta-1} / Gamma(zeta).
double gamma_kernel(double zeta, double t);

// int_0^t g_zeta(t - s) g_eta(s) ds by quadrature (equals g_{zeta+eta}(t)).
double kernel_convolution(double zeta, double eta, double t, double tol = 1e-12);

// v(s) = int_0^s g_{1-zeta}(s - r) (u(r) - u(0)) dr.
double caputo_primitive(const FunctionSpec& u, double zeta, double s, double tol = 1e-13);

// d/dt v(t) by central differences with one Richardson level; zeta = 1 gives u'(t).
FracResult caputo_derivative(const FunctionSpec& u, double t, const FracConfig& cfg);

// d/dt int_0^T g_{1-zeta}(v) u(t - v) dv; zeta = 1 gives -u'(t). Inconclusive
// when the discarded history cannot be bounded below cfg.tol.
FracResult weyl_liouville_derivative(const FunctionSpec& u, double t, const FracConfig& cfg);

struct MildResult {
    Vec value;
    double s0_limit = 0.0;  // measured S(0+)
    bool continuity_ok = true;  // S(0+) u0 = u0
};

// S(t) u0 + int_0^t S(t - s) f(s) ds.
MildResult mild_solution_dfp(const KernelSpec& S, const Vec& u0, const FunctionSpec& f, double t, double tol = 1e-10);

// int_{-inf}^t R(t - s) g(s) ds.
Vec mild_solution_line(const KernelSpec& R, const FunctionSpec& g, double t, double tol = 1e-10);

}  // namespace wap
