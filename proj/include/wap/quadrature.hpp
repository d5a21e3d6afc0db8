#pragma once

// Adaptive composite Gauss-Legendre quadrature (15-point panels).

#include <functional>
#include <span>
#include <vector>

namespace wap::quad {

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    int max_depth = 48;
    long max_evals = 4000000;  // per call; panels are accepted once exceeded
};

// Integrand behaves like |x - at|^exponent near `at` (exponent > -1).
struct Singularity {
    double at = 0.0;
    double exponent = 0.0;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

using Integrand = std::function<double(double)>;

// Integrate f over [a, b]. Panels are always split at `breaks`; panels
// touching a singularity use a graded substitution.
Result integrate(const Integrand& f, double a, double b, std::span<const double> breaks = {},
                 const Options& opt = {}, std::span<const Singularity> sing = {});

// Fixed-rule nodes accumulated by an adaptive pass. Lets callers reuse one
// mesh for a family of integrands (e.g. the modular at many scales).
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

Rule adaptive_rule(const Integrand& f, double a, double b, std::span<const double> breaks = {},
                   const Options& opt = {}, std::span<const Singularity> sing = {});

// 15-point Gauss-Legendre nodes/weights on [-1, 1].
const std::vector<double>& gl_nodes();
const std::vector<double>& gl_weights();

// Merge sorted breakpoints closer than `eps` and drop those outside (a, b).
std::vector<double> clean_breaks(std::vector<double> pts, double a, double b, double eps = 1e-12);

}  // namespace wap::quad
