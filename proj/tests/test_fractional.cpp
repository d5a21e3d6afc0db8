#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "wap/fractional.hpp"

using namespace wap;
using wap::test::simpson;

namespace {

FunctionSpec fn(std::function<double(double)> f) { return FunctionSpec::callable(std::move(f), {}); }

// v(s) = 1/Gamma(1-z) int_0^s w^{-z} (u(s-w) - u(0)) dw with w = y^{1/(1-z)},
// which removes the kernel singularity.
double primitive_oracle(const std::function<double(double)>& u, double z, double s) {
    const double a = 1.0 / (1.0 - z);
    const double top = std::pow(s, 1.0 - z);
    const double I = simpson([&](double y) { return a * (u(s - std::pow(y, a)) - u(0.0)); }, 0, top, {}, 4000);
    return I / std::tgamma(1.0 - z);
}

// Central difference with one Richardson level at step h.
double derivative_oracle(const std::function<double(double)>& u, double z, double t, double h) {
    auto d = [&](double k) { return (primitive_oracle(u, z, t + k) - primitive_oracle(u, z, t - k)) / (2 * k); };
    return (4 * d(h / 2) - d(h)) / 3;
}

}  // namespace

TEST_CASE("gamma kernel examples") {
    CHECK(gamma_kernel(1.0, 7.3) == doctest::Approx(1.0));
    CHECK(gamma_kernel(2.0, 3.0) == doctest::Approx(3.0));
    CHECK(gamma_kernel(0.5, 1.0) == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-14));
}

TEST_CASE("semigroup identity of the kernels") {
    for (double z : {0.3, 0.5, 0.9})
        for (double e : {0.2, 0.5, 1.0})
            for (double t : {0.5, 1.0, 3.0})
                CHECK(std::abs(kernel_convolution(z, e, t) - gamma_kernel(z + e, t)) <= 1e-6);
}

TEST_CASE("Caputo derivative examples") {
    FracConfig cfg;
    cfg.zeta = 0.5;
    CHECK(std::abs(caputo_derivative(FunctionSpec::constant(2.0), 1.0, cfg).value) <= 1e-12);
    const auto id = fn([](double t) { return t; });
    CHECK(caputo_derivative(id, 1.0, cfg).value == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-6));
    cfg.zeta = 1.0;
    CHECK(caputo_derivative(id, 0.7, cfg).value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("Caputo power rule") {
    const auto id = fn([](double t) { return t; });
    FracConfig cfg;
    for (double z : {0.3, 0.5, 0.9})
        for (double t : {0.1, 0.35, 0.8, 1.3, 2.0}) {
            cfg.zeta = z;
            const double exact = std::pow(t, 1 - z) / std::tgamma(2 - z);
            CHECK(caputo_derivative(id, t, cfg).value == doctest::Approx(exact).epsilon(1e-4));
        }
}

TEST_CASE("Caputo derivative against an independent quadrature oracle") {
    const auto raw = [](double t) { return std::sin(t) + t * t; };
    const auto u = fn(raw);
    FracConfig cfg;
    for (double z : {0.3, 0.7})
        for (double t : {0.5, 1.5}) {
            cfg.zeta = z;
            const auto r = caputo_derivative(u, t, cfg);
            const double oracle = derivative_oracle(raw, z, t, r.h / 2);
            CHECK(r.value == doctest::Approx(oracle).epsilon(1e-5));
        }
}

TEST_CASE("Caputo derivative is continuous as the order tends to one") {
    const auto u = fn([](double t) { return std::sin(t); });
    FracConfig cfg;
    cfg.zeta = 1.0 - 1e-3;
    for (double t : {0.5, 1.0, 2.0}) CHECK(std::abs(caputo_derivative(u, t, cfg).value - std::cos(t)) <= 1e-2);
}

TEST_CASE("Weyl-Liouville derivative examples") {
    FracConfig cfg;
    cfg.zeta = 0.5;
    const auto ex = fn([](double t) { return std::exp(t); });
    const auto r = weyl_liouville_derivative(ex, 0.0, cfg);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.status == VerdictStatus::SatisfiedOnGrid);
    const auto c = weyl_liouville_derivative(FunctionSpec::constant(1.0), 1.0, cfg);
    CHECK(c.status == VerdictStatus::Inconclusive);
    CHECK(c.tail_bound > cfg.tol);
    cfg.zeta = 1.0;
    CHECK(weyl_liouville_derivative(fn([](double t) { return std::sin(t); }), 0.0, cfg).value ==
          doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("mild solutions") {
    const auto S = KernelSpec::exp_decay(1, 1, 1);
    for (double t : {0.0, 0.5, 2.0})
        CHECK(mild_solution_dfp(S, {1.0}, FunctionSpec(), t).value[0] == doctest::Approx(std::exp(-t)).epsilon(1e-12));
    CHECK(mild_solution_dfp(S, {0.0}, FunctionSpec::constant(1.0), 1.0).value[0] ==
          doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-9));
    CHECK(mild_solution_dfp(S, {1.0}, FunctionSpec::constant(1.0), 40.0).value[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mild_solution_dfp(S, {1.0}, FunctionSpec(), 1.0).continuity_ok);

    // Residual of u' = -u + f for f = cos, u0 = 0.5.
    const auto f = fn([](double t) { return std::cos(t); });
    auto u = [&](double t) { return mild_solution_dfp(S, {0.5}, f, t, 1e-12).value[0]; };
    const double h = 1e-4;
    for (double t : {0.3, 1.0, 2.5}) {
        const double du = (u(t + h) - u(t - h)) / (2 * h);
        CHECK(std::abs(du + u(t) - std::cos(t)) <= 1e-4);
    }

    CHECK(mild_solution_line(S, FunctionSpec::constant(1.0), 3.0)[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mild_solution_line(S, fn([](double t) { return std::sin(t); }), 0.0)[0] ==
          doctest::Approx(-0.5).epsilon(1e-9));
    const auto P = KernelSpec::poly_decay(1, 0.5, 2);
    const double a = mild_solution_line(P, FunctionSpec::constant(1.0), 0.0)[0];
    const double b = mild_solution_line(P, FunctionSpec::constant(1.0), 5.0)[0];
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
}
