#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "wap/funcspace.hpp"

using namespace wap;
using wap::test::random_pwc;
using wap::test::simpson;

TEST_CASE("evaluate examples") {
    CHECK(FunctionSpec::heaviside().norm_at(-1.0) == 0.0);
    CHECK(FunctionSpec::heaviside().norm_at(0.0) == 1.0);
    CHECK(FunctionSpec::indicator(0, 0.5).norm_at(0.25) == 1.0);
    CHECK(FunctionSpec::indicator(0, 0.5).norm_at(0.5) == 0.0);
    const auto s = FunctionSpec::spike_train(AmplitudeRule::sqrt_n());
    CHECK(s.norm_at(4.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(s.norm_at(3.0) == 0.0);
    CHECK(s.norm_at(9.0) == doctest::Approx(std::sqrt(3.0)));
    CHECK(FunctionSpec::spike_train(AmplitudeRule::constant(1)).norm_at(16.5) == 1.0);
}

TEST_CASE("difference examples") {
    const auto d = FunctionSpec::difference(FunctionSpec::heaviside(), 1.0);
    CHECK(d.norm_at(-1.0) == 1.0);
    CHECK(d.norm_at(-0.5) == 1.0);
    CHECK(d.norm_at(0.0) == 0.0);
    CHECK(d.norm_at(-1.5) == 0.0);
    CHECK(d.exactly_integrable());

    const auto z = FunctionSpec::difference(FunctionSpec::sinusoid(1.3), 0.0);
    for (double x : {-3.0, 0.1, 7.0}) CHECK(z.norm_at(x) == 0.0);

    const auto g = FunctionSpec::difference(FunctionSpec::indicator(0, 0.5), 0.25);
    // Oracle: enumerate the breakpoints {-0.25, 0, 0.25, 0.5} and compare pieces.
    const std::vector<std::pair<double, double>> expect{{-0.5, 0}, {-0.1, 1}, {0.1, 0}, {0.3, 1}, {0.6, 0}};
    for (auto [x, v] : expect) CHECK(g.norm_at(x) == v);
    CHECK(exact_power_integral(g, 1.0, -1, 1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("exact power integral examples") {
    CHECK(exact_power_integral(FunctionSpec::indicator(0, 0.5), 2, 0, 1) == 0.5);
    CHECK(exact_power_integral(FunctionSpec::scale(2, FunctionSpec::indicator(0, 1)), 3, 0, 1) ==
          doctest::Approx(8.0).epsilon(1e-15));
    const auto f = FunctionSpec::piecewise_constant_scalar({0, 1, 2}, {1, 3});
    CHECK(exact_power_integral(f, 2, 0, 2) == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("difference agrees with pointwise evaluation on random inputs") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto f = random_pwc(rng, -1, 1, 5);
        const double tau = u(rng), x = u(rng);
        const double direct = std::abs(f.norm_at(x + tau) - f.norm_at(x));
        CHECK(FunctionSpec::difference(f, tau).norm_at(x) == doctest::Approx(direct).epsilon(1e-14));
    }
}

TEST_CASE("exact integration matches an independent Simpson rule") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(1.0, 4.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = random_pwc(rng, 0, 2, 6);
        const double p = u(rng);
        const auto br = f.breakpoints(-0.5, 2.5);
        const double oracle = simpson([&](double x) { return std::pow(f.norm_at(x), p); }, -0.5, 2.5, br, 20);
        CHECK(exact_power_integral(f, p, -0.5, 2.5) == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("scaling is exact") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = random_pwc(rng);
        for (double c : {0.5, 2.0, -3.0}) {
            const double lhs = exact_power_integral(FunctionSpec::scale(c, f), 2.0, 0, 1);
            CHECK(lhs == doctest::Approx(c * c * exact_power_integral(f, 2.0, 0, 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("exponent spec") {
    const auto p = ExponentSpec::piecewise({0.5}, {2, 4});
    CHECK(p.at(0.25) == 2);
    CHECK(p.at(0.75) == 4);
    CHECK(p.p_minus() == 2);
    CHECK(p.p_plus() == 4);
    CHECK_FALSE(p.is_constant());
    CHECK(ExponentSpec::constant(3).constant_value().value() == 3);
    CHECK_THROWS(ExponentSpec::constant(0.5));
    CHECK(ExponentSpec::constant(kInf).p_plus() == kInf);
}

TEST_CASE("phi catalog and weights") {
    CHECK(PhiSpec::catalog("square")(3.0) == 9.0);
    CHECK(PhiSpec::power(0.5).varphi(4.0) == doctest::Approx(2.0));
    CHECK(PhiSpec::catalog("sat")(1.0) == 0.5);
    CHECK(PhiSpec::identity().inverse_sup(2.5) == doctest::Approx(2.5));
    CHECK(WeightSpec::power_of_l(-0.5)(4.0, 1.0) == doctest::Approx(0.5));
    const auto w = WeightSpec::psi_power(PsiSpec::power(1.0), ExponentSpec::constant(2.0));
    CHECK(w(9.0, 0.0) == doctest::Approx(1.0 / 3));
    const auto wb = WeightSpec::psi_bracket(PsiSpec::power(2.0), ExponentSpec::constant(1.0));
    CHECK(wb(4.0, 0.0) == doctest::Approx(0.25));
    CHECK(phi_p(kInf, 0.5) == 0.0);
    CHECK(phi_p(kInf, 2.0) == kInf);
    CHECK(phi_p(2.0, 3.0) == 9.0);
}

TEST_CASE("kernels and sequences") {
    const auto R = KernelSpec::exp_decay(1, 1, 1);
    CHECK(R.integral(0, 1) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(R.tail_integral(3.0) >= std::exp(-3.0) * (1 - 1e-12));
    const auto P = KernelSpec::poly_decay(1, 1, 2);
    CHECK(P.integral(0, 1) == doctest::Approx(std::atan(1.0)).epsilon(1e-10));
    const auto g = SequenceSpec::geometric(0.5);
    CHECK(g(0) == 0.5);
    CHECK(g.tail_mass(3) == doctest::Approx(0.125));
    const auto t = SequenceSpec::two_sided_geometric(0.5);
    double s = 0;
    for (long k = -60; k <= 60; ++k) s += t(k);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
}
