#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "wap/varlebesgue.hpp"

using namespace wap;
using wap::test::random_pwc;
using wap::test::rel_close;

TEST_CASE("modular examples") {
    const auto one = FunctionSpec::indicator(0, 1);
    CHECK(modular(one, ExponentSpec::constant(2), 0, 1) == doctest::Approx(1.0));
    CHECK(modular(FunctionSpec::scale(0.5, one), ExponentSpec::constant(kInf), 0, 1) == 0.0);
    CHECK(modular(FunctionSpec::scale(2.0, one), ExponentSpec::constant(kInf), 0, 1) == kInf);
}

TEST_CASE("Luxemburg examples") {
    const auto one = FunctionSpec::indicator(0, 1);
    for (double p0 : {1.0, 1.5, 3.0, 7.0})
        CHECK(luxemburg_norm(FunctionSpec::scale(2.5, one), ExponentSpec::constant(p0), 0, 1).value ==
              doctest::Approx(2.5).epsilon(1e-12));
    CHECK(luxemburg_norm(FunctionSpec::indicator(0, 0.5), ExponentSpec::constant(2), 0, 1).value ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    const auto mixed = ExponentSpec::piecewise({0.5}, {2, 4});
    const auto r = luxemburg_norm(one, mixed, 0, 1);
    CHECK(std::abs(r.value - 1.0) <= 1e-9);
    CHECK(r.method == NormMethod::BisectionExact);
    CHECK(luxemburg_norm(FunctionSpec(), ExponentSpec::constant(2), 0, 1).value == 0.0);
    CHECK(luxemburg_norm(FunctionSpec::scale(3.0, one), ExponentSpec::constant(kInf), 0, 1).value ==
          doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("bisection agrees with the closed form") {
    std::mt19937_64 rng(314);
    LuxOptions opt;
    opt.force_bisection = true;
    int bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = random_pwc(rng);
        for (double p : {1.0, 1.5, 2.0, 4.0}) {
            const double oracle = std::pow(exact_power_integral(f, p, 0, 1), 1.0 / p);
            const auto r = luxemburg_norm(f, ExponentSpec::constant(p), 0, 1, opt);
            if (!rel_close(r.value, oracle, 1e-9)) ++bad;
        }
    }
    CHECK(bad == 0);
}

TEST_CASE("homogeneity and the unit modular at the norm") {
    std::mt19937_64 rng(17);
    const auto p = ExponentSpec::piecewise({0.3, 0.8}, {1.2, 3.0, 2.0});
    for (int trial = 0; trial < 40; ++trial) {
        const auto f = random_pwc(rng);
        const auto r = luxemburg_norm(f, p, 0, 1);
        if (r.value == 0.0) continue;
        CHECK(modular(FunctionSpec::scale(1.0 / r.value, f), p, 0, 1) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(luxemburg_norm(FunctionSpec::scale(-3.0, f), p, 0, 1).value ==
              doctest::Approx(3.0 * r.value).epsilon(1e-10));
    }
}

TEST_CASE("quadrature path matches the exact path") {
    const auto f = FunctionSpec::callable([](double x) { return x; }, {});
    // Oracle: (int_0^1 x^3)^{1/3}.
    CHECK(luxemburg_norm(f, ExponentSpec::constant(3), 0, 1).value ==
          doctest::Approx(std::pow(0.25, 1.0 / 3)).epsilon(1e-9));
    const auto v = ExponentSpec::callable([](double x) { return 1.0 + x; }, 1.0, 2.0);
    const auto r = luxemburg_norm(FunctionSpec::indicator(0, 1), v, 0, 1);
    // rho(1/lambda) = int_0^1 lambda^{-1-x} dx = 1 at lambda = 1.
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("windowed norm examples") {
    const auto d = FunctionSpec::difference(FunctionSpec::heaviside(), 1.0);
    CHECK(windowed_norm(d, ExponentSpec::constant(2), -2, 4) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(windowed_norm(FunctionSpec(), ExponentSpec::constant(3), 5, 2) == 0.0);
    CHECK(windowed_norm(FunctionSpec::indicator(0, 0.5), ExponentSpec::constant(1), 0, 1) ==
          doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("Stepanov and BS norm examples") {
    const auto grid = GridSpec::uniform(-4, 40, 177);
    CHECK(stepanov_norm(FunctionSpec::constant(1.7), ExponentSpec::constant(2), grid).value ==
          doctest::Approx(1.7).epsilon(1e-12));
    CHECK(stepanov_norm(FunctionSpec::heaviside(), ExponentSpec::constant(1), grid).value ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(stepanov_norm(FunctionSpec::spike_train(AmplitudeRule::constant(1)), ExponentSpec::constant(1),
                        GridSpec::uniform(0, 40, 161))
              .value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(bs_norm(FunctionSpec::constant(0.3), ExponentSpec::constant(4), grid).value ==
          doctest::Approx(0.3).epsilon(1e-12));
    CHECK(bs_norm(FunctionSpec::heaviside(), ExponentSpec::constant(2), grid).value ==
          doctest::Approx(1.0).epsilon(1e-12));
    const long N = 5;
    const auto s = FunctionSpec::spike_train(AmplitudeRule::sqrt_n(N));
    CHECK(bs_norm(s, ExponentSpec::constant(1), GridSpec::uniform(0, 30, 121)).value ==
          doctest::Approx(std::sqrt(5.0)).epsilon(1e-9));
}

TEST_CASE("Hoelder examples and suite") {
    const auto one = FunctionSpec::indicator(0, 1);
    const auto c2 = ExponentSpec::constant(2), c1 = ExponentSpec::constant(1);
    const auto v = holder_check(one, one, c2, c1, c2, 0, 1);
    CHECK(v.satisfied());
    CHECK(v.lhs == doctest::Approx(1.0));
    CHECK(v.rhs == doctest::Approx(2.0));
    CHECK(holder_check(FunctionSpec(), one, c2, c1, c2, 0, 1).lhs == 0.0);

    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ex(1.0, 5.0);
    int violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = random_pwc(rng), g = random_pwc(rng);
        const double p = ex(rng) + 1.0, r = ex(rng) + 1.0, q = 1.0 / (1.0 / p + 1.0 / r);
        if (!holder_check(f, g, ExponentSpec::constant(p), ExponentSpec::constant(q), ExponentSpec::constant(r), 0,
                          1)
                 .satisfied())
            ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("embedding examples and suite") {
    const auto e1 = embedding_check(FunctionSpec::indicator(0, 1), ExponentSpec::constant(2), 0, 1);
    CHECK(e1.satisfied());
    CHECK(e1.lhs == doctest::Approx(1.0));
    CHECK(e1.rhs == doctest::Approx(4.0));
    const auto e2 = embedding_check(FunctionSpec::constant(1.0), ExponentSpec::constant(3), 0, 2);
    CHECK(e2.lhs == doctest::Approx(2.0));
    CHECK(e2.rhs == doctest::Approx(6.0 * std::pow(2.0, 1.0 / 3)));

    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    int violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = random_pwc(rng, -3, 6, 8);
        const double l = u(rng), t = u(rng) - 3;
        const auto p = ExponentSpec::piecewise({t + l / 2}, {1 + u(rng), 1 + u(rng)});
        if (!embedding_check(f, p, t, l).satisfied()) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("domination suite") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = random_pwc(rng);
        const auto g = FunctionSpec::scale(u(rng), f);
        const auto p = ExponentSpec::piecewise({u(rng)}, {1 + 3 * u(rng), 1 + 3 * u(rng)});
        if (!domination_check(f, g, p, 0, 1).satisfied()) ++violations;
    }
    CHECK(violations == 0);
    // g not dominated: verdict is not satisfied.
    CHECK_FALSE(domination_check(FunctionSpec::indicator(0, 0.5), FunctionSpec::indicator(0, 1),
                                 ExponentSpec::constant(1), 0, 1)
                    .satisfied());
}

TEST_CASE("Jensen series suite") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<PhiSpec> convex{PhiSpec::catalog("square"), PhiSpec::catalog("expm1"),
                                      PhiSpec::catalog("cube"), PhiSpec::power(1.5)};
    const std::vector<PhiSpec> concave{PhiSpec::catalog("sqrt"), PhiSpec::catalog("log1p"),
                                       PhiSpec::catalog("sat"), PhiSpec::power(0.5)};
    int violations = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto a = SequenceSpec::geometric(0.05 + 0.9 * u(rng));
        std::vector<double> xs(1 + trial % 12);
        for (double& x : xs) x = 3.0 * u(rng);
        if (!jensen_series_check(convex[trial % convex.size()], a, xs).satisfied()) ++violations;
        if (!jensen_series_check(concave[trial % concave.size()], a, xs).satisfied()) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("refine_sup finds interior maxima") {
    const auto r = refine_sup([](double t) { return -(t - 0.123) * (t - 0.123); }, {0, 0.25, 0.5}, 0.25, 0, 1, 5);
    CHECK(r.argmax == doctest::Approx(0.123).epsilon(1e-3));
}
