#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "wap/ergodic.hpp"

using namespace wap;

namespace {

FunctionSpec spikes_one() { return FunctionSpec::spike_train(AmplitudeRule::constant(1.0)); }
FunctionSpec spikes_sqrt() { return FunctionSpec::spike_train(AmplitudeRule::sqrt_n()); }

// int_a^b sum_n amp(n)^p chi_[n^2, n^2+1], by direct overlap counting.
double spike_mass(double a, double b, double p, bool sqrt_amp) {
    double s = 0.0;
    for (long n = 0; static_cast<double>(n * n) < b; ++n) {
        const double lo = std::max(a, static_cast<double>(n * n)), hi = std::min(b, static_cast<double>(n * n + 1));
        if (hi > lo) s += (hi - lo) * std::pow(sqrt_amp ? std::sqrt(static_cast<double>(n)) : 1.0, p);
    }
    return s;
}

IteratedTable table(std::vector<double> outer, std::vector<double> inner, double (*fn)(double, double)) {
    IteratedTable t;
    t.outer = outer;
    t.inner = inner;
    for (double o : outer)
        for (double i : inner) t.values.push_back(fn(o, i));
    return t;
}

}  // namespace

TEST_CASE("vanishing functional examples") {
    VanishingConfig cfg;
    cfg.weight = WeightSpec::power_of_l(-1.0);
    CHECK(vanishing_functional(spikes_one(), cfg, 1.0, 0.0).value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(vanishing_functional(FunctionSpec(), cfg, 4.0, 10.0).value == 0.0);
}

TEST_CASE("window values match direct overlap counting") {
    VanishingConfig cfg;
    for (double p : {1.0, 2.0})
        for (double t : {0.0, 3.0, 50.0, 1000.0})
            for (double l : {0.5, 2.0, 17.0, 120.0})
                for (double x : {0.0, 0.7, 9.0, 64.0}) {
                    cfg.p = ExponentSpec::constant(p);
                    const double o1 = std::pow(spike_mass(t + x, t + x + l, p, false), 1.0 / p);
                    const double o2 = std::pow(spike_mass(t + x, t + x + l, p, true), 1.0 / p);
                    CHECK(vanishing_window(spikes_one(), cfg, l, t, x) == doctest::Approx(o1).epsilon(1e-10));
                    CHECK(vanishing_window(spikes_sqrt(), cfg, l, t, x) == doctest::Approx(o2).epsilon(1e-10));
                }
}

TEST_CASE("the spike-train upper bound holds on a grid") {
    VanishingConfig cfg;
    int bad = 0;
    for (double t : {0.0, 1.0, 10.0, 100.0, 1000.0, 10000.0})
        for (double l : {0.5, 1.0, 5.0, 20.0, 100.0, 500.0})
            for (double x : {0.0, 0.5, 3.7, 25.0, 99.0}) {
                const double bound = 2.0 + l / (std::sqrt(t) + std::sqrt(l));
                if (vanishing_window(spikes_one(), cfg, l, t, x) > bound + 1e-9) ++bad;
            }
    CHECK(bad == 0);
}

TEST_CASE("vanishing verdicts for spike trains") {
    VanishingConfig e;
    e.weight = WeightSpec::power_of_l(-0.5);
    CHECK(vanishing_verdict(spikes_one(), e).satisfied());
    e.weight = WeightSpec::one();
    CHECK(vanishing_verdict(spikes_one(), e).violated());

    VanishingConfig w = weyl_order_defaults();
    w.weight = WeightSpec::power_of_l(-1.0);
    CHECK(vanishing_verdict(spikes_sqrt(), w).satisfied());

    VanishingConfig e2;
    e2.weight = WeightSpec::power_of_l(-1.0);
    const auto v = vanishing_verdict(spikes_sqrt(), e2);
    CHECK(v.violated());
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->value > v.witness->threshold);
}

TEST_CASE("Stepanov vanishing functional examples") {
    const auto decay = FunctionSpec::callable([](double t) { return std::exp(-t); }, {});
    const auto p1 = ExponentSpec::constant(1);
    const auto id = PhiSpec::identity();
    CHECK(stepanov_vanishing_functional(decay, p1, id, {}, 0.0, 0) ==
          doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-10));
    CHECK(stepanov_vanishing_functional(FunctionSpec(), p1, id, {}, 3.0, 0) == 0.0);
    for (long n : {1L, 4L, 30L})
        CHECK(stepanov_vanishing_functional(spikes_one(), p1, id, {}, static_cast<double>(n * n), 0) ==
              doctest::Approx(1.0).epsilon(1e-12));
    const auto grid = GridSpec::geometric(1, 4096, 13);
    CHECK(stepanov_vanishing_verdict(decay, p1, id, {}, 0, grid, 0.2).satisfied());
    CHECK_FALSE(stepanov_vanishing_verdict(spikes_one(), p1, id, {}, 0, GridSpec::points({1, 4, 16, 64, 256, 1024}),
                                           0.2)
                    .satisfied());
}

TEST_CASE("tirsen transforms") {
    const auto F = WeightSpec::power_of_l(-1);
    const auto c = tirsen_transform(F, ExponentSpec::constant(1), ExponentSpec::constant(2), TirsenMode::Constant);
    for (double l : {0.5, 4.0, 16.0}) CHECK(c(l, 0) == doctest::Approx(std::pow(l, -0.5)).epsilon(1e-12));
    const auto cr = tirsen_transform(WeightSpec::one(), ExponentSpec::constant(1), ExponentSpec::constant(2),
                                     TirsenMode::Crude);
    CHECK(cr(3.0, 0) == doctest::Approx(8.0));
    const auto eq = tirsen_transform(F, ExponentSpec::constant(2), ExponentSpec::constant(2), TirsenMode::ExponentPair);
    CHECK(eq(5.0, 1.0) == doctest::Approx(0.4));
}

TEST_CASE("synthetic iterated tables") {
    const std::vector<double> outer{1, 2, 4, 8, 16, 32}, inner{16, 64, 256, 1024, 4096};
    // Decays in the outer variable, flat in the inner one.
    auto t1 = table(outer, inner, [](double o, double) { return 1.0 / o; });
    CHECK(iterated_limit_verdict(t1).satisfied());
    // Inner growth everywhere.
    auto t2 = table(outer, inner, [](double, double i) { return std::sqrt(i); });
    const auto v2 = iterated_limit_verdict(t2);
    CHECK(v2.violated());
    REQUIRE(v2.witness.has_value());
    CHECK(*v2.witness->t == 4096.0);
    // Flat above threshold.
    auto t3 = table(outer, inner, [](double, double) { return 1.0; });
    CHECK(iterated_limit_verdict(t3).violated());
    // Oscillating outer values straddling the threshold.
    auto t4 = table({1, 2, 4, 8, 16, 24, 32}, inner, [](double o, double) { return o == 24 ? 0.5 : 0.05; });
    CHECK(iterated_limit_verdict(t4).status == VerdictStatus::Inconclusive);
    // Outer values below threshold but not monotone, inner values decaying.
    auto t5 = table(outer, inner, [](double o, double i) { return (o == 16 ? 0.05 : 0.1) * 16.0 / i; });
    CHECK(iterated_limit_verdict(t5).satisfied());
    // Size checks.
    IteratedTable bad = t1;
    bad.values.pop_back();
    CHECK_THROWS(iterated_limit_verdict(bad));
}

TEST_CASE("asymptotic decomposition") {
    ClassConfig g_cfg;
    g_cfg.equi = false;
    g_cfg.weight = WeightSpec::power_of_l(-1.0);
    VanishingConfig q_cfg = weyl_order_defaults();
    q_cfg.weight = WeightSpec::power_of_l(-1.0);
    CHECK(asymptotic_decomposition_check(FunctionSpec::heaviside(), spikes_one(), g_cfg, q_cfg).satisfied());
    ClassConfig z;
    VanishingConfig e;
    e.weight = WeightSpec::power_of_l(-1.0);
    CHECK(asymptotic_decomposition_check(FunctionSpec(), spikes_sqrt(), z, e).violated());
}
