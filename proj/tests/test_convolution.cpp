#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "wap/convolution.hpp"

using namespace wap;
using wap::test::simpson;

namespace {

const KernelSpec kExp = KernelSpec::exp_decay(1, 1, 1);

FunctionSpec sine() {
    return FunctionSpec::callable([](double x) { return std::sin(x); }, {});
}

}  // namespace

TEST_CASE("infinite convolution examples") {
    for (double x : {-3.0, 0.0, 5.5}) CHECK(infinite_convolution(kExp, FunctionSpec::constant(1.0), x)[0] ==
                                            doctest::Approx(1.0).epsilon(1e-9));
    CHECK(infinite_convolution(KernelSpec::poly_decay(1, 1, 2), FunctionSpec::constant(1.0), 0.0)[0] ==
          doctest::Approx(M_PI / 2).epsilon(1e-8));
    for (double x : {0.0, M_PI / 2, M_PI, -2.3, 7.1})
        CHECK(infinite_convolution(kExp, sine(), x)[0] ==
              doctest::Approx((std::sin(x) - std::cos(x)) / 2).epsilon(1e-9));
}

TEST_CASE("infinite convolution against an independent Simpson oracle") {
    const auto R = KernelSpec::exp_decay(2.0, 1.0, 0.5);
    auto raw = [](double x) { return std::cos(0.7 * x) + 0.3 * std::sin(2 * x); };
    const auto g = FunctionSpec::callable(raw, {});
    for (double x : {-1.0, 0.4, 3.3}) {
        const double oracle = simpson([&](double v) { return 2.0 * std::exp(-0.5 * v) * raw(x - v); }, 0, 80, {}, 20000);
        CHECK(infinite_convolution(R, g, x)[0] == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("convolution is linear and shift equivariant") {
    // Slowly decaying kernel with exactly integrable inputs.
    const auto R = KernelSpec::poly_decay(1, 1, 2);
    const auto g1 = FunctionSpec::indicator(-1, 2), g2 = FunctionSpec::translate(3.0, FunctionSpec::heaviside());
    const auto s = FunctionSpec::sum({g1, FunctionSpec::scale(2.0, g2)});
    // Fast kernel with an oscillatory callable.
    const auto E = KernelSpec::exp_decay(2, 1, 0.5);
    const auto s2 = FunctionSpec::sum({g1, FunctionSpec::scale(2.0, sine())});
    for (double x : {-0.5, 1.0, 4.0}) {
        const double a = infinite_convolution(R, g1, x)[0], b = infinite_convolution(R, g2, x)[0];
        CHECK(infinite_convolution(R, s, x)[0] == doctest::Approx(a + 2 * b).epsilon(1e-8));
        CHECK(infinite_convolution(R, FunctionSpec::translate(1.5, g1), x)[0] ==
              doctest::Approx(infinite_convolution(R, g1, x + 1.5)[0]).epsilon(1e-9));
        const double c = infinite_convolution(E, g1, x)[0], d = infinite_convolution(E, sine(), x)[0];
        CHECK(infinite_convolution(E, s2, x)[0] == doctest::Approx(c + 2 * d).epsilon(1e-8));
    }
}

TEST_CASE("finite convolution split") {
    for (double t : {0.5, 1.0, 3.0}) {
        const auto r = finite_convolution_split(kExp, FunctionSpec::constant(1.0), FunctionSpec(), t);
        CHECK(r.H1[0] == doctest::Approx(std::exp(-t)).epsilon(1e-9));
        CHECK(std::abs(r.H2[0]) <= 1e-15);
        CHECK(r.H[0] == doctest::Approx(1 - std::exp(-t)).epsilon(1e-9));
        CHECK(std::abs(r.H[0] - (r.H2[0] + r.G[0] - r.H1[0])) <= 2e-10);
    }
    const auto z = finite_convolution_split(kExp, FunctionSpec(), FunctionSpec(), 2.0);
    CHECK(z.H[0] == 0.0);
    CHECK(z.H1[0] == 0.0);
    CHECK(z.H2[0] == 0.0);
    const auto q = finite_convolution_split(kExp, FunctionSpec(), FunctionSpec::constant(1.0), 1.0);
    CHECK(q.H2[0] == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-9));

    const auto R = KernelSpec::poly_decay(1, 0.5, 2);
    const auto sp = FunctionSpec::spike_train(AmplitudeRule::constant(1.0));
    for (double t : {2.0, 4.5, 10.0}) {
        const auto r = finite_convolution_split(R, sine(), sp, t);
        CHECK(std::abs(r.H[0] - (r.H2[0] + r.G[0] - r.H1[0])) <= 2e-9);
    }
}

TEST_CASE("series closed forms") {
    SeriesParams prm;
    const auto h = series_eval(SeriesKind::H, prm);
    const double oracle_h = std::sqrt((1 - std::exp(-2.0)) / 2) / (1 - std::exp(-1.0));
    CHECK(h.value == doctest::Approx(oracle_h).epsilon(1e-9));
    CHECK(h.value == doctest::Approx(1.040181).epsilon(1e-6));
    CHECK(h.converged);

    prm.q = ExponentSpec::constant(1.0);
    const auto w2 = series_eval(SeriesKind::W2, prm);
    CHECK(w2.value == doctest::Approx((1 - std::exp(-1.0)) / (1 - std::exp(-1.0) / 2)).epsilon(1e-9));

    prm.R = KernelSpec::table({0, 1}, {0, 0});
    for (auto k : {SeriesKind::H, SeriesKind::Hp, SeriesKind::W, SeriesKind::W2, SeriesKind::Wp})
        CHECK(series_eval(k, prm).value == 0.0);
}

TEST_CASE("sum_series tail models") {
    const auto geo = sum_series([](long k) { return std::pow(0.5, static_cast<double>(k)); }, 1e-12, 1 << 16);
    CHECK(geo.value == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(geo.converged);
    const auto pw = sum_series([](long k) { return 1.0 / ((k + 1.0) * (k + 1.0)); }, 1e-10, 1 << 16);
    CHECK(pw.value == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-6));
    const auto harm = sum_series([](long k) { return 1.0 / (k + 1.0); }, 1e-10, 1 << 12);
    CHECK_FALSE(harm.converged);
}

TEST_CASE("kernel bound examples") {
    const auto v0 = section41_bound_check(0, 1.0, 2.0, 1.0, 2.0);
    CHECK(v0.satisfied());
    CHECK(v0.lhs == doctest::Approx(M_PI / 8 + 0.25).epsilon(1e-10));
    CHECK(v0.rhs == doctest::Approx(1.0));
    const auto v3 = section41_bound_check(3, 2.0, 1.0, 1.0, 2.0);
    CHECK(v3.satisfied());
    CHECK(v3.lhs == doctest::Approx(std::atan(8.0) - std::atan(6.0)).epsilon(1e-10));
    CHECK(v3.rhs == doctest::Approx(2.0 / 37.0).epsilon(1e-12));
}

TEST_CASE("scalar convolution examples") {
    const auto box = FunctionSpec::indicator(0, 1);
    CHECK(scalar_convolution(box, FunctionSpec::constant(2.5), 0.3)[0] == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(scalar_convolution(box, FunctionSpec::heaviside(), 0.5)[0] == doctest::Approx(0.5).epsilon(1e-10));
    const auto lap = FunctionSpec::callable([](double t) { return std::exp(-std::abs(t)) / 2; },
                                            [] {
                                                CallableTraits tr;
                                                tr.kinks = {0.0};
                                                tr.sup_bound = 0.5;
                                                return tr;
                                            }());
    CHECK(scalar_convolution(lap, FunctionSpec::constant(1.0), 1.7)[0] == doctest::Approx(1.0).epsilon(1e-8));
    // Two boxes: triangle of height 1 at x = 1.
    const auto tri = scalar_convolution_function(box, box);
    CHECK(tri.norm_at(1.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(tri.norm_at(0.25) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(tri.norm_at(2.5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("zero kernels satisfy every theorem condition") {
    TheoremConfig cfg;
    cfg.R = KernelSpec::table({0, 1}, {0, 0});
    for (auto id : {TheoremId::Jensen, TheoremId::Kraj, TheoremId::Sub1})
        CHECK(check_theorem(id, cfg).all_satisfied);
    InvarianceConfig ic;
    CHECK(check_convolution_invariance(FunctionSpec::piecewise_constant_scalar({0, 1}, {0.0}), ic).all_satisfied);
}

TEST_CASE("growing target weight yields a violation") {
    TheoremConfig cfg;
    cfg.R = KernelSpec::poly_decay(1, 1, 2);
    cfg.F = WeightSpec::power_of_l(-0.5);
    cfg.F1 = WeightSpec::power_of_l(1.0);
    const auto r = check_theorem(TheoremId::Kraj, cfg);
    CHECK_FALSE(r.all_satisfied);
    REQUIRE(r.first_violation.has_value());
    CHECK(r.first_violation->value > r.first_violation->threshold);
}

TEST_CASE("the exponential kernel has a decaying S") {
    PropFiniteConfig cfg;
    const auto rep = check_prop_finite(kExp, FunctionSpec::spike_train(AmplitudeRule::constant(1.0)), cfg);
    REQUIRE(!rep.S.empty());
    for (auto [t, s] : rep.S) CHECK(s == doctest::Approx(std::exp(-t)).epsilon(1e-6));
    CHECK(rep.S_decays);
    CHECK(rep.zran_ratio == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.conclusion.satisfied());
}

TEST_CASE("conjugate exponents") {
    CHECK(conjugate_exponent(ExponentSpec::constant(2)).constant_value().value() == doctest::Approx(2.0));
    CHECK(conjugate_exponent(ExponentSpec::constant(1)).p_plus() == kInf);
    CHECK(conjugate_exponent(ExponentSpec::constant(4)).constant_value().value() == doctest::Approx(4.0 / 3));
}
