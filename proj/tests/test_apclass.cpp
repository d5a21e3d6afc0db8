#include <cmath>
#include <vector>

#include "doctest.h"
#include "wap/apclass.hpp"

using namespace wap;

namespace {

// psi(l) = l^sigma with p = 1 gives F = l^{-sigma}.
ClassConfig power_class(double sigma, bool equi) {
    ClassConfig c;
    c.weight = WeightSpec::power_of_l(-sigma);
    c.equi = equi;
    return c;
}

}  // namespace

TEST_CASE("find_period examples") {
    const auto chi = FunctionSpec::indicator(0, 0.5);
    const auto s1 = find_period(chi, 0.1, 10.0, 5.0, 10.0, power_class(1.0, true));
    REQUIRE(s1.tau.has_value());
    CHECK(*s1.tau >= 5.0);
    CHECK(*s1.tau <= 15.0);

    const auto sine = FunctionSpec::sinusoid(1.0);
    const auto s2 = find_period(sine, 1e-6, 1.0, 5.0, 3.0, power_class(0.0, true));
    REQUIRE(s2.tau.has_value());
    CHECK(*s2.tau == doctest::Approx(2 * M_PI).epsilon(1e-9));

    const auto s3 = find_period(FunctionSpec::heaviside(), 0.1, 1.0, 5.0, 1.0, power_class(0.0, true));
    CHECK_FALSE(s3.tau.has_value());
    CHECK(s3.best_value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s3.tried > 0);
}

TEST_CASE("a larger epsilon never loses a period") {
    const auto chi = FunctionSpec::indicator(0, 0.5);
    const auto cfg = power_class(0.0, true);
    bool found_before = false;
    for (double eps : {0.05, 0.2, 0.4, 0.6, 1.0}) {
        const bool found = find_period(chi, eps, 1.0, 10.0, 1.0, cfg).tau.has_value();
        if (found_before) CHECK(found);
        found_before = found_before || found;
    }
    CHECK(found_before);
}

TEST_CASE("membership verdicts for the indicator") {
    const auto chi = FunctionSpec::indicator(0, 0.5);
    CHECK(membership_report(chi, power_class(1.0, true)).satisfied());

    ClassConfig cc = power_class(0.0, true);
    cc.scan_range = std::make_pair(10.0, 20.0);
    const auto v = membership_report(chi, cc);
    REQUIRE(v.violated());
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->value > v.witness->threshold);
    // The witness must survive an independent single seminorm evaluation.
    CHECK(recheck_witness(chi, cc, *v.witness) > v.witness->threshold);
    CHECK(recheck_witness(chi, cc, *v.witness) == doctest::Approx(v.witness->value).epsilon(1e-9));
}

TEST_CASE("membership verdicts for the Heaviside function") {
    const auto H = FunctionSpec::heaviside();
    const auto e = membership_report(H, power_class(1.0, true));
    CHECK(e.violated());
    if (e.witness) CHECK(recheck_witness(H, power_class(1.0, true), *e.witness) > e.witness->threshold);
    CHECK(membership_report(H, power_class(1.0, false)).satisfied());
}

TEST_CASE("zero and periodic functions are members") {
    for (bool equi : {true, false}) {
        CHECK(membership_report(FunctionSpec(), power_class(0.0, equi)).satisfied());
        CHECK(membership_report(FunctionSpec::sinusoid(1.0), power_class(0.0, equi)).satisfied());
    }
    ClassConfig br = power_class(0.0, true);
    br.family = Family::Bracket;
    CHECK(membership_report(FunctionSpec::sinusoid(2.0), br).satisfied());
}

TEST_CASE("interval starts") {
    ClassConfig cfg = power_class(0.0, true);
    cfg.window_count = 4;
    const auto s = interval_starts(2.0, 1.0, cfg);
    REQUIRE(!s.empty());
    cfg.scan_range = std::make_pair(10.0, 14.0);
    const auto r = interval_starts(2.0, 1.0, cfg);
    REQUIRE(!r.empty());
    for (double a : r) {
        CHECK(a >= 10.0);
        CHECK(a + 1.0 <= 14.0 + 1e-12);
    }
}
