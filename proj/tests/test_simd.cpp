#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "wap/simd/kernels.hpp"

using namespace wap;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("scalar kernels match long double loops") {
    std::mt19937_64 rng(7);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u}) {
        auto a = random_vec(rng, n, -2, 2), b = random_vec(rng, n, -2, 2), base = random_vec(rng, n, 0, 3);
        long double d = 0, pw = 0;
        for (std::size_t i = 0; i < n; ++i) {
            d += static_cast<long double>(a[i]) * b[i];
            pw += static_cast<long double>(b[i]) * std::pow(static_cast<long double>(base[i]), 2.5L);
        }
        CHECK(simd::scalar::dot(a.data(), b.data(), n) == doctest::Approx(static_cast<double>(d)).epsilon(1e-13));
        CHECK(simd::scalar::power_weighted_sum(base.data(), b.data(), n, 2.5) ==
              doctest::Approx(static_cast<double>(pw)).epsilon(1e-12));
    }
}

TEST_CASE("row norms and difference norms") {
    const std::vector<double> a{3, 4, 0, 0, 1, 1}, b{0, 0, 0, 1, 1, 0};
    std::vector<double> out(3);
    simd::row_norms(a, 2, out);
    CHECK(out[0] == 5.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == doctest::Approx(std::sqrt(2.0)));
    simd::diff_row_norms(a, b, 2, out);
    CHECK(out[0] == 5.0);
    CHECK(out[1] == 1.0);
    CHECK(out[2] == 1.0);
}

TEST_CASE("argmax takes the first maximum and skips NaN") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::vector<double> v{1, nan, 5, 2, 5, nan};
    const auto r = simd::argmax(v);
    CHECK(r.index == 2);
    CHECK(r.value == 5.0);
    const std::vector<double> w{nan, -1, -3};
    CHECK(simd::argmax(w).index == 1);
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
    if (!simd::isa_available(simd::Isa::Avx2)) {
        MESSAGE("AVX2 not available; skipped");
        return;
    }
    std::mt19937_64 rng(11);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 1024u, 1027u}) {
        auto a = random_vec(rng, n, -3, 3), b = random_vec(rng, n, -3, 3), base = random_vec(rng, n, 0, 4);
        CHECK(simd::avx2::dot(a.data(), b.data(), n) ==
              doctest::Approx(simd::scalar::dot(a.data(), b.data(), n)).epsilon(1e-12));
        for (double p : {1.0, 1.5, 2.0, 4.0, 7.25})
            CHECK(simd::avx2::power_weighted_sum(base.data(), b.data(), n, p) ==
                  doctest::Approx(simd::scalar::power_weighted_sum(base.data(), b.data(), n, p)).epsilon(1e-12));
        for (std::size_t dim : {1u, 2u, 3u, 5u}) {
            const std::size_t rows = n / dim;
            std::vector<double> o1(rows), o2(rows);
            simd::scalar::row_norms(a.data(), rows, dim, o1.data());
            simd::avx2::row_norms(a.data(), rows, dim, o2.data());
            for (std::size_t i = 0; i < rows; ++i) CHECK(o2[i] == doctest::Approx(o1[i]).epsilon(1e-14));
            simd::scalar::diff_row_norms(a.data(), b.data(), rows, dim, o1.data());
            simd::avx2::diff_row_norms(a.data(), b.data(), rows, dim, o2.data());
            for (std::size_t i = 0; i < rows; ++i) CHECK(o2[i] == doctest::Approx(o1[i]).epsilon(1e-14));
        }
        const auto s = simd::scalar::argmax(a.data(), n), v = simd::avx2::argmax(a.data(), n);
        CHECK(s.index == v.index);
    }
}

TEST_CASE("forcing the scalar path is honored by the dispatcher") {
    const simd::Isa before = simd::active_isa();
    simd::force_isa(simd::Isa::Scalar);
    CHECK(simd::active_isa() == simd::Isa::Scalar);
    const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    CHECK(simd::dot(a, b) == 32.0);
    simd::force_isa(before);
}
