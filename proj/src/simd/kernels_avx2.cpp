#include "wap/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace wap::simd::avx2 {

namespace {

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

__m256d ipow(__m256d x, int k) {
    switch (k) {
        case 0: return _mm256_set1_pd(1.0);
        case 1: return x;
        case 2: return _mm256_mul_pd(x, x);
        case 3: return _mm256_mul_pd(_mm256_mul_pd(x, x), x);
        default: {
            __m256d x2 = _mm256_mul_pd(x, x);
            return _mm256_mul_pd(x2, x2);
        }
    }
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double power_weighted_sum(const double* base, const double* w, std::size_t n, double p) {
    const int k = static_cast<int>(p);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    if (p == static_cast<double>(k) && k >= 0 && k <= 4) {
        for (; i + 4 <= n; i += 4)
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), ipow(_mm256_loadu_pd(base + i), k), acc);
        double s = hsum(acc);
        for (; i < n; ++i) {
            double r = 1.0;
            for (int j = 0; j < k; ++j) r *= base[i];
            s += w[i] * r;
        }
        return s;
    }
    alignas(32) double tmp[4];
    for (; i + 4 <= n; i += 4) {
        for (int j = 0; j < 4; ++j) tmp[j] = w[i + j] == 0.0 ? 0.0 : std::pow(base[i + j], p);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_load_pd(tmp), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i)
        if (w[i] != 0.0) s += w[i] * std::pow(base[i], p);
    return s;
}

void row_norms(const double* data, std::size_t rows, std::size_t dim, double* out) {
    if (dim == 1) {
        const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
        std::size_t r = 0;
        for (; r + 4 <= rows; r += 4)
            _mm256_storeu_pd(out + r, _mm256_and_pd(_mm256_loadu_pd(data + r), mask));
        for (; r < rows; ++r) out[r] = std::fabs(data[r]);
        return;
    }
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = data + r * dim;
        __m256d acc = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 4 <= dim; j += 4) {
            __m256d v = _mm256_loadu_pd(row + j);
            acc = _mm256_fmadd_pd(v, v, acc);
        }
        double s = hsum(acc);
        for (; j < dim; ++j) s += row[j] * row[j];
        out[r] = std::sqrt(s);
    }
}

void diff_row_norms(const double* a, const double* b, std::size_t rows, std::size_t dim, double* out) {
    if (dim == 1) {
        const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
        std::size_t r = 0;
        for (; r + 4 <= rows; r += 4) {
            __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + r), _mm256_loadu_pd(b + r));
            _mm256_storeu_pd(out + r, _mm256_and_pd(d, mask));
        }
        for (; r < rows; ++r) out[r] = std::fabs(a[r] - b[r]);
        return;
    }
    for (std::size_t r = 0; r < rows; ++r) {
        const double* ra = a + r * dim;
        const double* rb = b + r * dim;
        __m256d acc = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 4 <= dim; j += 4) {
            __m256d d = _mm256_sub_pd(_mm256_loadu_pd(ra + j), _mm256_loadu_pd(rb + j));
            acc = _mm256_fmadd_pd(d, d, acc);
        }
        double s = hsum(acc);
        for (; j < dim; ++j) {
            const double d = ra[j] - rb[j];
            s += d * d;
        }
        out[r] = std::sqrt(s);
    }
}

ArgMax argmax(const double* v, std::size_t n) {
    if (n < 8) return scalar::argmax(v, n);
    __m256d best = _mm256_set1_pd(-INFINITY);
    __m256d best_idx = _mm256_set1_pd(-1.0);
    __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d step = _mm256_set1_pd(4.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(v + i);
        __m256d gt = _mm256_cmp_pd(x, best, _CMP_GT_OQ);
        // -inf entries never beat the initial -inf; track the first one separately below.
        best = _mm256_blendv_pd(best, x, gt);
        best_idx = _mm256_blendv_pd(best_idx, idx, gt);
        idx = _mm256_add_pd(idx, step);
    }
    alignas(32) double bv[4];
    alignas(32) double bi[4];
    _mm256_store_pd(bv, best);
    _mm256_store_pd(bi, best_idx);
    ArgMax out{0, -INFINITY};
    bool found = false;
    for (int j = 0; j < 4; ++j) {
        if (bi[j] < 0.0) continue;
        const auto id = static_cast<std::size_t>(bi[j]);
        if (!found || bv[j] > out.value || (bv[j] == out.value && id < out.index)) {
            out = {id, bv[j]};
            found = true;
        }
    }
    for (; i < n; ++i) {
        if (std::isnan(v[i])) continue;
        if (!found || v[i] > out.value) {
            out = {i, v[i]};
            found = true;
        }
    }
    if (!found || out.value == -INFINITY) return scalar::argmax(v, n);
    return out;
}

}  // namespace wap::simd::avx2
