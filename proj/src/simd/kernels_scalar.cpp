#include "wap/simd/kernels.hpp"

#include <cmath>

namespace wap::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

static double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

double power_weighted_sum(const double* base, const double* w, std::size_t n, double p) {
    double s = 0.0;
    const int k = static_cast<int>(p);
    if (p == static_cast<double>(k) && k >= 0 && k <= 4) {
        for (std::size_t i = 0; i < n; ++i) s += w[i] * ipow(base[i], k);
        return s;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] == 0.0) continue;
        s += w[i] * std::pow(base[i], p);
    }
    return s;
}

void row_norms(const double* data, std::size_t rows, std::size_t dim, double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        double s = 0.0;
        const double* row = data + r * dim;
        for (std::size_t j = 0; j < dim; ++j) s += row[j] * row[j];
        out[r] = std::sqrt(s);
    }
}

void diff_row_norms(const double* a, const double* b, std::size_t rows, std::size_t dim, double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = a[r * dim + j] - b[r * dim + j];
            s += d * d;
        }
        out[r] = std::sqrt(s);
    }
}

ArgMax argmax(const double* v, std::size_t n) {
    ArgMax best{0, -INFINITY};
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(v[i])) continue;
        if (!found || v[i] > best.value) {
            best = {i, v[i]};
            found = true;
        }
    }
    if (!found) best.value = NAN;
    return best;
}

}  // namespace wap::simd::scalar
