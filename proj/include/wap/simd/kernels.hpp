#pragma once

// Small numeric kernels shared by the quadrature and modular code.
// Each kernel has a scalar reference and, on x86-64, an AVX2 variant.
// The variant is picked once at runtime; WAP_SIMD=scalar forces the
// reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace wap::simd {

enum class Isa { Scalar, Avx2 };

struct ArgMax {
    std::size_t index = 0;
    double value = 0.0;
};

// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

// sum_i w[i] * base[i]^p for base[i] >= 0, finite p >= 0.
double power_weighted_sum(std::span<const double> base, std::span<const double> w, double p);

// Euclidean norms of rows: data is row-major with `dim` columns.
void row_norms(std::span<const double> data, std::size_t dim, std::span<double> out);

// Euclidean norms of a[i] - b[i] rows.
void diff_row_norms(std::span<const double> a, std::span<const double> b, std::size_t dim,
                    std::span<double> out);

// First index of the maximum. NaN entries are skipped.
ArgMax argmax(std::span<const double> v);

Isa active_isa();
bool isa_available(Isa isa);
// Override dispatch (tests). Throws if the ISA is not available.
void force_isa(Isa isa);
std::string_view isa_name(Isa isa);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double power_weighted_sum(const double* base, const double* w, std::size_t n, double p);
void row_norms(const double* data, std::size_t rows, std::size_t dim, double* out);
void diff_row_norms(const double* a, const double* b, std::size_t rows, std::size_t dim, double* out);
ArgMax argmax(const double* v, std::size_t n);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double power_weighted_sum(const double* base, const double* w, std::size_t n, double p);
void row_norms(const double* data, std::size_t rows, std::size_t dim, double* out);
void diff_row_norms(const double* a, const double* b, std::size_t rows, std::size_t dim, double* out);
ArgMax argmax(const double* v, std::size_t n);
}  // namespace avx2

}  // namespace wap::simd
