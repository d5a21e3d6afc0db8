#include "wap/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace wap::simd {

namespace {

bool cpu_has_avx2() {
#if defined(WAP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() {
    if (const char* env = std::getenv("WAP_SIMD")) {
        if (std::string(env) == "scalar") return Isa::Scalar;
    }
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<int>& current() {
    static std::atomic<int> isa{static_cast<int>(detect())};
    return isa;
}

}  // namespace

Isa active_isa() { return static_cast<Isa>(current().load(std::memory_order_relaxed)); }

bool isa_available(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

void force_isa(Isa isa) {
    if (!isa_available(isa)) throw std::runtime_error("requested SIMD variant is not available on this CPU");
    current().store(static_cast<int>(isa));
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

#if defined(WAP_HAVE_AVX2)
#define WAP_DISPATCH(fn, ...) \
    (active_isa() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define WAP_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    return WAP_DISPATCH(dot, a.data(), b.data(), a.size());
}

double power_weighted_sum(std::span<const double> base, std::span<const double> w, double p) {
    if (base.size() != w.size()) throw std::invalid_argument("power_weighted_sum: length mismatch");
    return WAP_DISPATCH(power_weighted_sum, base.data(), w.data(), base.size(), p);
}

void row_norms(std::span<const double> data, std::size_t dim, std::span<double> out) {
    if (dim == 0 || data.size() != out.size() * dim) throw std::invalid_argument("row_norms: shape mismatch");
    WAP_DISPATCH(row_norms, data.data(), out.size(), dim, out.data());
}

void diff_row_norms(std::span<const double> a, std::span<const double> b, std::size_t dim,
                    std::span<double> out) {
    if (dim == 0 || a.size() != b.size() || a.size() != out.size() * dim)
        throw std::invalid_argument("diff_row_norms: shape mismatch");
    WAP_DISPATCH(diff_row_norms, a.data(), b.data(), out.size(), dim, out.data());
}

ArgMax argmax(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("argmax: empty input");
    return WAP_DISPATCH(argmax, v.data(), v.size());
}

}  // namespace wap::simd
