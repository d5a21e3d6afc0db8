#pragma once

// Shared helpers for the unit tests: random inputs and independent oracles.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "wap/funcspace.hpp"

namespace wap::test {

// Random scalar piecewise-constant function with 1..max_pieces pieces on
// [lo, hi], zero outside.
inline FunctionSpec random_pwc(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0, int max_pieces = 6,
                               double amp = 3.0) {
    std::uniform_int_distribution<int> np(1, max_pieces);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = np(rng);
    std::vector<double> cuts;
    for (int i = 0; i < n - 1; ++i) cuts.push_back(lo + (hi - lo) * u(rng));
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> breaks{lo};
    for (double c : cuts)
        if (c - breaks.back() > 1e-6 && hi - c > 1e-6) breaks.push_back(c);
    breaks.push_back(hi);
    std::vector<double> vals;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) vals.push_back(amp * u(rng));
    return FunctionSpec::piecewise_constant_scalar(breaks, vals);
}

// Composite Simpson rule on each piece between the given split points;
// independent of the library quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::vector<double> splits = {},
                      int n = 2000) {
    std::vector<double> pts{a};
    std::sort(splits.begin(), splits.end());
    for (double s : splits)
        if (s > a && s < b) pts.push_back(s);
    pts.push_back(b);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double lo = pts[k], hi = pts[k + 1], h = (hi - lo) / n;
        if (!(h > 0)) continue;
        // Interior samples only at the ends to avoid jump values.
        const double e = 1e-12 * std::max(1.0, std::abs(hi - lo));
        double s = f(lo + e) + f(hi - e);
        for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
        total += s * h / 3.0;
    }
    return total;
}

inline bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace wap::test
