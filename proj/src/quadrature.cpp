#include "wap/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "wap/simd/kernels.hpp"

namespace wap::quad {

namespace {

constexpr int kPoints = 15;

struct GL {
    std::vector<double> x;
    std::vector<double> w;
    GL() : x(kPoints), w(kPoints) {
        const int n = kPoints;
        for (int i = 0; i < n; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 1; j <= n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
                }
                dp = n * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / dp;
                z -= dz;
                if (std::fabs(dz) < 1e-16) break;
            }
            x[i] = -z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};

const GL& gl() {
    static const GL rule;
    return rule;
}

struct Panel {
    double value;
    std::array<double, kPoints> nodes;
    std::array<double, kPoints> weights;
    double abs_value = 0.0;  // integral of |f|, for the roundoff floor
};

// Maps u in [0,1] to the original variable for graded panels.
struct Map {
    double a = 0.0, b = 1.0;
    int mode = 0;  // 0: identity, 1: singular at a, 2: singular at b
    double m = 1.0;
    void apply(double u, double& x, double& jac) const {
        if (mode == 0) {
            x = u;
            jac = 1.0;
            return;
        }
        const double h = b - a;
        const double um = std::pow(u, m);
        jac = m * h * (u > 0.0 ? um / u : (m == 1.0 ? 1.0 : 0.0));
        x = mode == 1 ? a + h * um : b - h * um;
        // Keep x off the singular endpoint when the offset rounds away.
        if (jac > 0.0) {
            if (mode == 1 && x <= a) x = std::nextafter(a, b);
            if (mode == 2 && x >= b) x = std::nextafter(b, a);
        }
    }
};

Panel panel(const Integrand& f, const Map& map, double lo, double hi, long& evals) {
    const GL& r = gl();
    Panel p{};
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    std::array<double, kPoints> vals{};
    for (int i = 0; i < kPoints; ++i) {
        double x, jac;
        map.apply(c + h * r.x[i], x, jac);
        const double fx = jac == 0.0 ? 0.0 : f(x);
        vals[i] = fx * jac;
        p.nodes[i] = x;
        p.weights[i] = h * r.w[i] * jac;
    }
    evals += kPoints;
    p.value = h * simd::dot(r.w, vals);
    for (int i = 0; i < kPoints; ++i) p.abs_value += h * r.w[i] * std::fabs(vals[i]);
    return p;
}

struct Adaptive {
    const Integrand& f;
    const Options& opt;
    Rule* rule;
    long evals = 0;
    bool converged = true;
    double err = 0.0;

    double run(const Map& map, double lo, double hi, double tol, int depth, const Panel& whole) {
        const double mid = 0.5 * (lo + hi);
        Panel left = panel(f, map, lo, mid, evals);
        Panel right = panel(f, map, mid, hi, evals);
        const double refined = left.value + right.value;
        const double diff = std::fabs(refined - whole.value);
        if (!std::isfinite(refined)) {
            converged = false;
            return refined;
        }
        const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (left.abs_value + right.abs_value);
        const bool budget = evals >= opt.max_evals;
        if (diff <= std::max({tol, opt.rel_tol * std::fabs(refined), floor}) || depth >= opt.max_depth ||
            budget || mid <= lo || mid >= hi) {
            if ((depth >= opt.max_depth || budget) && diff > tol) converged = false;
            err += diff;
            if (rule) {
                for (const Panel* p : {&left, &right}) {
                    rule->nodes.insert(rule->nodes.end(), p->nodes.begin(), p->nodes.end());
                    rule->weights.insert(rule->weights.end(), p->weights.begin(), p->weights.end());
                }
            }
            return refined;
        }
        return run(map, lo, mid, 0.5 * tol, depth + 1, left) + run(map, mid, hi, 0.5 * tol, depth + 1, right);
    }
};

double graded_power(double exponent) {
    // Substitution x = a + h u^m turns |x-a|^e into u^{m(1+e)-1}.
    const double e = std::max(exponent, -0.999);
    if (e >= 0.0) return 1.0;
    return std::min(40.0, std::ceil(2.0 / (1.0 + e)));
}

template <class Sink>
void integrate_impl(const Integrand& f, double a, double b, std::span<const double> breaks, const Options& opt,
                    std::span<const Singularity> sing, Adaptive& ad, Sink&& sink) {
    if (!(a <= b)) throw std::invalid_argument("integrate: require a <= b");
    if (a == b) return;
    if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("integrate: infinite bounds");
    std::vector<double> pts(breaks.begin(), breaks.end());
    for (const auto& s : sing) pts.push_back(s.at);
    std::sort(pts.begin(), pts.end());
    pts = clean_breaks(std::move(pts), a, b);
    pts.insert(pts.begin(), a);
    pts.push_back(b);
    const double total = b - a;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = pts[i], hi = pts[i + 1];
        if (hi <= lo) continue;
        Map map;
        double e_lo = 0.0, e_hi = 0.0;
        const double tol_close = 1e-12 * std::max(1.0, std::fabs(lo) + std::fabs(hi));
        for (const auto& s : sing) {
            if (std::fabs(s.at - lo) <= tol_close) e_lo = std::min(e_lo, s.exponent);
            if (std::fabs(s.at - hi) <= tol_close) e_hi = std::min(e_hi, s.exponent);
        }
        const double tol = std::max(opt.abs_tol * (hi - lo) / total, 1e-300);
        auto one = [&](const Map& m, double ulo, double uhi) {
            Panel whole = panel(f, m, ulo, uhi, ad.evals);
            sink(ad.run(m, ulo, uhi, tol, 0, whole));
        };
        if (e_lo < 0.0 && e_hi < 0.0) {
            const double mid = 0.5 * (lo + hi);
            one(Map{lo, mid, 1, graded_power(e_lo)}, 0.0, 1.0);
            one(Map{mid, hi, 2, graded_power(e_hi)}, 0.0, 1.0);
        } else if (e_lo < 0.0) {
            one(Map{lo, hi, 1, graded_power(e_lo)}, 0.0, 1.0);
        } else if (e_hi < 0.0) {
            one(Map{lo, hi, 2, graded_power(e_hi)}, 0.0, 1.0);
        } else {
            one(Map{}, lo, hi);
        }
    }
}

}  // namespace

const std::vector<double>& gl_nodes() { return gl().x; }
const std::vector<double>& gl_weights() { return gl().w; }

std::vector<double> clean_breaks(std::vector<double> pts, double a, double b, double eps) {
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double x : pts) {
        if (!(x > a + eps && x < b - eps)) continue;
        if (!out.empty() && x - out.back() <= eps * std::max(1.0, std::fabs(x))) continue;
        out.push_back(x);
    }
    return out;
}

Result integrate(const Integrand& f, double a, double b, std::span<const double> breaks, const Options& opt,
                 std::span<const Singularity> sing) {
    Adaptive ad{f, opt, nullptr};
    double sum = 0.0;
    integrate_impl(f, a, b, breaks, opt, sing, ad, [&](double v) { sum += v; });
    return {sum, ad.err, ad.evals, ad.converged};
}

Rule adaptive_rule(const Integrand& f, double a, double b, std::span<const double> breaks, const Options& opt,
                   std::span<const Singularity> sing) {
    Rule rule;
    Adaptive ad{f, opt, &rule};
    integrate_impl(f, a, b, breaks, opt, sing, ad, [](double) {});
    return rule;
}

}  // namespace wap::quad
