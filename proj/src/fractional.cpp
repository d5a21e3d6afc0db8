#include "wap/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wap/convolution.hpp"

namespace wap {

namespace {

void check_zeta(double zeta) {
    if (!(zeta > 0.0 && zeta <= 1.0)) throw std::invalid_argument("fractional: zeta must lie in (0, 1]");
}

// Central difference of fn at t with step h, one Richardson level.
double richardson(const std::function<double(double)>& fn, double t, double h) {
    const double d1 = (fn(t + h) - fn(t - h)) / (2.0 * h);
    const double d2 = (fn(t + h / 2) - fn(t - h / 2)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

double step_for(const FracConfig& cfg, double t, bool clamp_to_origin) {
    double h = cfg.h ? *cfg.h : 1e-3 * std::max(1.0, std::fabs(t));
    if (!(h > 0.0)) throw std::invalid_argument("fractional: step must be positive");
    if (clamp_to_origin) {
        if (!(t > 0.0)) throw std::domain_error("caputo: t too close to 0");
        if (!cfg.h) h = std::min(h, t / 4.0);
        if (t - h <= 0.0) throw std::domain_error("caputo: t too close to 0 for the chosen step");
    }
    return h;
}

// int_a^b w^{-zeta} dw / Gamma(1 - zeta), a >= 0.
double g_integral(double one_minus_zeta, double a, double b) {
    return (std::pow(b, one_minus_zeta) - std::pow(a, one_minus_zeta)) / std::tgamma(one_minus_zeta + 1.0);
}

// int_0^W g_{1-zeta}(w) u(s - w) dw, minus u0 * int g when shift_u0.
double history_integral(const FunctionSpec& u, double zeta, double s, double W, double u0, double tol) {
    const double a = 1.0 - zeta;
    W = std::min(W, s - u.lower());
    if (!(W > 0.0)) return 0.0;
    if (u.exactly_integrable() && u.dimension() == 1) {
        double acc = 0.0;
        for (const Piece& pc : u.pieces(s - W, s)) {
            const double c = pc.value[0] - u0;
            if (c == 0.0) continue;
            const double w0 = std::max(0.0, s - pc.hi), w1 = std::min(W, s - pc.lo);
            if (w1 > w0) acc += c * g_integral(a, w0, w1);
        }
        return acc;
    }
    // Subtract u(s) so the integrand behaves like w^{1-zeta} at 0; the
    // removed part integrates in closed form.
    const double us = u.dimension() == 1 ? u.evaluate(s)[0] : u.norm_at(s);
    std::vector<double> br;
    for (double b : u.breakpoints(s - W, s)) br.push_back(s - b);
    for (double w = 4.0; w < W; w += std::max(4.0, W / 2048.0)) br.push_back(w);
    std::sort(br.begin(), br.end());
    br = quad::clean_breaks(std::move(br), 0.0, W);
    const quad::Singularity sing[] = {{0.0, a}};
    quad::Options opt;
    opt.abs_tol = tol;
    const double ga = std::tgamma(a);
    auto fn = [&](double w) {
        if (w <= 0.0) return 0.0;
        const double val = u.dimension() == 1 ? u.evaluate(s - w)[0] : u.norm_at(s - w);
        return std::pow(w, -zeta) / ga * (val - us);
    };
    return quad::integrate(fn, 0.0, W, br, opt, sing).value + (us - u0) * g_integral(a, 0.0, W);
}

double scalar_at(const FunctionSpec& u, double x) { return u.dimension() == 1 ? u.evaluate(x)[0] : u.norm_at(x); }

}  // namespace

double gamma_kernel(double zeta, double t) {
    if (!(t > 0.0)) throw std::domain_error("gamma_kernel: t must be positive");
    if (!(zeta > 0.0)) throw std::invalid_argument("gamma_kernel: zeta must be positive");
    return std::pow(t, zeta - 1.0) / std::tgamma(zeta);
}

double kernel_convolution(double zeta, double eta, double t, double tol) {
    if (!(t > 0.0)) throw std::domain_error("kernel_convolution: t must be positive");
    // Each half is integrated in the variable that vanishes at its singular
    // end, so t - s never loses digits near s = t.
    quad::Options opt;
    opt.abs_tol = tol;
    const double h = t / 2;
    const quad::Singularity s_eta[] = {{0.0, eta - 1.0}};
    const quad::Singularity s_zeta[] = {{0.0, zeta - 1.0}};
    auto left = [&](double s) { return s <= 0.0 ? 0.0 : gamma_kernel(zeta, t - s) * gamma_kernel(eta, s); };
    auto right = [&](double w) { return w <= 0.0 ? 0.0 : gamma_kernel(zeta, w) * gamma_kernel(eta, t - w); };
    return quad::integrate(left, 0.0, h, {}, opt, s_eta).value + quad::integrate(right, 0.0, h, {}, opt, s_zeta).value;
}

double caputo_primitive(const FunctionSpec& u, double zeta, double s, double tol) {
    check_zeta(zeta);
    if (zeta == 1.0) throw std::invalid_argument("caputo_primitive: zeta must be < 1");
    if (s <= 0.0) return 0.0;
    if (u.lower() > 0.0) throw std::invalid_argument("caputo: u must be defined at 0");
    const double u0 = scalar_at(u, 0.0);
    return history_integral(u, zeta, s, s, u0, tol);
}

FracResult caputo_derivative(const FunctionSpec& u, double t, const FracConfig& cfg) {
    check_zeta(cfg.zeta);
    FracResult r;
    r.h = step_for(cfg, t, true);
    if (cfg.zeta == 1.0) {
        r.value = richardson([&](double s) { return scalar_at(u, s); }, t, r.h);
        r.note = "ordinary derivative";
        return r;
    }
    r.value = richardson([&](double s) { return caputo_primitive(u, cfg.zeta, s, cfg.quad_tol); }, t, r.h);
    return r;
}

FracResult weyl_liouville_derivative(const FunctionSpec& u, double t, const FracConfig& cfg) {
    check_zeta(cfg.zeta);
    if (u.lower() > -kInf) throw std::invalid_argument("weyl_liouville: u must be defined on the line");
    FracResult r;
    r.h = step_for(cfg, t, false);
    if (cfg.zeta == 1.0) {
        r.value = -richardson([&](double s) { return scalar_at(u, s); }, t, r.h);
        r.note = "minus the ordinary derivative";
        return r;
    }
    const double zeta = cfg.zeta;
    const double g1 = 1.0 / std::tgamma(1.0 - zeta);
    // Derivative of the discarded history is at most 2 sup|u| g_{1-zeta}(T - h)
    // with the sup taken over the discarded part.
    auto tail_bound = [&](double T) {
        const double hi = t + r.h - T + r.h;
        const double lo = hi - 16.0 * T;
        double m = 0.0;
        for (int i = 0; i <= 4096; ++i) m = std::max(m, u.norm_at(lo + (hi - lo) * i / 4096.0));
        return 2.0 * m * g1 * std::pow(T - 2.0 * r.h, -zeta);
    };
    double T = cfg.tail_T ? *cfg.tail_T : 64.0;
    double tb = tail_bound(T);
    if (!cfg.tail_T)
        while (tb > cfg.tol && T < 1048576.0) {
            T *= 2.0;
            tb = tail_bound(T);
        }
    r.tail_T = T;
    r.tail_bound = tb;
    r.value = richardson([&](double s) { return history_integral(u, zeta, s, T, 0.0, cfg.quad_tol); }, t, r.h);
    if (tb > cfg.tol) {
        r.status = VerdictStatus::Inconclusive;
        r.note = "history tail does not vanish: derivative bound " + std::to_string(tb) + " exceeds tolerance";
    }
    return r;
}

MildResult mild_solution_dfp(const KernelSpec& S, const Vec& u0, const FunctionSpec& f, double t, double tol) {
    if (t < 0.0) throw std::invalid_argument("mild_solution_dfp: t must be >= 0");
    if (!u0.empty() && u0.size() != f.dimension()) throw std::invalid_argument("mild_solution_dfp: dimension mismatch");
    MildResult m;
    m.s0_limit = S.value_at_zero_plus();
    m.continuity_ok = std::fabs(m.s0_limit - 1.0) <= 1e-9;
    m.value = convolve_segment(S, f, t, 0.0, t, tol);
    const double st = t > 0.0 ? S(t) : m.s0_limit;
    for (std::size_t i = 0; i < u0.size(); ++i) m.value[i] += st * u0[i];
    return m;
}

Vec mild_solution_line(const KernelSpec& R, const FunctionSpec& g, double t, double tol) {
    return infinite_convolution(R, g, t, tol);
}

}  // namespace wap
