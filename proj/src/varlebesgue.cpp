#include "wap/varlebesgue.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wap/simd/kernels.hpp"

namespace wap {

std::string to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::SatisfiedOnGrid: return "satisfied-on-grid";
        case VerdictStatus::ViolatedWithWitness: return "violated-with-witness";
        case VerdictStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string to_string(NormMethod m) {
    switch (m) {
        case NormMethod::Exact: return "exact";
        case NormMethod::PowerQuadrature: return "power+quadrature";
        case NormMethod::BisectionExact: return "bisection+exact";
        case NormMethod::BisectionQuadrature: return "bisection+quadrature";
    }
    return "?";
}

namespace {

constexpr double kInfSlack = 1e-12;

std::string num(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

}  // namespace

namespace {

constexpr long kMeshEvals = 200000;   // evaluation cap of one modular mesh
constexpr double kNoiseRatio = 1e-9;  // sampled sup / declared bound below this is noise

}  // namespace

ModularEvaluator::ModularEvaluator(const FunctionSpec& g, const ExponentSpec& p, double a, double b,
                                   bool force_quadrature, const quad::Options& qopt) {
    if (!(a < b)) throw std::invalid_argument("modular: need a < b (got [" + num(a) + ", " + num(b) + "])");
    constant_p_ = p.constant_value();
    if (constant_p_ && *constant_p_ == kInf) constant_p_.reset();
    std::map<double, Group> groups;

    auto add = [&](double n, double w, double pe) {
        if (w <= 0.0) return;
        sup_ = std::max(sup_, n);
        if (n != 0.0) zero_ = false;
        if (pe == kInf) {
            has_inf_ = true;
            inf_sup_ = std::max(inf_sup_, n);
            return;
        }
        if (p.is_piecewise()) {
            auto& gr = groups[pe];
            gr.p = pe;
            gr.norms.push_back(n);
            gr.weights.push_back(w);
        } else {
            var_norms_.push_back(n);
            var_weights_.push_back(w);
            var_exps_.push_back(pe);
        }
    };

    const bool use_exact = g.exactly_integrable() && p.is_piecewise() && !force_quadrature;
    exact_ = use_exact;
    if (use_exact) {
        std::vector<double> cuts = p.breakpoints(a, b);
        std::vector<double> pts = g.breakpoints(a, b);
        pts.insert(pts.end(), cuts.begin(), cuts.end());
        pts = quad::clean_breaks(std::move(pts), a, b);
        pts.insert(pts.begin(), a);
        pts.push_back(b);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double lo = pts[i], hi = pts[i + 1];
            if (!(hi > lo)) continue;
            const double mid = 0.5 * (lo + hi);
            add(g.norm_at(mid), hi - lo, p.at(mid));
        }
    } else {
        std::vector<double> brk = g.breakpoints(a, b);
        const std::vector<double> pcuts = p.breakpoints(a, b);
        brk.insert(brk.end(), pcuts.begin(), pcuts.end());
        brk = quad::clean_breaks(std::move(brk), a, b);

        // Scale estimate so the mesh tolerance is relative.
        double scale = 0.0;
        std::vector<double> probes;
        for (int i = 0; i <= 64; ++i) probes.push_back(a + (b - a) * (i + 0.5) / 65.0);
        for (double x : brk) probes.push_back(x);
        for (double x : probes) {
            const double n = g.norm_at(std::clamp(x, a, b));
            if (std::isfinite(n)) scale = std::max(scale, n);
        }
        quad::Options o = qopt;
        o.max_evals = std::min(o.max_evals, kMeshEvals);
        // Samples far below the declared bound are cancellation noise (e.g. a
        // difference at an exact period), as are samples within the declared
        // evaluation error: one refinement level is enough.
        const std::optional<double> bound = g.sup_bound();
        if (bound && *bound > 0.0 && scale <= kNoiseRatio * *bound) o.max_evals = 0;
        if (scale <= g.noise_floor()) o.max_evals = 0;
        if (scale == 0.0) scale = 1.0;

        std::vector<quad::Singularity> sing = g.singularities(a, b);
        for (auto& s : sing) s.exponent = std::max(-0.999, s.exponent * std::min(p.p_plus(), 1e6));

        auto integrand = [&](double x) {
            const double pe = p.at(x);
            const double n = g.norm_at(x) / scale;
            if (pe == kInf) return n;
            return std::pow(n, pe);
        };
        const quad::Rule rule = quad::adaptive_rule(integrand, a, b, brk, o, sing);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = rule.nodes[i];
            add(g.norm_at(x), rule.weights[i], p.at(x));
        }
        // Extra samples for the infinite-exponent detection.
        if (p.p_plus() == kInf) {
            for (double x : probes) {
                const double xc = std::clamp(x, a, b);
                if (p.at(xc) == kInf) {
                    const double n = g.norm_at(xc);
                    has_inf_ = true;
                    inf_sup_ = std::max(inf_sup_, n);
                    if (n != 0.0) zero_ = false;
                }
            }
        }
    }
    for (auto& [pe, gr] : groups) groups_.push_back(std::move(gr));
}

double ModularEvaluator::operator()(double lambda) const {
    if (!(lambda > 0.0)) return zero_ ? 0.0 : kInf;
    if (has_inf_ && inf_sup_ / lambda > 1.0 + kInfSlack) return kInf;
    double s = 0.0;
    for (const auto& gr : groups_) {
        if (gr.p == 1.0) {
            s += simd::dot(gr.norms, gr.weights) / lambda;
            continue;
        }
        const double base = simd::power_weighted_sum(gr.norms, gr.weights, gr.p);
        if (std::isfinite(base)) {
            s += base * std::pow(lambda, -gr.p);
        } else {
            for (std::size_t i = 0; i < gr.norms.size(); ++i) s += gr.weights[i] * std::pow(gr.norms[i] / lambda, gr.p);
        }
    }
    for (std::size_t i = 0; i < var_norms_.size(); ++i)
        if (var_weights_[i] != 0.0) s += var_weights_[i] * std::pow(var_norms_[i] / lambda, var_exps_[i]);
    return s;
}

std::optional<double> ModularEvaluator::closed_form() const {
    if (!constant_p_ || has_inf_) return std::nullopt;
    const double p = *constant_p_;
    if (!var_norms_.empty()) {
        double s = 0.0;
        for (std::size_t i = 0; i < var_norms_.size(); ++i) s += var_weights_[i] * std::pow(var_norms_[i], p);
        return std::pow(s, 1.0 / p);
    }
    double s = 0.0;
    for (const auto& gr : groups_) s += simd::power_weighted_sum(gr.norms, gr.weights, p);
    return std::pow(s, 1.0 / p);
}

double modular(const FunctionSpec& g, const ExponentSpec& p, double a, double b) {
    return ModularEvaluator(g, p, a, b)(1.0);
}

NormResult luxemburg_norm(const FunctionSpec& g, const ExponentSpec& p, double a, double b, const LuxOptions& opt) {
    if (!(opt.tol > 0.0)) throw std::invalid_argument("luxemburg_norm: tol must be positive");
    ModularEvaluator rho(g, p, a, b, opt.force_quadrature, opt.quad);
    NormResult res;
    if (rho.zero()) {
        res.method = rho.exact() ? NormMethod::Exact : NormMethod::PowerQuadrature;
        return res;
    }
    if (!opt.force_bisection) {
        if (auto cf = rho.closed_form()) {
            res.value = *cf;
            res.method = rho.exact() ? NormMethod::Exact : NormMethod::PowerQuadrature;
            res.modular_at_value = rho(res.value);
            return res;
        }
    }
    res.method = rho.exact() ? NormMethod::BisectionExact : NormMethod::BisectionQuadrature;
    double lo = 1.0, hi = 1.0;
    int it = 0;
    if (rho(1.0) > 1.0) {
        int k = 0;
        while (rho(hi) > 1.0) {
            lo = hi;
            hi *= 2.0;
            if (++k > 200) throw std::runtime_error("luxemburg_norm: bracket not found after 200 doublings");
        }
    } else {
        int k = 0;
        while (rho(lo) <= 1.0) {
            hi = lo;
            lo *= 0.5;
            if (++k > 1100 || lo == 0.0) {
                res.modular_at_value = rho(hi);
                return res;
            }
        }
    }
    for (; it < 80 && (hi - lo) > opt.tol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (rho(mid) > 1.0 ? lo : hi) = mid;
    }
    res.value = hi;
    res.iterations = it;
    res.error_bound = (hi - lo) / hi;
    res.modular_at_value = rho(hi);
    return res;
}

double windowed_norm(const FunctionSpec& g, const ExponentSpec& p, double t, double l, const LuxOptions& opt) {
    if (!(l > 0.0)) throw std::invalid_argument("windowed_norm: l must be positive");
    return luxemburg_norm(g, p, t, t + l, opt).value;
}

SupResult refine_sup(const std::function<double(double)>& fn, std::vector<double> candidates, double step,
                     double lo, double hi, int levels, std::vector<std::pair<double, double>>* curve) {
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    if (candidates.empty()) throw std::invalid_argument("refine_sup: no candidates");
    std::vector<double> vals(candidates.size());
    parallel_for(candidates.size(), 0, [&](std::size_t i) { vals[i] = fn(candidates[i]); });
    const auto best = simd::argmax(vals);
    SupResult r{best.value, candidates[best.index]};
    if (std::isnan(r.value)) throw std::runtime_error("refine_sup: all evaluations are NaN");
    if (curve)
        for (std::size_t i = 0; i < candidates.size(); ++i) curve->emplace_back(candidates[i], vals[i]);
    for (int lev = 0; lev < levels && step > 0.0; ++lev) {
        step /= 10.0;
        std::vector<double> pts;
        for (int k = -10; k <= 10; ++k) {
            const double t = r.argmax + k * step;
            if (t >= lo && t <= hi && k != 0) pts.push_back(t);
        }
        std::vector<double> v(pts.size());
        parallel_for(pts.size(), 0, [&](std::size_t i) { v[i] = fn(pts[i]); });
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (v[i] > r.value || (v[i] == r.value && pts[i] < r.argmax)) r = {v[i], pts[i]};
            if (curve) curve->emplace_back(pts[i], v[i]);
        }
    }
    if (curve) std::sort(curve->begin(), curve->end());
    return r;
}

namespace {

std::vector<double> anchored_grid(const FunctionSpec& f, const GridSpec& grid, double width) {
    std::vector<double> cand = grid.values();
    if (f.exactly_integrable() && grid.size() > 0) {
        const double lo = grid.first(), hi = grid.last();
        const auto br = f.breakpoints(lo, hi + width);
        if (br.size() <= 4096)
            for (double b : br) {
                if (b >= lo && b <= hi) cand.push_back(b);
                if (b - width >= lo && b - width <= hi) cand.push_back(b - width);
            }
    }
    return cand;
}

double grid_step(const GridSpec& g) {
    if (g.size() < 2) return 0.0;
    return (g.last() - g.first()) / static_cast<double>(g.size() - 1);
}

}  // namespace

SupResult stepanov_norm(const FunctionSpec& f, const ExponentSpec& p, const GridSpec& t_grid) {
    auto fn = [&](double t) { return luxemburg_norm(FunctionSpec::translate(t, f), p, 0.0, 1.0).value; };
    return refine_sup(fn, anchored_grid(f, t_grid, 1.0), grid_step(t_grid), t_grid.first(), t_grid.last());
}

SupResult bs_norm(const FunctionSpec& f, const ExponentSpec& p, const GridSpec& t_grid) {
    auto fn = [&](double t) { return luxemburg_norm(f, p, t, t + 1.0).value; };
    return refine_sup(fn, anchored_grid(f, t_grid, 1.0), grid_step(t_grid), t_grid.first(), t_grid.last());
}

Verdict holder_check(const FunctionSpec& u, const FunctionSpec& v, const ExponentSpec& p, const ExponentSpec& q,
                     const ExponentSpec& r, double a, double b) {
    std::vector<double> xs;
    for (int i = 0; i <= 256; ++i) xs.push_back(a + (b - a) * i / 256.0);
    for (const auto* e : {&p, &q, &r})
        for (double x : e->breakpoints(a, b)) xs.push_back(x);
    for (double x : xs) {
        const double pp = p.at(x), qq = q.at(x), rr = r.at(x);
        const double lhs = qq == kInf ? 0.0 : 1.0 / qq;
        const double rhs = (pp == kInf ? 0.0 : 1.0 / pp) + (rr == kInf ? 0.0 : 1.0 / rr);
        if (std::fabs(lhs - rhs) > 1e-12)
            throw std::invalid_argument("holder_check: exponent relation 1/q = 1/p + 1/r violated at x=" + num(x));
    }
    Verdict vd;
    vd.lhs = luxemburg_norm(FunctionSpec::product(u, v), q, a, b).value;
    vd.rhs = 2.0 * luxemburg_norm(u, p, a, b).value * luxemburg_norm(v, r, a, b).value;
    const bool ok = vd.lhs <= vd.rhs * (1.0 + 1e-12) + 1e-12;
    vd.status = ok ? VerdictStatus::SatisfiedOnGrid : VerdictStatus::ViolatedWithWitness;
    vd.summary = "holder: " + num(vd.lhs) + (ok ? " <= " : " > ") + num(vd.rhs);
    if (!ok) vd.witness = Witness{.value = vd.lhs, .threshold = vd.rhs, .note = "holder"};
    return vd;
}

Verdict embedding_check(const FunctionSpec& f, const ExponentSpec& p, double t, double l) {
    if (!(l > 0.0)) throw std::invalid_argument("embedding_check: l must be positive");
    Verdict vd;
    vd.lhs = luxemburg_norm(f, ExponentSpec::constant(1.0), t, t + l).value;
    vd.rhs = 2.0 * (1.0 + l) * luxemburg_norm(f, p, t, t + l).value;
    const bool ok = vd.lhs <= vd.rhs * (1.0 + 1e-12) + 1e-12;
    vd.status = ok ? VerdictStatus::SatisfiedOnGrid : VerdictStatus::ViolatedWithWitness;
    vd.summary = "embedding: " + num(vd.lhs) + (ok ? " <= " : " > ") + num(vd.rhs);
    if (!ok) vd.witness = Witness{.l = l, .t = t, .value = vd.lhs, .threshold = vd.rhs, .note = "embedding"};
    return vd;
}

Verdict domination_check(const FunctionSpec& f, const FunctionSpec& g, const ExponentSpec& p, double a, double b) {
    std::vector<double> xs;
    for (int i = 0; i <= 512; ++i) xs.push_back(a + (b - a) * (i + 0.5) / 513.0);
    auto br = f.breakpoints(a, b);
    auto bg = g.breakpoints(a, b);
    br.insert(br.end(), bg.begin(), bg.end());
    std::sort(br.begin(), br.end());
    for (std::size_t i = 0; i + 1 < br.size(); ++i) xs.push_back(0.5 * (br[i] + br[i + 1]));
    Verdict vd;
    for (double x : xs) {
        if (g.norm_at(x) > f.norm_at(x) * (1.0 + 1e-14) + 1e-300) {
            vd.status = VerdictStatus::Inconclusive;
            vd.summary = "domination: hypothesis fails at x=" + num(x);
            return vd;
        }
    }
    vd.lhs = luxemburg_norm(g, p, a, b).value;
    vd.rhs = luxemburg_norm(f, p, a, b).value;
    const bool ok = vd.lhs <= vd.rhs + 1e-9;
    vd.status = ok ? VerdictStatus::SatisfiedOnGrid : VerdictStatus::ViolatedWithWitness;
    vd.summary = "domination: " + num(vd.lhs) + (ok ? " <= " : " > ") + num(vd.rhs);
    if (!ok) vd.witness = Witness{.value = vd.lhs, .threshold = vd.rhs, .note = "domination"};
    return vd;
}

Verdict jensen_series_check(const PhiSpec& phi, const SequenceSpec& a, std::span<const double> xs) {
    if (!phi.flags().convex && !phi.flags().concave)
        throw std::invalid_argument("jensen_series_check: phi must be declared convex or concave");
    double s = 0.0, rhs = 0.0, used = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (xs[k] < 0.0) throw std::invalid_argument("jensen_series_check: x_k must be non-negative");
        const double ak = a(static_cast<long>(k));
        s += ak * xs[k];
        rhs += ak * phi(xs[k]);
        used += ak;
    }
    rhs += std::max(0.0, 1.0 - used) * phi(0.0);
    const double lhs = phi(s);
    const double tol = 1e-12 * (std::fabs(lhs) + std::fabs(rhs)) + 1e-15;
    Verdict vd;
    vd.lhs = lhs;
    vd.rhs = rhs;
    const bool ok = phi.flags().convex ? lhs <= rhs + tol : lhs >= rhs - tol;
    vd.status = ok ? VerdictStatus::SatisfiedOnGrid : VerdictStatus::ViolatedWithWitness;
    vd.summary = std::string("jensen(") + (phi.flags().convex ? "convex" : "concave") + "): " + num(lhs) + " vs " +
                 num(rhs);
    if (!ok) vd.witness = Witness{.value = lhs, .threshold = rhs, .note = "jensen"};
    return vd;
}

}  // namespace wap
