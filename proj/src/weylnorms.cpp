#include "wap/weylnorms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wap {

std::string to_string(Family f) { return f == Family::Paren ? "paren" : "bracket"; }

std::string to_string(Variant v) {
    switch (v) {
        case Variant::Base: return "base";
        case Variant::Sub1: return "sub1";
        case Variant::Sub2: return "sub2";
    }
    return "?";
}

namespace {

bool half_line(const SeminormRequest& req) {
    return req.domain == Domain::HalfLine || req.f.domain() == Domain::HalfLine;
}

double t_lower(const SeminormRequest& req) { return half_line(req) ? std::max(0.0, -req.tau) : -kInf; }

// Scalar integrand ||D(x)|| before phi, in window coordinates.
FunctionSpec integrand(const SeminormRequest& req, double t) {
    if (req.family == Family::Paren) {
        if (req.untranslated) return FunctionSpec::norm_map([](double v) { return v; }, req.f, 1.0, "norm");
        return FunctionSpec::difference(req.f, req.tau);
    }
    const FunctionSpec h = FunctionSpec::affine(req.l, t, req.f);
    if (req.untranslated) return FunctionSpec::norm_map([](double v) { return v; }, h, 1.0, "norm");
    return FunctionSpec::difference(h, req.tau / req.l);
}

double combine(const SeminormRequest& req, const FunctionSpec& d, double a, double b, double weight) {
    switch (req.variant) {
        case Variant::Base: {
            if (req.phi.is_identity()) return weight * luxemburg_norm(d, req.p, a, b, req.lux).value;
            const PhiSpec phi = req.phi;
            const double power = phi.power_exponent().value_or(1.0);
            const FunctionSpec pd = FunctionSpec::norm_map([phi](double v) { return phi(v); }, d, power,
                                                           phi.describe());
            return weight * luxemburg_norm(pd, req.p, a, b, req.lux).value;
        }
        case Variant::Sub1: return weight * req.phi(luxemburg_norm(d, req.p, a, b, req.lux).value);
        case Variant::Sub2: return req.phi(weight * luxemburg_norm(d, req.p, a, b, req.lux).value);
    }
    return 0.0;
}

std::vector<double> anchors(const SeminormRequest& req, const GridSpec& grid) {
    std::vector<double> cand = grid.values();
    if (!req.f.exactly_integrable() || grid.size() == 0) return cand;
    const double lo = grid.first(), hi = grid.last();
    const double l = req.l;
    // Breakpoints of f(. + tau) and f in t-coordinates.
    std::vector<double> br = req.f.breakpoints(lo - std::fabs(req.tau), hi + l + std::fabs(req.tau));
    std::vector<double> all;
    all.reserve(2 * br.size());
    for (double b : br) {
        all.push_back(b);
        if (!req.untranslated) all.push_back(b - req.tau);
    }
    if (all.size() > 8192) return cand;
    for (double b : all)
        for (double t : {b, b - l})
            if (t >= lo && t <= hi) cand.push_back(t);
    return cand;
}

SeminormResult scan_early(const SeminormRequest& req, const std::function<double(double)>& fn, const GridSpec& grid,
                          double step) {
    const double stop = *req.stop_above;
    std::vector<double> cand = anchors(req, grid);
    // Anchors were appended after the grid; try them first.
    std::rotate(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(grid.size()), cand.end());
    SeminormResult best{-kInf, 0.0, {}};
    auto visit = [&](double t) {
        const double v = fn(t);
        if (v > best.value || (v == best.value && t < best.argmax_t)) best = {v, t, {}};
        return v > stop;
    };
    for (double t : cand)
        if (visit(t)) return best;
    const int levels = req.refine ? 3 : 0;
    for (int lev = 0; lev < levels && step > 0.0; ++lev) {
        step /= 10.0;
        const double c = best.argmax_t;
        for (int k = -10; k <= 10; ++k) {
            const double t = c + k * step;
            if (k != 0 && t >= grid.first() && t <= grid.last() && visit(t)) return best;
        }
    }
    return best;
}

SeminormResult scan(const SeminormRequest& req) {
    if (!(req.l > 0.0)) throw std::invalid_argument("seminorm: l must be positive");
    GridSpec grid = req.t_grid ? *req.t_grid : default_t_grid(req.l, req.tau, half_line(req) ? Domain::HalfLine : Domain::Line);
    const double lower = t_lower(req);
    if (grid.size() > 0 && grid.first() < lower) {
        std::vector<double> kept;
        for (double t : grid.values())
            if (t >= lower) kept.push_back(t);
        if (kept.empty()) kept.push_back(lower);
        grid = GridSpec::points(std::move(kept));
    }
    const double step = grid.size() > 1 ? (grid.last() - grid.first()) / static_cast<double>(grid.size() - 1) : 0.0;
    auto fn = [&](double t) { return seminorm_at(req, t); };
    if (req.stop_above) return scan_early(req, fn, grid, step);
    SeminormResult out;
    std::vector<std::pair<double, double>>* curve = req.emit_curve ? &out.curve : nullptr;
    const SupResult s = refine_sup(fn, anchors(req, grid), step, grid.first(), grid.last(), req.refine ? 3 : 0, curve);
    out.value = s.value;
    out.argmax_t = s.argmax;
    return out;
}

}  // namespace

GridSpec default_t_grid(double l, double tau, Domain domain) {
    if (!(l > 0.0)) throw std::invalid_argument("default_t_grid: l must be positive");
    const double T = std::max(8.0 * l, 64.0) + std::fabs(tau);
    return GridSpec::uniform_step(domain == Domain::HalfLine ? 0.0 : -T, T, l / 16.0);
}

double seminorm_at(const SeminormRequest& req, double t) {
    const double w = req.weight(req.l, t);
    if (req.family == Family::Paren) {
        const FunctionSpec d = integrand(req, t);
        return combine(req, d, t, t + req.l, w);
    }
    const FunctionSpec d = integrand(req, t);
    return combine(req, d, 0.0, 1.0, w);
}

SeminormResult paren_seminorm(const SeminormRequest& req) {
    if (req.family != Family::Paren) throw std::invalid_argument("paren_seminorm: request family is bracket");
    return scan(req);
}

SeminormResult bracket_seminorm(const SeminormRequest& req) {
    if (req.family != Family::Bracket) throw std::invalid_argument("bracket_seminorm: request family is paren");
    return scan(req);
}

SeminormResult seminorm(const SeminormRequest& req) { return scan(req); }

LimsupResult limsup_over_l(const SeminormRequest& req, const GridSpec& l_grid) {
    if (l_grid.size() < 2) throw std::invalid_argument("limsup_over_l: l-grid needs at least two points");
    LimsupResult out;
    out.ls = l_grid.values();
    out.per_l.resize(out.ls.size());
    for (std::size_t i = 0; i < out.ls.size(); ++i) {
        SeminormRequest r = req;
        r.l = out.ls[i];
        out.per_l[i] = seminorm(r);
    }
    out.value = -kInf;
    for (std::size_t i : trailing_indices(out.ls)) {
        if (out.per_l[i].value > out.value) {
            out.value = out.per_l[i].value;
            out.argmax_l = out.ls[i];
        }
    }
    return out;
}

SeminormResult untranslated_norm(const FunctionSpec& f, const ExponentSpec& p, const PhiSpec& phi,
                                 const WeightSpec& F, double l, Variant variant, Family family,
                                 std::optional<GridSpec> t_grid, Domain domain) {
    SeminormRequest req;
    req.f = f;
    req.p = p;
    req.phi = phi;
    req.weight = F;
    req.l = l;
    req.variant = variant;
    req.family = family;
    req.t_grid = std::move(t_grid);
    req.domain = domain;
    req.untranslated = true;
    return seminorm(req);
}

WeightSpec stevate_transform(const WeightSpec& F, std::function<double(double)> varphi, StevateWhich which) {
    if (!varphi) throw std::invalid_argument("stevate_transform: varphi is empty");
    if (which == StevateWhich::F1) {
        return WeightSpec::custom(
            "F1[" + F.describe() + "]",
            [F, varphi](double l, double t) { return F(l, t) * l / varphi(l); }, F.t_independent());
    }
    return WeightSpec::custom(
        "F2[" + F.describe() + "]",
        [F, varphi](double l, double t) { return varphi(F(l, t) * l) / l; }, F.t_independent());
}

}  // namespace wap
