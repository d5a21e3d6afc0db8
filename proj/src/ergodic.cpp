#include "wap/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wap {

std::string to_string(LimitOrder o) { return o == LimitOrder::Equi ? "equi" : "weyl"; }

VanishingConfig weyl_order_defaults() {
    VanishingConfig c;
    c.order = LimitOrder::Weyl;
    c.t_grid = GridSpec::geometric(1.0, 256.0, 9);
    c.l_grid = GridSpec::geometric(16.0, 16384.0, 11);
    return c;
}

namespace {

constexpr double kGrowthSlope = 0.05;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(8);
    os << x;
    return os.str();
}

double apply_variant(Variant v, const PhiSpec& phi, double weight, double norm_or_phinorm) {
    switch (v) {
        case Variant::Base: return weight * norm_or_phinorm;
        case Variant::Sub1: return weight * phi(norm_or_phinorm);
        case Variant::Sub2: return phi(weight * norm_or_phinorm);
    }
    return 0.0;
}

FunctionSpec shifted_integrand(const FunctionSpec& q, const PhiSpec& phi, Variant v, double t) {
    const FunctionSpec g = FunctionSpec::translate(t, q);
    if (v == Variant::Base && !phi.is_identity()) {
        const PhiSpec ph = phi;
        return FunctionSpec::norm_map([ph](double s) { return ph(s); }, g, ph.power_exponent().value_or(1.0),
                                      ph.describe());
    }
    return g;
}

std::vector<double> x_candidates(const FunctionSpec& q, const VanishingConfig& cfg, double l, double t,
                                 double& step, double& hi) {
    if (cfg.x_grid) {
        step = cfg.x_grid->size() > 1
                   ? (cfg.x_grid->last() - cfg.x_grid->first()) / static_cast<double>(cfg.x_grid->size() - 1)
                   : 0.0;
        hi = cfg.x_grid->last();
        return cfg.x_grid->values();
    }
    hi = t + 4.0 * l;
    const int n = std::max(cfg.x_points, 2);
    const GridSpec g = GridSpec::uniform(0.0, hi, static_cast<std::size_t>(n));
    step = hi / (n - 1);
    std::vector<double> c = g.values();
    if (q.exactly_integrable()) {
        for (double b : q.breakpoints(t, t + hi + l)) {
            for (double x : {b - t, b - t - l})
                if (x >= 0.0 && x <= hi) c.push_back(x);
        }
    }
    return c;
}

bool non_increasing(const std::vector<double>& v, const std::vector<std::size_t>& idx) {
    for (std::size_t k = 1; k < idx.size(); ++k)
        if (v[idx[k]] > v[idx[k - 1]] * (1.0 + 1e-12) + 1e-15) return false;
    return true;
}

bool non_decreasing(const std::vector<double>& v, const std::vector<std::size_t>& idx) {
    for (std::size_t k = 1; k < idx.size(); ++k)
        if (v[idx[k]] < v[idx[k - 1]] * (1.0 - 1e-12) - 1e-15) return false;
    return true;
}

}  // namespace

double vanishing_window(const FunctionSpec& q, const VanishingConfig& cfg, double l, double t, double x) {
    const FunctionSpec g = shifted_integrand(q, cfg.phi, cfg.variant, t);
    return luxemburg_norm(g, cfg.p, x, x + l).value;
}

VanishingValue vanishing_functional(const FunctionSpec& q, const VanishingConfig& cfg, double l, double t) {
    if (!(l > 0.0)) throw std::invalid_argument("vanishing_functional: l must be positive");
    if (t < 0.0) throw std::invalid_argument("vanishing_functional: t must be non-negative");
    const FunctionSpec g = shifted_integrand(q, cfg.phi, cfg.variant, t);
    const double w = cfg.weight(l, t);
    double step = 0.0, hi = 0.0;
    std::vector<double> cand = x_candidates(q, cfg, l, t, step, hi);
    auto fn = [&](double x) {
        return apply_variant(cfg.variant, cfg.phi, w, luxemburg_norm(g, cfg.p, x, x + l).value);
    };
    const SupResult s = refine_sup(fn, std::move(cand), step, 0.0, hi, q.exactly_integrable() ? 0 : 3);
    return {s.value, s.argmax};
}

Verdict iterated_limit_verdict(const IteratedTable& tab) {
    const std::vector<double>& outer = tab.outer;
    const std::vector<double>& inner = tab.inner;
    const std::size_t no = outer.size(), ni = inner.size();
    if (no < 2 || ni < 2) throw std::invalid_argument("iterated limit: grids too small");
    if (tab.values.size() != no * ni) throw std::invalid_argument("iterated limit: table size mismatch");
    auto val = [&](std::size_t a, std::size_t i) { return tab.values[a * ni + i]; };
    const bool equi = tab.outer_is_l;

    Verdict vd;
    const std::vector<std::size_t> itrail = trailing_indices(inner);
    std::vector<double> A(no);
    std::vector<std::size_t> A_arg(no, itrail.front());
    for (std::size_t a = 0; a < no; ++a) {
        A[a] = -kInf;
        for (std::size_t i : itrail)
            if (val(a, i) > A[a]) {
                A[a] = val(a, i);
                A_arg[a] = i;
            }
    }
    const std::vector<std::size_t> otrail = trailing_indices(outer);
    const std::size_t last = no - 1;

    // Inner growth: the last three inner values increase strictly, with a
    // log-log slope of at least kGrowthSlope.
    auto grows = [&](std::size_t a) {
        const std::size_t k0 = ni >= 3 ? ni - 3 : 0;
        for (std::size_t i = k0 + 1; i < ni; ++i)
            if (!(val(a, i) > val(a, i - 1))) return false;
        const double v0 = val(a, k0), v1 = val(a, ni - 1);
        if (!(v0 > 0.0)) return true;
        return std::log(v1 / v0) >= kGrowthSlope * std::log(inner[ni - 1] / inner[k0]);
    };
    // Inner decay: non-increasing over the trailing inner octave.
    auto inner_decays = [&](const std::vector<std::size_t>& rows) {
        for (std::size_t a : rows) {
            if (grows(a)) return false;
            for (std::size_t k = 1; k < itrail.size(); ++k)
                if (val(a, itrail[k]) > val(a, itrail[k - 1])) return false;
        }
        return true;
    };
    auto all_below = [](const std::vector<double>& v, const std::vector<std::size_t>& idx, double thr) {
        for (std::size_t i : idx)
            if (!(v[i] <= thr)) return false;
        return true;
    };
    bool all_grow = true;
    std::size_t grow_arg = 0;
    for (std::size_t a = 0; a < no; ++a) {
        if (!grows(a)) all_grow = false;
        if (val(a, ni - 1) > val(grow_arg, ni - 1)) grow_arg = a;
    }

    const std::string order = tab.label.empty() ? std::string(equi ? "equi order" : "weyl order") : tab.label;
    auto make_witness = [&](std::size_t a, std::size_t i, const std::string& note) {
        Witness w;
        w.l = equi ? outer[a] : inner[i];
        w.t = equi ? inner[i] : outer[a];
        if (!tab.argmax_x.empty()) w.x = tab.argmax_x[a * ni + i];
        w.value = val(a, i);
        w.threshold = tab.threshold;
        w.note = note;
        return w;
    };

    for (std::size_t a = 0; a < no; ++a)
        vd.diagnostics.push_back({{{equi ? "l" : "t", outer[a]}, {"inner_limsup", A[a]}}, "outer"});
    vd.lhs = A[last];
    vd.rhs = tab.threshold;
    if (all_grow && val(grow_arg, ni - 1) > tab.threshold) {
        vd.status = VerdictStatus::ViolatedWithWitness;
        vd.witness = make_witness(grow_arg, ni - 1, "inner values keep growing at every outer grid point");
        vd.summary = order + ": inner sequence grows at every outer point (max " + fmt(val(grow_arg, ni - 1)) + ")";
    } else if (non_increasing(A, otrail) && A[last] <= tab.threshold && !grows(last)) {
        vd.status = VerdictStatus::SatisfiedOnGrid;
        vd.summary = order + ": outer values non-increasing, last " + fmt(A[last]) + " <= " + fmt(tab.threshold);
    } else if (all_below(A, otrail, tab.threshold) && inner_decays(otrail)) {
        vd.status = VerdictStatus::SatisfiedOnGrid;
        vd.summary = order + ": inner sequences decay and trailing outer values stay <= " + fmt(tab.threshold) +
                     " (last " + fmt(A[last]) + ")";
    } else if (non_decreasing(A, otrail) && A[last] > tab.threshold) {
        vd.status = VerdictStatus::ViolatedWithWitness;
        vd.witness = make_witness(last, A_arg[last], "outer limit stays above threshold");
        vd.summary = order + ": outer values non-decreasing, last " + fmt(A[last]) + " > " + fmt(tab.threshold);
    } else {
        vd.status = VerdictStatus::Inconclusive;
        vd.summary = order + ": outer values neither settle below threshold nor stay above (last " +
                     fmt(A[last]) + ")";
    }
    return vd;
}

Verdict vanishing_verdict(const FunctionSpec& q, const VanishingConfig& cfg) {
    const bool equi = cfg.order == LimitOrder::Equi;
    IteratedTable tab;
    tab.outer = equi ? cfg.l_grid.values() : cfg.t_grid.values();
    tab.inner = equi ? cfg.t_grid.values() : cfg.l_grid.values();
    tab.outer_is_l = equi;
    tab.threshold = cfg.threshold;
    if (tab.outer.size() < 2 || tab.inner.size() < 2) throw std::invalid_argument("vanishing_verdict: grids too small");
    const std::size_t no = tab.outer.size(), ni = tab.inner.size();
    std::vector<VanishingValue> vals(no * ni);
    parallel_for(no * ni, 0, [&](std::size_t k) {
        const double o = tab.outer[k / ni], i = tab.inner[k % ni];
        vals[k] = equi ? vanishing_functional(q, cfg, o, i) : vanishing_functional(q, cfg, i, o);
    });
    tab.values.resize(no * ni);
    tab.argmax_x.resize(no * ni);
    for (std::size_t k = 0; k < no * ni; ++k) {
        tab.values[k] = vals[k].value;
        tab.argmax_x[k] = vals[k].argmax_x;
    }
    Verdict vd = iterated_limit_verdict(tab);
    std::vector<DiagnosticRow> rows;
    for (std::size_t k = 0; k < no * ni; ++k) {
        const double o = tab.outer[k / ni], i = tab.inner[k % ni];
        rows.push_back({{{"l", equi ? o : i}, {"t", equi ? i : o}, {"sup_x_value", vals[k].value},
                         {"argmax_x", vals[k].argmax_x}},
                        ""});
    }
    vd.diagnostics = std::move(rows);
    return vd;
}

double stepanov_vanishing_functional(const FunctionSpec& q, const ExponentSpec& p, const PhiSpec& phi,
                                     const std::function<double(double)>& G, double t, int variant) {
    if (t < 0.0) throw std::invalid_argument("stepanov_vanishing_functional: t must be non-negative");
    if (variant < 0 || variant > 2) throw std::invalid_argument("stepanov_vanishing_functional: variant is 0, 1 or 2");
    const Variant v = variant == 0 ? Variant::Base : variant == 1 ? Variant::Sub1 : Variant::Sub2;
    const FunctionSpec g = shifted_integrand(q, phi, v, t);
    const double g_t = G ? G(t) : 1.0;
    return apply_variant(v, phi, g_t, luxemburg_norm(g, p, 0.0, 1.0).value);
}

Verdict stepanov_vanishing_verdict(const FunctionSpec& q, const ExponentSpec& p, const PhiSpec& phi,
                                   const std::function<double(double)>& G, int variant, const GridSpec& t_grid,
                                   double threshold) {
    const std::vector<double> ts = t_grid.values();
    if (ts.size() < 2) throw std::invalid_argument("stepanov_vanishing_verdict: t-grid too small");
    std::vector<double> v(ts.size());
    parallel_for(ts.size(), 0, [&](std::size_t i) { v[i] = stepanov_vanishing_functional(q, p, phi, G, ts[i], variant); });
    Verdict vd;
    for (std::size_t i = 0; i < ts.size(); ++i) vd.diagnostics.push_back({{{"t", ts[i]}, {"value", v[i]}}, ""});
    const auto tr = trailing_indices(ts);
    const double tmax = trailing_max(ts, v);
    vd.lhs = tmax;
    vd.rhs = threshold;
    if (non_increasing(v, tr) && tmax <= threshold) {
        vd.status = VerdictStatus::SatisfiedOnGrid;
        vd.summary = "trailing values non-increasing, max " + fmt(tmax);
    } else if (tmax > threshold && v[tr.back()] > threshold) {
        vd.status = VerdictStatus::ViolatedWithWitness;
        Witness w;
        w.t = ts[tr.back()];
        w.value = v[tr.back()];
        w.threshold = threshold;
        w.note = "window value at the largest t stays above threshold";
        vd.witness = w;
        vd.summary = "value " + fmt(v[tr.back()]) + " at t=" + fmt(ts[tr.back()]) + " > " + fmt(threshold);
    } else {
        vd.status = VerdictStatus::Inconclusive;
        vd.summary = "trailing values not monotone below threshold";
    }
    return vd;
}

WeightSpec tirsen_transform(const WeightSpec& F, const ExponentSpec& r, const ExponentSpec& p, TirsenMode mode) {
    std::vector<double> xs;
    for (int i = 0; i <= 1024; ++i) xs.push_back(64.0 * i / 1024.0);
    for (const auto* e : {&r, &p})
        for (double b : e->breakpoints(0.0, 64.0)) {
            xs.push_back(b);
            xs.push_back(b + 1e-9);
        }
    double lo = kInf, hi = -kInf;
    for (double x : xs) {
        const double rx = r.at(x), px = p.at(x);
        if (rx > px * (1.0 + 1e-12)) throw std::invalid_argument("tirsen_transform: need r <= p (fails at x=" + fmt(x) + ")");
        const double d = (rx == kInf ? 0.0 : 1.0 / rx) - (px == kInf ? 0.0 : 1.0 / px);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    switch (mode) {
        case TirsenMode::Crude:
            return WeightSpec::custom("2(1+l)*" + F.describe(), [F](double l, double t) { return 2.0 * (1.0 + l) * F(l, t); },
                                      F.t_independent());
        case TirsenMode::Constant: {
            if (!r.is_constant() || !p.is_constant())
                throw std::invalid_argument("tirsen_transform: constant mode needs constant exponents");
            const double e = lo;
            return WeightSpec::custom("l^" + fmt(e) + "*" + F.describe(),
                                      [F, e](double l, double t) { return std::pow(l, e) * F(l, t); }, F.t_independent());
        }
        case TirsenMode::ExponentPair:
            return WeightSpec::custom("2max(l^" + fmt(lo) + ",l^" + fmt(hi) + ")*" + F.describe(),
                                      [F, lo, hi](double l, double t) {
                                          return 2.0 * std::max(std::pow(l, lo), std::pow(l, hi)) * F(l, t);
                                      },
                                      F.t_independent());
    }
    return F;
}

Verdict asymptotic_decomposition_check(const FunctionSpec& g, const FunctionSpec& q, const ClassConfig& g_cfg,
                                       const VanishingConfig& q_cfg) {
    ClassConfig gc = g_cfg;
    gc.domain = Domain::HalfLine;
    const Verdict vg = membership_report(g, gc);
    const Verdict vq = vanishing_verdict(q, q_cfg);
    Verdict vd;
    vd.diagnostics.push_back({{{"principal_status", static_cast<double>(vg.status)}}, "principal: " + vg.summary});
    vd.diagnostics.push_back({{{"vanishing_status", static_cast<double>(vq.status)}}, "vanishing: " + vq.summary});
    if (vg.satisfied() && vq.satisfied()) {
        vd.status = VerdictStatus::SatisfiedOnGrid;
        vd.summary = "principal part and vanishing part both satisfied on grid";
    } else if (vg.violated() || vq.violated()) {
        vd.status = VerdictStatus::ViolatedWithWitness;
        vd.witness = vg.violated() ? vg.witness : vq.witness;
        vd.summary = vg.violated() ? "principal part: " + vg.summary : "vanishing part: " + vq.summary;
    } else {
        vd.status = VerdictStatus::Inconclusive;
        vd.summary = "principal: " + vg.summary + "; vanishing: " + vq.summary;
    }
    return vd;
}

}  // namespace wap
