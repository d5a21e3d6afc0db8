#include "wap/apclass.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wap {

namespace {

SeminormRequest base_request(const FunctionSpec& f, double l, double tau, const ClassConfig& cfg) {
    SeminormRequest r;
    r.f = f;
    r.tau = tau;
    r.p = cfg.p;
    r.phi = cfg.phi;
    r.weight = cfg.weight;
    r.l = l;
    r.family = cfg.family;
    r.variant = cfg.variant;
    r.t_grid = cfg.t_grid;
    r.domain = cfg.domain;
    return r;
}

double tau_step(double eps, double L, const ClassConfig& cfg) {
    if (cfg.tau_step) {
        if (!(*cfg.tau_step > 0.0)) throw std::invalid_argument("tau step must be positive");
        return *cfg.tau_step;
    }
    return L * std::clamp(eps / 4.0, 1.0 / 1024.0, 1.0 / 8.0);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(8);
    os << x;
    return os.str();
}

}  // namespace

PeriodValue period_value(const FunctionSpec& f, double l, double tau, const ClassConfig& cfg,
                         std::optional<double> stop_above) {
    if (cfg.equi) {
        SeminormRequest r = base_request(f, l, tau, cfg);
        r.stop_above = stop_above;
        return {seminorm(r).value, l};
    }
    const std::vector<double> ls = cfg.limsup_l_grid.values();
    if (ls.size() < 2) throw std::invalid_argument("limsup l-grid needs at least two points");
    PeriodValue out{-kInf, 0.0};
    for (std::size_t i : trailing_indices(ls)) {
        SeminormRequest r = base_request(f, ls[i], tau, cfg);
        r.stop_above = stop_above;
        const double v = seminorm(r).value;
        if (v > out.value) out = {v, ls[i]};
        if (stop_above && v > *stop_above) break;
    }
    return out;
}

PeriodSearch find_period(const FunctionSpec& f, double eps, double l, double a, double L, const ClassConfig& cfg) {
    if (!(L > 0.0) || !(l > 0.0)) throw std::invalid_argument("find_period: need L > 0 and l > 0");
    const double step = tau_step(eps, L, cfg);
    std::vector<double> taus;
    if (auto P = f.period()) {
        const double k0 = std::ceil(a / *P - 1e-12);
        for (double k = k0; k * *P <= a + L + 1e-12; k += 1.0) taus.push_back(k * *P);
    }
    if (a <= 0.0 && a + L >= 0.0) taus.push_back(0.0);
    const auto n = static_cast<long>(std::floor(L / step + 1e-9));
    for (long i = 0; i <= n; ++i) taus.push_back(a + static_cast<double>(i) * step);

    PeriodSearch out;
    for (double tau : taus) {
        const PeriodValue v = period_value(f, l, tau, cfg, eps);
        ++out.tried;
        if (v.value < out.best_value) {
            out.best_value = v.value;
            out.best_tau = tau;
            out.best_l = v.l;
        }
        if (v.value <= eps) {
            out.tau = tau;
            return out;
        }
    }
    // Early-stopped values are lower bounds; make the witness value exact.
    const PeriodValue full = period_value(f, l, out.best_tau, cfg);
    out.best_value = full.value;
    out.best_l = full.l;
    return out;
}

Verdict relative_density_scan(const FunctionSpec& f, double eps, double l, double L, const ClassConfig& cfg,
                              double start, int m) {
    if (m < 1) throw std::invalid_argument("relative_density_scan: window count must be positive");
    Verdict vd;
    for (int i = 0; i < m; ++i) {
        const double a = start + i * L;
        const PeriodSearch ps = find_period(f, eps, l, a, L, cfg);
        DiagnosticRow row;
        row.fields = {{"eps", eps}, {"l", l}, {"L", L}, {"a", a}, {"found", ps.tau ? 1.0 : 0.0},
                      {"tau", ps.tau ? *ps.tau : ps.best_tau}, {"tried", static_cast<double>(ps.tried)}};
        vd.diagnostics.push_back(std::move(row));
        if (!ps.tau) {
            vd.status = VerdictStatus::ViolatedWithWitness;
            Witness w;
            w.eps = eps;
            w.l = ps.best_l;
            w.tau = ps.best_tau;
            w.interval_lo = a;
            w.interval_hi = a + L;
            w.value = ps.best_value;
            w.threshold = eps;
            w.note = "no tau in the interval reaches eps; tau is the best candidate";
            vd.witness = w;
            vd.summary = "interval [" + fmt(a) + ", " + fmt(a + L) + "] has no eps-period (best " +
                         fmt(ps.best_value) + " > " + fmt(eps) + ")";
            return vd;
        }
    }
    vd.status = VerdictStatus::SatisfiedOnGrid;
    vd.summary = std::to_string(m) + " intervals of length " + fmt(L) + " each contain an eps-period";
    return vd;
}

std::vector<double> interval_starts(double l, double L, const ClassConfig& cfg) {
    std::vector<double> starts;
    if (cfg.scan_range) {
        const auto [lo, hi] = *cfg.scan_range;
        if (!(hi - lo >= L)) throw std::invalid_argument("scan range shorter than L");
        for (double a = lo; a + L <= hi + 1e-9; a += L) starts.push_back(a);
        return starts;
    }
    const int m = cfg.window_count;
    if (m < 4) throw std::invalid_argument("window count must be at least 4");
    const bool half = cfg.domain == Domain::HalfLine;
    const double near0 = half ? 0.0 : -0.5 * m * L;
    for (int i = 0; i < m; ++i) starts.push_back(near0 + i * L);
    if (cfg.equi)
        for (int i = 0; i < m; ++i) starts.push_back(4.0 * l + i * L);
    return starts;
}

namespace {

// Scan all intervals for (l, L); stops at the first failing interval.
Verdict scan_pair(const FunctionSpec& f, double eps, double l, double L, const ClassConfig& cfg) {
    Verdict all;
    all.status = VerdictStatus::SatisfiedOnGrid;
    for (double a : interval_starts(l, L, cfg)) {
        Verdict v = relative_density_scan(f, eps, l, L, cfg, a, 1);
        for (auto& d : v.diagnostics) all.diagnostics.push_back(std::move(d));
        if (v.violated()) {
            v.diagnostics = std::move(all.diagnostics);
            return v;
        }
    }
    all.summary = "eps=" + fmt(eps) + ": (l=" + fmt(l) + ", L=" + fmt(L) + ") certifies relative density";
    return all;
}

}  // namespace

Verdict membership_report(const FunctionSpec& f, const ClassConfig& cfg) {
    if (cfg.eps_list.empty()) throw std::invalid_argument("membership: empty eps list");
    for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
        if (!(cfg.eps_list[i] > 0.0)) throw std::invalid_argument("membership: eps must be positive");
        if (i > 0 && !(cfg.eps_list[i] < cfg.eps_list[i - 1]))
            throw std::invalid_argument("membership: eps list must be decreasing");
    }
    if (cfg.L_ladder.empty()) throw std::invalid_argument("membership: empty L ladder");

    Verdict out;
    out.status = VerdictStatus::SatisfiedOnGrid;
    std::vector<double> ls = cfg.equi ? cfg.l_search.values() : std::vector<double>{cfg.limsup_l_grid.last()};
    for (double eps : cfg.eps_list) {
        bool certified = false;
        Verdict last_fail;
        double cert_l = 0.0, cert_L = 0.0;
        for (double l : ls) {
            for (double L : cfg.L_ladder) {
                Verdict v = scan_pair(f, eps, l, L, cfg);
                if (v.satisfied()) {
                    certified = true;
                    cert_l = l;
                    cert_L = L;
                    break;
                }
                last_fail = std::move(v);
            }
            if (certified) break;
        }
        DiagnosticRow row;
        row.fields = {{"eps", eps}, {"satisfied", certified ? 1.0 : 0.0}};
        if (certified) {
            if (cfg.equi) row.fields.emplace_back("l", cert_l);
            row.fields.emplace_back("L", cert_L);
        } else if (last_fail.witness) {
            row.fields.emplace_back("l", last_fail.witness->l.value_or(0.0));
            row.fields.emplace_back("tau", last_fail.witness->tau.value_or(0.0));
            row.fields.emplace_back("value", last_fail.witness->value);
        }
        row.note = certified ? "certified" : last_fail.summary;
        out.diagnostics.push_back(std::move(row));
        if (!certified && out.status != VerdictStatus::ViolatedWithWitness) {
            out.status = VerdictStatus::ViolatedWithWitness;
            out.witness = last_fail.witness;
            out.summary = "eps=" + fmt(eps) + ": " + last_fail.summary;
        }
    }
    if (out.satisfied())
        out.summary = std::string(cfg.equi ? "equi" : "non-equi") + " " + to_string(cfg.family) + "/" +
                      to_string(cfg.variant) + ": every eps certified on the grid";
    return out;
}

double recheck_witness(const FunctionSpec& f, const ClassConfig& cfg, const Witness& w) {
    if (!w.l || !w.tau) throw std::invalid_argument("recheck_witness: witness lacks l or tau");
    SeminormRequest r = base_request(f, *w.l, *w.tau, cfg);
    return seminorm(r).value;
}

}  // namespace wap
