#include "wap/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "wap/varlebesgue.hpp"

namespace wap {

namespace {

Vec zeros(std::size_t n) { return Vec(n, 0.0); }

void axpy(Vec& acc, double c, const Vec& v) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * v[i];
}

double vnorm(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Quadrature breaks for v in [v0, v1]: kernel kinks, h's breakpoints mapped
// through v = x - s, and regular splits so long ranges keep small panels.
std::vector<double> segment_breaks(const FunctionSpec& h, double x, double v0, double v1) {
    std::vector<double> br;
    for (double s : h.breakpoints(x - v1, x - v0)) br.push_back(x - s);
    const double len = v1 - v0;
    const double step = std::max(4.0, len / 4096.0);
    for (double v = v0 + step; v < v1; v += step) br.push_back(v);
    std::sort(br.begin(), br.end());
    return quad::clean_breaks(std::move(br), v0, v1);
}

double sup_estimate(const FunctionSpec& g, double x, double span) {
    if (auto s = g.sup_bound()) return *s;
    const double lo = std::max(g.lower(), x - span);
    double m = 0.0;
    const int n = 4097;
    for (int i = 0; i < n; ++i) m = std::max(m, g.norm_at(lo + (x - lo) * i / (n - 1)));
    for (double b : g.breakpoints(lo, x)) {
        m = std::max(m, g.norm_at(b));
        m = std::max(m, g.norm_at(std::nextafter(b, -kInf)));
    }
    return m;
}

}  // namespace

Vec convolve_segment(const KernelSpec& R, const FunctionSpec& h, double x, double v0, double v1, double tol) {
    const std::size_t dim = h.dimension();
    v0 = std::max(v0, 0.0);
    v1 = std::min(v1, x - h.lower());
    if (!(v1 > v0)) return zeros(dim);
    Vec acc = zeros(dim);
    if (h.exactly_integrable()) {
        for (const Piece& pc : h.pieces(x - v1, x - v0)) {
            if (vnorm(pc.value) == 0.0) continue;
            const double lo = std::max(v0, x - pc.hi), hi = std::min(v1, x - pc.lo);
            if (hi > lo) axpy(acc, R.integral(lo, hi), pc.value);
        }
        return acc;
    }
    const auto br = segment_breaks(h, x, v0, v1);
    std::vector<quad::Singularity> sing;
    if (v0 == 0.0 && R.singular_exponent() < 0.0) sing.push_back({0.0, R.singular_exponent()});
    quad::Options opt;
    opt.abs_tol = std::max(tol, 1e-15);
    for (std::size_t c = 0; c < dim; ++c) {
        auto fn = [&](double v) {
            if (dim == 1) return R(v) * h.evaluate(x - v)[0];
            return R(v) * h.evaluate(x - v)[c];
        };
        acc[c] = quad::integrate(fn, v0, v1, br, opt, sing).value;
    }
    return acc;
}

Vec infinite_convolution(const KernelSpec& R, const FunctionSpec& g, double x, double tol) {
    if (g.lower() > -kInf) throw std::invalid_argument("infinite_convolution: g must be defined on the line");
    const double probe = R.truncation_point(1e-3);
    const double S = sup_estimate(g, x, std::max(1000.0, 4.0 * probe));
    if (S == 0.0) return zeros(g.dimension());
    const double V = R.truncation_point(tol / (2.0 * S));
    if (!std::isfinite(V)) throw std::domain_error("infinite_convolution: kernel tail not integrable");
    return convolve_segment(R, g, x, 0.0, V, tol / 2.0);
}

FunctionSpec convolution_function(const KernelSpec& R, const FunctionSpec& g, double tol) {
    CallableTraits tr;
    tr.label = "conv(" + R.describe() + ", " + g.describe() + ")";
    tr.period = g.period();
    if (auto s = g.sup_bound()) tr.sup_bound = *s * (R.integral(0.0, 1.0) + R.tail_integral(1.0));
    tr.abs_error = tol;
    const bool scalar = g.dimension() == 1;
    return FunctionSpec::callable(
        [R, g, tol, scalar](double x) {
            Vec v = infinite_convolution(R, g, x, tol);
            return scalar ? v[0] : vnorm(v);
        },
        tr);
}

SplitResult finite_convolution_split(const KernelSpec& R, const FunctionSpec& g, const FunctionSpec& q, double t,
                                     double tol) {
    if (t < 0.0) throw std::invalid_argument("finite_convolution_split: t must be >= 0");
    if (g.dimension() != q.dimension()) throw std::invalid_argument("finite_convolution_split: dimension mismatch");
    SplitResult r;
    r.G = infinite_convolution(R, g, t, tol);
    const double S = sup_estimate(g, t, 1000.0);
    const double V = S > 0.0 ? R.truncation_point(tol / (2.0 * S)) : t;
    r.H1 = convolve_segment(R, g, t, t, std::max(V, t), tol / 2.0);
    r.H2 = convolve_segment(R, q, t, 0.0, t, tol);
    const FunctionSpec gq = FunctionSpec::sum({g, q});
    r.H = convolve_segment(R, gq, t, 0.0, t, tol);
    return r;
}

FunctionSpec h2_function(const KernelSpec& R, const FunctionSpec& q, double tol) {
    CallableTraits tr;
    tr.label = "H2(" + R.describe() + ", " + q.describe() + ")";
    tr.lower = 0.0;
    tr.abs_error = tol;
    tr.kinks = q.breakpoints(0.0, 1e7);
    if (tr.kinks.size() > 200000) tr.kinks.resize(200000);
    std::optional<double> V;
    if (auto s = q.sup_bound(); s && *s > 0.0) V = R.truncation_point(tol / (2.0 * *s));
    return FunctionSpec::callable(
        [R, q, tol, V](double t) {
            const double hi = V ? std::min(t, *V) : t;
            return vnorm(convolve_segment(R, q, t, 0.0, hi, tol));
        },
        tr);
}

std::string to_string(SeriesKind k) {
    switch (k) {
        case SeriesKind::H: return "H";
        case SeriesKind::Hp: return "Hp";
        case SeriesKind::W: return "W";
        case SeriesKind::W2: return "W2";
        case SeriesKind::Wp: return "Wp";
    }
    return "?";
}

SeriesResult sum_series(const std::function<double(long)>& term, double tol, long max_terms) {
    SeriesResult res;
    std::vector<double> terms;
    double partial = 0.0;
    int zero_run = 0, rise_run = 0;
    auto tail_model = [&](long k, double& tail, std::string& model) {
        const double t = terms[k];
        double r[3];
        bool geo = k >= 3;
        for (int j = 0; j < 3 && geo; ++j) {
            const double prev = terms[k - j - 1];
            if (prev <= 0.0) { geo = false; break; }
            r[j] = terms[k - j] / prev;
        }
        if (geo) {
            const double rmax = std::max({r[0], r[1], r[2]});
            const double rmin = std::min({r[0], r[1], r[2]});
            if (rmax < 0.95 && rmax - rmin <= 0.05 * rmax + 1e-12) {
                tail = t * rmax / (1.0 - rmax);
                model = "geometric";
                return true;
            }
        }
        const long h = k / 2;
        if (h >= 1 && terms[h] > 0.0) {
            const double s = std::log(terms[h] / t) / std::log(static_cast<double>(k) / h);
            if (s > 1.0 + 1e-6) {
                const double K = static_cast<double>(k);
                tail = t * K * std::pow(K / (K + 0.5), s - 1.0) / (s - 1.0);
                model = "power";
                return true;
            }
        }
        tail = kInf;
        model = "none";
        return false;
    };
    long k = 0;
    for (; k < max_terms; ++k) {
        const double t = term(k);
        if (!(t >= 0.0)) throw std::domain_error("series: term is negative or not a number");
        terms.push_back(t);
        partial += t;
        if (t == 0.0) {
            if (++zero_run >= 50) {
                res.tail = 0.0;
                res.tail_model = "zero";
                res.converged = true;
                ++k;
                break;
            }
        } else {
            zero_run = 0;
        }
        if (k > 0 && t > 0.0 && t >= terms[k - 1]) {
            if (++rise_run >= 50) throw std::domain_error("series diverges: terms non-decreasing over 50 consecutive k");
        } else {
            rise_run = 0;
        }
        if (k >= 8 && t > 0.0 && t < tol * partial) {
            double tail;
            std::string model;
            if (tail_model(k, tail, model) && tail < tol * std::max(1.0, partial)) {
                res.tail = tail;
                res.tail_model = model;
                res.converged = true;
                ++k;
                break;
            }
        }
    }
    res.terms = k;
    if (!res.converged) {
        if (partial == 0.0) {
            res.converged = true;
            res.tail_model = "zero";
        } else {
            double tail;
            std::string model;
            res.converged = tail_model(static_cast<long>(terms.size()) - 1, tail, model);
            res.tail = tail;
            res.tail_model = model;
        }
    }
    res.value = partial + (std::isfinite(res.tail) ? res.tail : 0.0);
    return res;
}

double kernel_window_norm(const KernelSpec& R, const std::function<double(double)>& varphi, const ExponentSpec& q,
                          double shift, double a, double b) {
    if (!(b > a)) return 0.0;
    a = std::max(a, -shift);
    if (!(b > a)) return 0.0;
    if (R.kind() == KernelSpec::Kind::Table && a + shift >= R.truncation_point(0.0)) return 0.0;
    if (auto qc = q.constant_value(); qc && std::isinf(*qc)) {
        const double s = R.window_sup(a + shift, b + shift);
        return varphi ? varphi(s) : s;
    }
    FunctionSpec kf = R.as_function();
    if (shift != 0.0) kf = FunctionSpec::translate(shift, kf);
    if (varphi) kf = FunctionSpec::norm_map(varphi, kf, 1.0, "varphi");
    return luxemburg_norm(kf, q, a, b).value;
}

namespace {

double coef_a(const SequenceSpec& a, const std::function<double(double)>& vp, long k, double scale) {
    if (!vp) return scale;  // a_k * (scale / a_k)
    const double ak = a(k);
    if (ak == 0.0) return 0.0;
    return ak * vp(scale / ak);
}

double default_b(const std::function<double(long)>& b, long k) { return b ? b(k) : std::ldexp(1.0, static_cast<int>(-std::min(k, 2000L))); }

}  // namespace

SeriesResult series_eval(SeriesKind which, const SeriesParams& prm) {
    const double l = prm.l, x = prm.x;
    std::function<double(long)> term;
    switch (which) {
        case SeriesKind::H:
            term = [&](long k) {
                const double c = coef_a(prm.a, prm.varphi, k, l);
                if (c == 0.0) return 0.0;
                const double n = kernel_window_norm(prm.R, prm.varphi, prm.q, x, -x + k * l, -x + (k + 1) * l);
                return n == 0.0 ? 0.0 : c * n / prm.F(l, -x + k * l);
            };
            break;
        case SeriesKind::Hp:
            term = [&](long k) {
                const double c = coef_a(prm.a, prm.varphi, k, l);
                if (c == 0.0) return 0.0;
                const double n = kernel_window_norm(prm.R, prm.varphi, prm.q, 0.0, k * l, (k + 1) * l);
                return n == 0.0 ? 0.0 : c * n / prm.F(l, -x + k * l);
            };
            break;
        case SeriesKind::W:
            term = [&](long k) {
                const double c = coef_a(prm.a, prm.varphi, k, 1.0) * default_b(prm.b, k);
                if (c == 0.0) return 0.0;
                return c * kernel_window_norm(prm.R, prm.varphi, prm.q, x + k, 0.0, 1.0);
            };
            break;
        case SeriesKind::W2:
            term = [&](long k) {
                const double c = default_b(prm.b, k);
                if (c == 0.0) return 0.0;
                return c * kernel_window_norm(prm.R, {}, prm.q, x + k, 0.0, 1.0);
            };
            break;
        case SeriesKind::Wp:
            term = [&](long k) {
                const double c = coef_a(prm.a, prm.varphi, k, 1.0) * default_b(prm.b, k);
                if (c == 0.0) return 0.0;
                return c * kernel_window_norm(prm.R, prm.varphi, prm.q, 0.0, x + k, x + k + 1);
            };
            break;
    }
    return sum_series(term, prm.tol, prm.max_terms);
}

std::string to_string(TheoremId id) {
    switch (id) {
        case TheoremId::Jensen: return "jensen";
        case TheoremId::KrajeqWeak: return "krajeq-weak";
        case TheoremId::Kraj: return "kraj";
        case TheoremId::Jensenjen: return "jensenjen";
        case TheoremId::Prcko: return "prcko";
        case TheoremId::Sub1: return "sub1";
        case TheoremId::Sub2: return "sub2";
        case TheoremId::Napolje: return "napolje";
        case TheoremId::Univer: return "univer";
    }
    return "?";
}

std::optional<TheoremId> theorem_from_string(const std::string& s) {
    for (auto id : {TheoremId::Jensen, TheoremId::KrajeqWeak, TheoremId::Kraj, TheoremId::Jensenjen, TheoremId::Prcko,
                    TheoremId::Sub1, TheoremId::Sub2, TheoremId::Napolje, TheoremId::Univer})
        if (to_string(id) == s) return id;
    return std::nullopt;
}

ExponentSpec conjugate_exponent(const ExponentSpec& p) {
    auto conj = [](double v) {
        if (v <= 1.0) return kInf;
        if (std::isinf(v)) return 1.0;
        return v / (v - 1.0);
    };
    if (auto c = p.constant_value()) return ExponentSpec::constant(conj(*c));
    if (p.is_piecewise()) {
        const auto br = p.breakpoints(-kInf, kInf);
        std::vector<double> vals;
        if (br.empty()) {
            vals.push_back(conj(p.at(0.0)));
        } else {
            vals.push_back(conj(p.at(br.front() - 1.0)));
            for (std::size_t i = 0; i < br.size(); ++i) vals.push_back(conj(p.at(br[i])));
        }
        return ExponentSpec::piecewise(br, vals);
    }
    return ExponentSpec::callable([p, conj](double x) { return conj(p.at(x)); }, conj(p.p_plus()), conj(p.p_minus()),
                                  "conj(" + p.describe() + ")");
}

namespace {

constexpr double kCondSlack = 1e-9;

// Composite 15-point rule on [a, b] with panel ends at `breaks`.
quad::Rule fixed_rule(double a, double b, int panels, std::vector<double> breaks) {
    std::vector<double> ends{a};
    for (int i = 1; i < panels; ++i) ends.push_back(a + (b - a) * i / panels);
    for (double v : breaks) ends.push_back(v);
    ends.push_back(b);
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end(), [](double u, double v) { return std::fabs(u - v) < 1e-12; }),
               ends.end());
    quad::Rule r;
    const auto& xn = quad::gl_nodes();
    const auto& wn = quad::gl_weights();
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        const double m = 0.5 * (ends[i] + ends[i + 1]), h = 0.5 * (ends[i + 1] - ends[i]);
        if (h <= 0.0) continue;
        for (std::size_t j = 0; j < xn.size(); ++j) {
            r.nodes.push_back(m + h * xn[j]);
            r.weights.push_back(h * wn[j]);
        }
    }
    return r;
}

double apply_phi_p(const ExponentSpec& p, const quad::Rule& rule, const std::vector<double>& vals, double scale) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double v = phi_p(p.at(rule.nodes[i]), scale * vals[i]);
        if (!std::isfinite(v)) return kInf;
        s += rule.weights[i] * v;
    }
    return s;
}

double constant_p_or_throw(const ExponentSpec& p, TheoremId id) {
    auto c = p.constant_value();
    if (!c) throw std::invalid_argument(to_string(id) + ": requires a constant exponent p");
    return *c;
}

struct CondCell {
    double t = 0.0, l = 0.0, eps = -1.0, value = 0.0;
};

void finish_report(TheoremConditionReport& rep, const std::vector<CondCell>& cells, bool series_ok) {
    rep.all_satisfied = series_ok;
    for (const auto& c : cells) {
        DiagnosticRow row;
        row.fields = {{"t", c.t}, {"l", c.l}};
        if (c.eps >= 0.0) row.fields.push_back({"eps", c.eps});
        row.fields.push_back({"condition", c.value});
        rep.conditions.push_back(std::move(row));
        rep.max_condition = std::max(rep.max_condition, c.value);
        if (!(c.value <= 1.0 + kCondSlack)) {
            rep.all_satisfied = false;
            if (!rep.first_violation) {
                Witness w;
                w.t = c.t;
                w.l = c.l;
                if (c.eps >= 0.0) w.eps = c.eps;
                w.value = c.value;
                w.threshold = 1.0;
                w.note = rep.theorem + " condition integral exceeds 1";
                rep.first_violation = w;
            }
        }
    }
    if (!series_ok && !rep.first_violation) {
        Witness w;
        w.note = "series did not converge within its tail bound";
        rep.first_violation = w;
    }
}

}  // namespace

TheoremConditionReport check_theorem(TheoremId id, const TheoremConfig& cfg) {
    TheoremConditionReport rep;
    rep.theorem = to_string(id);
    const ExponentSpec q = cfg.q ? *cfg.q : conjugate_exponent(cfg.p);
    const auto omega = [&](double e) { return cfg.omega ? cfg.omega(e) : e; };
    const auto S = [&](double l, double t) { return cfg.S ? cfg.S(l, t) : 1.0; };
    const auto& ls = cfg.l_grid.values();
    const auto& ts = cfg.t_grid.values();
    const bool needs_eps = id == TheoremId::Jensenjen || id == TheoremId::Sub1 || id == TheoremId::Sub2 ||
                           id == TheoremId::Napolje || id == TheoremId::Univer;
    if (needs_eps && cfg.eps_list.empty()) throw std::invalid_argument(rep.theorem + ": eps list is empty");
    if (id == TheoremId::KrajeqWeak || id == TheoremId::Kraj || id == TheoremId::Prcko)
        constant_p_or_throw(cfg.p, id);

    SeriesParams base;
    base.R = cfg.R;
    base.q = q;
    base.varphi = cfg.varphi;
    base.F = cfg.F;
    base.a = cfg.a;
    base.b = cfg.b;
    base.tol = cfg.tol;
    base.max_terms = 4096;

    bool series_ok = true;
    std::vector<CondCell> cells;
    std::mutex mu;

    auto add_series_row = [&](double l, double x, const SeriesResult& r) {
        DiagnosticRow row;
        row.fields = {{"l", l}, {"x", x}, {"value", r.value}, {"terms", static_cast<double>(r.terms)},
                      {"converged", r.converged ? 1.0 : 0.0}};
        row.note = r.tail_model;
        rep.series.push_back(std::move(row));
        if (!r.converged) series_ok = false;
    };

    if (id == TheoremId::Jensenjen || id == TheoremId::Prcko || id == TheoremId::Napolje ||
        id == TheoremId::Univer) {
        // Series in x on [0, 1], independent of (t, l, eps): tabulate once.
        const SeriesKind kind = id == TheoremId::Jensenjen ? SeriesKind::W
                                : id == TheoremId::Prcko    ? SeriesKind::Wp
                                                            : SeriesKind::W2;
        const quad::Rule rule = fixed_rule(0.0, 1.0, 8, cfg.p.breakpoints(0.0, 1.0));
        std::vector<SeriesResult> wr(rule.nodes.size());
        parallel_for(rule.nodes.size(), 0, [&](std::size_t i) {
            SeriesParams sp = base;
            sp.x = rule.nodes[i];
            wr[i] = series_eval(kind, sp);
        });
        std::vector<double> W(wr.size());
        for (std::size_t i = 0; i < wr.size(); ++i) {
            W[i] = wr[i].value;
            add_series_row(0.0, rule.nodes[i], wr[i]);
        }
        for (double l : ls)
            for (double t : ts) {
                const double F1 = cfg.F1(l, t);
                if (id == TheoremId::Prcko) {
                    cells.push_back({t, l, -1.0, apply_phi_p(cfg.p, rule, W, 2.0 / F1 * S(l, t))});
                    continue;
                }
                for (double e : cfg.eps_list) {
                    double scale = 0.0;
                    if (id == TheoremId::Jensenjen) {
                        scale = 2.0 / (e * F1) * omega(e) * S(l, t);
                    } else {
                        const double lam = id == TheoremId::Napolje ? cfg.phi.inverse_sup(e / F1)
                                                                    : cfg.phi.inverse_sup(e) / F1;
                        scale = std::isinf(lam) ? 0.0 : (lam > 0.0 ? 2.0 * omega(e) * S(l, t) / lam : kInf);
                    }
                    cells.push_back({t, l, e, std::isinf(scale) ? kInf : apply_phi_p(cfg.p, rule, W, scale)});
                }
            }
        finish_report(rep, cells, series_ok);
    } else {
        // H-type series over x in [t, t + l].
        const bool x_free = q.is_constant() && cfg.F.t_independent();
        const SeriesKind kind = id == TheoremId::Kraj ? SeriesKind::Hp : SeriesKind::H;
        const bool kraj_x_free = cfg.F.t_independent();

        // Per-x value of the summed quantity for one (l, eps).
        auto h_value = [&](double l, double x, double eps, SeriesResult* out) {
            SeriesParams sp = base;
            sp.l = l;
            sp.x = x;
            if (id == TheoremId::Sub1 || id == TheoremId::Sub2) {
                auto term = [&](long k) {
                    const double n = kernel_window_norm(cfg.R, {}, q, x, -x + k * l, -x + (k + 1) * l);
                    if (n == 0.0) return 0.0;
                    const double Fk = cfg.F(l, -x + k * l);
                    if (id == TheoremId::Sub1) return n * cfg.phi.inverse_sup(eps / Fk);
                    return n / Fk;
                };
                SeriesResult r = sum_series(term, cfg.tol, base.max_terms);
                if (out) *out = r;
                return r.value;
            }
            SeriesResult r = series_eval(kind, sp);
            if (out) *out = r;
            return r.value;
        };

        struct Job {
            double l, eps;
        };
        std::vector<Job> jobs;
        const bool eps_dep = id == TheoremId::Sub1;
        for (double l : ls) {
            if (eps_dep)
                for (double e : cfg.eps_list) jobs.push_back({l, e});
            else
                jobs.push_back({l, -1.0});
        }
        const std::vector<double> eps_out =
            (id == TheoremId::Sub1 || id == TheoremId::Sub2) ? cfg.eps_list : std::vector<double>{-1.0};

        std::vector<std::vector<CondCell>> job_cells(jobs.size());
        std::vector<std::vector<std::pair<double, SeriesResult>>> job_series(jobs.size());
        parallel_for(jobs.size(), 0, [&](std::size_t j) {
            const double l = jobs[j].l;
            const double eps_h = jobs[j].eps;
            const bool free = kind == SeriesKind::Hp ? kraj_x_free : x_free;
            std::optional<double> h0;
            if (free) {
                SeriesResult r;
                h0 = h_value(l, 0.0, eps_h, &r);
                job_series[j].push_back({0.0, r});
            }
            for (double t : ts) {
                const double F1 = cfg.F1(l, t);
                const int panels = std::clamp(static_cast<int>(std::ceil(l)), 4, 64);
                const quad::Rule rule = fixed_rule(t, t + l, panels, cfg.p.breakpoints(t, t + l));
                std::vector<double> H(rule.nodes.size());
                for (std::size_t i = 0; i < H.size(); ++i) {
                    if (h0) {
                        H[i] = *h0;
                    } else {
                        SeriesResult r;
                        H[i] = h_value(l, rule.nodes[i], eps_h, &r);
                        if (i == 0 || !r.converged) job_series[j].push_back({rule.nodes[i], r});
                    }
                }
                const std::vector<double> eps_iter = eps_dep ? std::vector<double>{eps_h} : eps_out;
                for (double e : eps_iter) {
                    double value = 0.0;
                    switch (id) {
                        case TheoremId::Jensen:
                            value = apply_phi_p(cfg.p, rule, H, 2.0 / (l * F1));
                            break;
                        case TheoremId::KrajeqWeak:
                            value = apply_phi_p(cfg.p, rule, H, 1.0 / (l * F1));
                            break;
                        case TheoremId::Kraj:
                            value = apply_phi_p(cfg.p, rule, H, 1.0 / (l * F1));
                            break;
                        case TheoremId::Sub1: {
                            const double lam = cfg.phi.inverse_sup(e / cfg.F(l, t));
                            value = std::isinf(lam) ? 0.0
                                    : lam > 0.0     ? apply_phi_p(cfg.p, rule, H, 2.0 / lam)
                                                    : kInf;
                            break;
                        }
                        case TheoremId::Sub2: {
                            const double a0 = cfg.phi.inverse_sup(e);
                            const double lam = a0 / cfg.F(l, t);
                            value = std::isinf(a0) ? 0.0
                                    : lam > 0.0    ? apply_phi_p(cfg.p, rule, H, 2.0 * a0 / lam)
                                                   : kInf;
                            break;
                        }
                        default: break;
                    }
                    job_cells[j].push_back({t, l, e, value});
                }
            }
        });
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            for (auto& [x, r] : job_series[j]) add_series_row(jobs[j].l, x, r);
            for (auto& c : job_cells[j]) cells.push_back(c);
        }
        std::stable_sort(cells.begin(), cells.end(), [](const CondCell& a, const CondCell& b) {
            if (a.l != b.l) return a.l < b.l;
            if (a.t != b.t) return a.t < b.t;
            return a.eps > b.eps;
        });
        finish_report(rep, cells, series_ok);
    }
    const std::string target = (id == TheoremId::Sub1 || id == TheoremId::Sub2 || id == TheoremId::Napolje ||
                                id == TheoremId::Univer)
                                   ? "Weyl-(p, phi, F1)-vanishing type (hypothesis weights)"
                                   : "(equi-)Weyl-(p, phi, F1)-almost periodic";
    rep.conclusion = rep.all_satisfied ? "conditions hold on the grid: G is " + target
                                       : "conditions fail on the grid: no conclusion";
    return rep;
}

Verdict section41_bound_check(long k, double l, double q, double beta, double gamma) {
    if (k < 0 || !(l > 0.0) || q < 1.0 || !(beta > 0.0 && beta <= 1.0) || !(gamma > 1.0))
        throw std::invalid_argument("section41_bound_check: parameters out of range");
    const double e = (beta - 1.0) * q;
    if (!(e > -1.0)) throw std::invalid_argument("section41_bound_check: (beta-1)q must exceed -1");
    const double a = k * l, b = (k + 1) * l;
    auto fn = [&](double t) { return std::pow(t, e) / std::pow(1.0 + std::pow(t, gamma), q); };
    std::vector<quad::Singularity> sing;
    if (k == 0 && e < 0.0) sing.push_back({0.0, e});
    quad::Options opt;
    opt.abs_tol = 1e-13;
    const double lhs = quad::integrate(fn, a, b, {}, opt, sing).value;
    const double rhs =
        std::pow(static_cast<double>(k + 1), e) * std::pow(l, e + 1.0) / (1.0 + std::pow(a, q * gamma));
    Verdict v;
    v.lhs = lhs;
    v.rhs = rhs;
    DiagnosticRow row;
    row.fields = {{"k", static_cast<double>(k)}, {"l", l}, {"q", q}, {"beta", beta}, {"gamma", gamma},
                  {"lhs", lhs},   {"rhs", rhs}};
    v.diagnostics.push_back(row);
    if (lhs <= rhs + 1e-9) {
        v.status = VerdictStatus::SatisfiedOnGrid;
        v.summary = "window integral within the closed-form bound";
    } else {
        v.status = VerdictStatus::ViolatedWithWitness;
        Witness w;
        w.l = l;
        w.interval_lo = a;
        w.interval_hi = b;
        w.value = lhs;
        w.threshold = rhs;
        w.note = "k = " + std::to_string(k);
        v.witness = w;
        v.summary = "window integral exceeds the closed-form bound";
    }
    return v;
}

Verdict bluz_check(double p, double beta, double gamma, const GridSpec& l_grid) {
    if (p < 1.0 || !(beta > 0.0 && beta <= 1.0) || !(gamma > 1.0))
        throw std::invalid_argument("bluz_check: parameters out of range");
    const double q = p > 1.0 ? p / (p - 1.0) : kInf;
    if (p > 1.0 && !((beta - 1.0) * q > -1.0)) throw std::invalid_argument("bluz_check: (beta-1)q must exceed -1");
    const auto& ls = l_grid.values();
    std::vector<double> vals(ls.size());
    parallel_for(ls.size(), 0, [&](std::size_t i) {
        const double l = ls[i];
        std::function<double(long)> term;
        if (p > 1.0) {
            const double e = (beta - 1.0) * q;
            term = [&, l, e](long k) {
                auto fn = [&](double t) { return std::pow(t, e) / std::pow(1.0 + std::pow(t, gamma), q); };
                std::vector<quad::Singularity> sing;
                if (k == 0 && e < 0.0) sing.push_back({0.0, e});
                quad::Options opt;
                opt.abs_tol = 1e-14;
                return std::pow(quad::integrate(fn, k * l, (k + 1) * l, {}, opt, sing).value, 1.0 / q);
            };
        } else {
            term = [&, l](long k) {
                const KernelSpec R = KernelSpec::poly_decay(1.0, beta, gamma);
                return R.window_sup(k * l, (k + 1) * l);
            };
        }
        if (p == 1.0 && beta < 1.0) {
            vals[i] = kInf;
            return;
        }
        const SeriesResult r = sum_series(term, 1e-10, 4096);
        const double s = r.converged ? r.value : kInf;
        vals[i] = p > 1.0 ? l * std::pow(s, p) : l * s;
    });
    Verdict v;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        DiagnosticRow row;
        row.fields = {{"l", ls[i]}, {"value", vals[i]}};
        v.diagnostics.push_back(row);
    }
    const auto idx = trailing_indices(ls);
    bool rising = false, finite = true;
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (!std::isfinite(vals[idx[j]])) finite = false;
        if (j > 0 && vals[idx[j]] > vals[idx[j - 1]] * (1.0 + 1e-9)) rising = true;
    }
    v.lhs = trailing_max(ls, vals);
    if (finite && !rising) {
        v.status = VerdictStatus::SatisfiedOnGrid;
        v.summary = "outer expression bounded on the l-grid";
    } else {
        v.status = VerdictStatus::ViolatedWithWitness;
        Witness w;
        w.l = ls.back();
        w.value = vals.back();
        w.threshold = idx.size() > 1 ? vals[idx[idx.size() - 2]] : 0.0;
        w.note = finite ? "outer expression increases over the trailing l-grid" : "outer expression is infinite";
        v.witness = w;
        v.summary = "outer expression grows with l";
    }
    return v;
}

PropFiniteReport check_prop_finite(const KernelSpec& R, const FunctionSpec& q, const PropFiniteConfig& cfg) {
    PropFiniteReport rep;
    if (q.lower() != 0.0) throw std::invalid_argument("check_prop_finite: q must live on [0, inf)");
    if (!std::isfinite(R.tail_integral(1.0))) throw std::domain_error("check_prop_finite: kernel not integrable");
    const auto& sg = cfg.s_grid.values();
    rep.S.resize(sg.size());
    parallel_for(sg.size(), 0, [&](std::size_t i) {
        const double t = sg[i];
        auto term = [&](long k) { return kernel_window_norm(R, {}, cfg.q_exp, t + k, 0.0, 1.0); };
        rep.S[i] = {t, sum_series(term, cfg.tol, 4096).value};
    });
    {
        const std::size_t n = rep.S.size();
        bool nonincr = true;
        for (std::size_t i = n / 2; i + 1 < n; ++i)
            if (rep.S[i + 1].second > rep.S[i].second * (1.0 + 1e-9) + 1e-300) nonincr = false;
        rep.S_decays = n > 0 && nonincr && rep.S.back().second <= cfg.threshold * rep.S.front().second;
        if (n > 0 && rep.S.front().second == 0.0) rep.S_decays = nonincr;
    }

    // Part (ii): D(l, t) = sup_x F1(l,t) int_0^{x+t} [int_{x+t}^{x+t+l} R(s-r) ds] ||q(r)|| dr.
    const double Vcut = R.truncation_point(cfg.tol);
    auto inner = [&](double A, double l) {
        const double r0 = std::max(0.0, A - Vcut - l);
        if (!(A > r0)) return 0.0;
        auto w = [&](double r) { return R.integral(A - r, A + l - r); };
        if (q.exactly_integrable()) {
            double s = 0.0;
            for (const Piece& pc : q.pieces(r0, A)) {
                const double nv = vnorm(pc.value);
                if (nv == 0.0 || !(pc.hi > pc.lo)) continue;
                s += nv * quad::integrate(w, std::max(pc.lo, r0), std::min(pc.hi, A)).value;
            }
            return s;
        }
        auto fn = [&](double r) { return w(r) * q.norm_at(r); };
        return quad::integrate(fn, r0, A, q.breakpoints(r0, A)).value;
    };
    const auto& Ls = cfg.vcfg.l_grid.values();
    const auto& Ts = cfg.vcfg.t_grid.values();
    IteratedTable tab;
    const bool equi = cfg.vcfg.order == LimitOrder::Equi;
    tab.outer = equi ? Ls : Ts;
    tab.inner = equi ? Ts : Ls;
    tab.outer_is_l = equi;
    tab.threshold = cfg.threshold;
    tab.label = "finite-convolution hypothesis";
    tab.values.assign(Ls.size() * Ts.size(), 0.0);
    tab.argmax_x.assign(tab.values.size(), 0.0);
    parallel_for(tab.values.size(), 0, [&](std::size_t idx) {
        const std::size_t io = idx / tab.inner.size(), ii = idx % tab.inner.size();
        const double l = equi ? tab.outer[io] : tab.inner[ii];
        const double t = equi ? tab.inner[ii] : tab.outer[io];
        std::vector<double> xs;
        const int n = std::max(2, cfg.vcfg.x_points);
        const double xhi = t + 4.0 * l;
        for (int i = 0; i < n; ++i) xs.push_back(xhi * i / (n - 1));
        for (double b : q.breakpoints(0.0, t + 5.0 * l)) {
            if (b - t >= 0.0) xs.push_back(b - t);
            if (b - t - l >= 0.0) xs.push_back(b - t - l);
        }
        const double F1 = cfg.F1(l, t);
        double best = 0.0, bx = 0.0;
        for (double x : xs) {
            const double v = F1 * inner(x + t, l);
            if (v > best) {
                best = v;
                bx = x;
            }
        }
        tab.values[idx] = best;
        tab.argmax_x[idx] = bx;
    });
    rep.hypothesis = iterated_limit_verdict(tab);

    double ratio = 0.0;
    for (double l : Ls)
        for (double t : Ts) ratio = std::max(ratio, cfg.F1(l, t) / cfg.F(l, t));
    rep.zran_ratio = ratio;
    rep.zran_ok = ratio <= cfg.M + 1e-12;

    VanishingConfig vc = cfg.vcfg;
    vc.weight = cfg.F1;
    vc.threshold = cfg.threshold;
    rep.conclusion = vanishing_verdict(h2_function(R, q, cfg.tol), vc);
    return rep;
}

Vec scalar_convolution(const FunctionSpec& psi, const FunctionSpec& f, double x, double tol) {
    if (psi.dimension() != 1) throw std::invalid_argument("scalar_convolution: psi must be scalar");
    const std::size_t dim = f.dimension();
    // int psi(u) f(x - u) du over u in [lo, hi], with the domains of both.
    auto part = [&](double lo, double hi) {
        lo = std::max(lo, psi.lower());
        hi = std::min(hi, psi.upper());
        lo = std::max(lo, x - f.upper());
        hi = std::min(hi, x - f.lower());
        Vec acc = zeros(dim);
        if (!(hi > lo)) return acc;
        std::vector<double> br = psi.breakpoints(lo, hi);
        for (double b : f.breakpoints(x - hi, x - lo)) br.push_back(x - b);
        std::sort(br.begin(), br.end());
        br = quad::clean_breaks(std::move(br), lo, hi);
        if (psi.exactly_integrable() && f.exactly_integrable()) {
            double a = lo;
            br.push_back(hi);
            for (double b : br) {
                if (b > a) {
                    const double m = 0.5 * (a + b);
                    axpy(acc, psi.evaluate(m)[0] * (b - a), f.evaluate(x - m));
                }
                a = b;
            }
            return acc;
        }
        quad::Options opt;
        opt.abs_tol = std::max(tol, 1e-15);
        for (std::size_t c = 0; c < dim; ++c) {
            auto fn = [&](double u) {
                const double pv = psi.evaluate(u)[0];
                return pv == 0.0 ? 0.0 : pv * f.evaluate(x - u)[c];
            };
            acc[c] = quad::integrate(fn, lo, hi, br, opt).value;
        }
        return acc;
    };
    double U = 16.0;
    Vec total = part(-U, U);
    for (int it = 0; it < 24; ++it) {
        Vec add = part(-2.0 * U, -U);
        axpy(add, 1.0, part(U, 2.0 * U));
        axpy(total, 1.0, add);
        U *= 2.0;
        if (vnorm(add) < tol) return total;
        if (U >= std::min(psi.upper(), x - f.lower()) && -U <= std::max(psi.lower(), x - f.upper())) return total;
    }
    throw std::domain_error("scalar_convolution: psi tail not integrable to tolerance");
}

FunctionSpec scalar_convolution_function(const FunctionSpec& psi, const FunctionSpec& f, double tol) {
    CallableTraits tr;
    tr.label = "conv(" + psi.describe() + ", " + f.describe() + ")";
    tr.period = f.period();
    const auto bp = psi.breakpoints(-1e3, 1e3);
    const auto bf = f.breakpoints(-1e3, 1e3);
    if (bp.size() * bf.size() <= 100000) {
        for (double a : bp)
            for (double b : bf) tr.kinks.push_back(a + b);
        std::sort(tr.kinks.begin(), tr.kinks.end());
        tr.kinks.erase(std::unique(tr.kinks.begin(), tr.kinks.end()), tr.kinks.end());
    }
    const bool scalar = f.dimension() == 1;
    return FunctionSpec::callable(
        [psi, f, tol, scalar](double x) {
            Vec v = scalar_convolution(psi, f, x, tol);
            return scalar ? v[0] : vnorm(v);
        },
        tr);
}

TheoremConditionReport check_convolution_invariance(const FunctionSpec& psi, const InvarianceConfig& cfg) {
    if (psi.dimension() != 1) throw std::invalid_argument("convolution invariance: psi must be scalar");
    if (!cfg.a.two_sided()) throw std::invalid_argument("convolution invariance: a_k must be two-sided");
    const bool const_exp = cfg.p.is_constant() && cfg.p1.is_constant();
    if (cfg.drop_factor_two && !const_exp)
        throw std::invalid_argument("convolution invariance: factor 2 may be dropped only for constant exponents");
    TheoremConditionReport rep;
    rep.theorem = cfg.family == Family::Paren ? "invariance-paren" : "invariance-bracket";
    const ExponentSpec q = conjugate_exponent(cfg.p);
    const double two = cfg.drop_factor_two ? 1.0 : 2.0;
    const auto& vp = cfg.varphi;
    auto vpf = [&](double s) { return vp ? vp(s) : s; };

    // Two-sided series sum_{k in Z} term(k).
    bool series_ok = true;
    auto two_sided = [&](const std::function<double(long)>& term) {
        SeriesResult up = sum_series(term, cfg.tol, 4096);
        SeriesResult dn = sum_series([&](long k) { return term(-k - 1); }, cfg.tol, 4096);
        SeriesResult r;
        r.value = up.value + dn.value;
        r.terms = up.terms + dn.terms;
        r.tail = up.tail + dn.tail;
        r.converged = up.converged && dn.converged;
        r.tail_model = up.tail_model + "/" + dn.tail_model;
        return r;
    };

    const auto& ls = cfg.l_grid.values();
    const auto& ts = cfg.t_grid.values();
    std::vector<CondCell> cells(ls.size() * ts.size());
    std::vector<std::vector<std::pair<double, SeriesResult>>> srows(cells.size());
    parallel_for(cells.size(), 0, [&](std::size_t idx) {
        const double l = ls[idx / ts.size()], t = ts[idx % ts.size()];
        const double F1 = cfg.F1(l, t);
        // Series value at x (the integration variable of the condition).
        std::function<double(double, SeriesResult*)> sval;
        double a0, a1;
        if (cfg.family == Family::Paren) {
            a0 = t;
            a1 = t + l;
            sval = [&, l](double x, SeriesResult* out) {
                auto term = [&](long k) {
                    const double ak = cfg.a(k);
                    if (ak == 0.0) return 0.0;
                    // z -> varphi(|psi(x - z)| / a_k) on [x - (k+1)l, x - kl]
                    FunctionSpec g = FunctionSpec::affine(-1.0, x, psi);
                    const double s = 1.0 / ak;
                    g = FunctionSpec::norm_map([&vpf, s](double v) { return vpf(s * v); }, g, 1.0, "varphi");
                    const double n = luxemburg_norm(g, q, x - (k + 1) * l, x - k * l).value;
                    return n == 0.0 ? 0.0 : ak * n / cfg.F(l, x - (k + 1) * l);
                };
                SeriesResult r = two_sided(term);
                if (out) *out = r;
                return two / l * F1 * vpf(l) * r.value;
            };
        } else {
            a0 = 0.0;
            a1 = 1.0;
            sval = [&, l, t](double x, SeriesResult* out) {
                auto term = [&](long k) {
                    const double ak = cfg.a(k);
                    if (ak == 0.0) return 0.0;
                    // z -> varphi(l |psi(l(x - k) - l z)| / a_k) on [0, 1]
                    FunctionSpec g = FunctionSpec::affine(-l, l * (x - k), psi);
                    const double s = l / ak;
                    g = FunctionSpec::norm_map([&vpf, s](double v) { return vpf(s * v); }, g, 1.0, "varphi");
                    const double n = luxemburg_norm(g, q, 0.0, 1.0).value;
                    return n == 0.0 ? 0.0 : n / cfg.F(l, t + k * l);
                };
                SeriesResult r = two_sided(term);
                if (out) *out = r;
                return two * F1 * r.value;
            };
        }
        const bool x_free = cfg.family == Family::Paren && q.is_constant() && cfg.F.t_independent();
        const int panels = cfg.family == Family::Paren ? std::clamp(static_cast<int>(std::ceil(l)), 4, 32) : 8;
        std::vector<double> br = cfg.p1.breakpoints(a0, a1);
        for (double b : psi.breakpoints(-1e4, 1e4)) {
            if (cfg.family == Family::Bracket) {
                // kinks of the series in x sit where l(x - k) - l z hits a psi break, z in {0, 1}
                for (double z : {0.0, 1.0}) {
                    const double xb = b / l + z;
                    const double fr = xb - std::floor(xb);
                    if (fr > 0.0) br.push_back(fr);
                }
            }
        }
        std::sort(br.begin(), br.end());
        const quad::Rule rule = fixed_rule(a0, a1, panels, quad::clean_breaks(br, a0, a1));
        std::vector<double> vals(rule.nodes.size());
        if (x_free) {
            SeriesResult r;
            const double v = sval(a0, &r);
            srows[idx].push_back({a0, r});
            std::fill(vals.begin(), vals.end(), v);
        } else {
            for (std::size_t i = 0; i < vals.size(); ++i) {
                SeriesResult r;
                vals[i] = sval(rule.nodes[i], &r);
                if (i == 0 || !r.converged) srows[idx].push_back({rule.nodes[i], r});
            }
        }
        cells[idx] = {t, l, -1.0, apply_phi_p(cfg.p1, rule, vals, 1.0)};
    });
    for (std::size_t idx = 0; idx < cells.size(); ++idx)
        for (auto& [x, r] : srows[idx]) {
            DiagnosticRow row;
            row.fields = {{"l", cells[idx].l}, {"t", cells[idx].t}, {"x", x}, {"value", r.value},
                          {"terms", static_cast<double>(r.terms)}, {"converged", r.converged ? 1.0 : 0.0}};
            row.note = r.tail_model;
            rep.series.push_back(std::move(row));
            if (!r.converged) series_ok = false;
        }
    finish_report(rep, cells, series_ok);
    rep.conclusion = rep.all_satisfied ? "conditions hold on the grid: psi * f stays in the class (weights F1)"
                                       : "conditions fail on the grid: no conclusion";
    return rep;
}

}  // namespace wap
