#include "wap/commands.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "wap/apclass.hpp"
#include "wap/convolution.hpp"
#include "wap/ergodic.hpp"
#include "wap/fractional.hpp"
#include "wap/paper_suite.hpp"
#include "wap/varlebesgue.hpp"
#include "wap/weylnorms.hpp"

namespace wap {

// ------------------------------------------------------------ CSV

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw std::invalid_argument("csv: row width does not match header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_quote(cells[i]);
        }
        out += "\r\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

CsvTable diagnostics_table(const std::vector<DiagnosticRow>& rows) {
    std::vector<std::string> cols;
    std::map<std::string, std::size_t> index;
    for (const auto& r : rows)
        for (const auto& [k, v] : r.fields)
            if (index.emplace(k, cols.size()).second) cols.push_back(k);
    std::vector<std::string> header = cols;
    header.push_back("note");
    CsvTable t(header);
    for (const auto& r : rows) {
        std::vector<std::string> cells(header.size());
        for (const auto& [k, v] : r.fields) cells[index[k]] = csv_number(v);
        cells.back() = r.note;
        t.add_row(std::move(cells));
    }
    return t;
}

// ------------------------------------------------------------ reports

namespace {

class Report {
public:
    void kv(const std::string& k, const std::string& v) { os_ << k << ": " << v << '\n'; }
    void kv(const std::string& k, double v) { kv(k, csv_number(v)); }
    void raw(const std::string& s) { os_ << s; }
    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
};

}  // namespace

std::string render_verdict(const Verdict& v) {
    Report r;
    r.kv("status", to_string(v.status));
    r.kv("summary", v.summary);
    r.kv("lhs", v.lhs);
    r.kv("rhs", v.rhs);
    if (v.witness) {
        const Witness& w = *v.witness;
        auto opt = [&](const char* k, const std::optional<double>& x) {
            if (x) r.kv(std::string("witness.") + k, *x);
        };
        opt("eps", w.eps);
        opt("l", w.l);
        opt("t", w.t);
        opt("tau", w.tau);
        opt("x", w.x);
        opt("interval_lo", w.interval_lo);
        opt("interval_hi", w.interval_hi);
        r.kv("witness.value", w.value);
        r.kv("witness.threshold", w.threshold);
        if (!w.note.empty()) r.kv("witness.note", w.note);
    }
    return r.str();
}

int exit_code_for(VerdictStatus s) { return s == VerdictStatus::SatisfiedOnGrid ? 0 : 1; }

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"norm",    "seminorm", "membership", "vanishing", "convolve",
                                                   "check",   "frac",     "paper-suite", "export"};
    return names;
}

const std::vector<DefaultEntry>& defaults_table() {
    static const std::vector<DefaultEntry> table = {
        {"run.tol", "1e-10", "quadrature / convolution tolerance"},
        {"run.seed", "1", "seed for randomized audits and suites"},
        {"run.jobs", "0", "worker threads (0: hardware concurrency)"},
        {"lux.tol", "1e-12", "relative bracket width of the Luxemburg bisection"},
        {"quad.abs_tol", "1e-10", "adaptive Gauss-Legendre absolute tolerance"},
        {"quad.rel_tol", "1e-12", "adaptive Gauss-Legendre relative tolerance"},
        {"quad.max_depth", "48", "panel bisection depth limit"},
        {"quad.max_evals", "4000000", "integrand evaluations per call"},
        {"seminorm.t_grid", "step l/16 on [-T, T], T = max(8l, 64) + |tau|", "sup-over-t grid (plus breakpoint anchors)"},
        {"seminorm.limsup_l", "geometric(2, 256, 8)", "l-grid of the limsup; trailing octave is used"},
        {"membership.eps", "[0.2]", "epsilon ladder (decreasing)"},
        {"membership.l_search", "geometric(1, 256, 9)", "equi l candidates"},
        {"membership.L", "[1, 2, 4, 8]", "relative density lengths"},
        {"membership.window_count", "8", "consecutive intervals per block"},
        {"membership.tau_step", "L * clamp(eps/4, 1/1024, 1/8)", "tau scan step"},
        {"vanishing.t (equi)", "geometric(16, 262144, 15)", "inner grid of the equi order"},
        {"vanishing.l (equi)", "geometric(1, 256, 9)", "outer grid of the equi order"},
        {"vanishing.threshold", "0.2", "outer limit threshold"},
        {"vanishing.x_points", "257", "coarse sup-over-x grid (plus anchors)"},
        {"theorem.l", "geometric(1, 64, 7)", "window lengths of the condition tables"},
        {"theorem.t", "uniform(-8, 8, 5)", "window starts of the condition tables"},
        {"theorem.eps", "[0.5, 0.1]", "epsilon values for the sub1/sub2/napolje/univer conditions"},
        {"theorem.a", "geometric(0.5)", "a_k = (1-r) r^k"},
        {"theorem.b", "2^-k", "b_k"},
        {"series.max_terms", "65536", "series term budget (theorem tables use 4096)"},
        {"finite.s", "uniform(0, 16, 17)", "t-grid of S(t)"},
        {"finite.t", "geometric(16, 4096, 9)", "inner grid of the hypothesis table"},
        {"finite.l", "geometric(1, 64, 7)", "outer grid of the hypothesis table"},
        {"invariance.a", "twosided(0.5)", "a_k over Z"},
        {"invariance.l", "geometric(1, 16, 5)", "window lengths"},
        {"invariance.t", "uniform(-4, 4, 3)", "window starts"},
        {"frac.zeta", "0.5", "fractional order"},
        {"frac.h", "1e-3 * max(1, t)", "difference step (clamped to t/4)"},
        {"frac.tol", "1e-6", "Weyl-Liouville tail tolerance"},
        {"frac.tail_T", "64 doubled up to 2^20", "Weyl-Liouville history cutoff"},
    };
    return table;
}

// ------------------------------------------------------------ helpers

namespace {

std::vector<double> num_list(const RunConfig& cfg, const std::string& key, std::vector<double> dflt) {
    if (!cfg.has_param(key)) return dflt;
    Expr e;
    try {
        e = parse_expr(cfg.params.at(key));
        if (e.kind == Expr::Kind::List) return build_list(e);
    } catch (const ConfigError& ex) {
        throw ConfigError("[params] " + key + ": " + ex.what());
    }
    return {cfg.num(key, 0.0)};
}

std::vector<double> grid_or_param(const RunConfig& cfg, const std::string& key, std::vector<double> dflt) {
    if (cfg.has_grid(key)) return cfg.grid(key, GridSpec::points(dflt)).values();
    return num_list(cfg, key, std::move(dflt));
}

Family family_of(const RunConfig& cfg) {
    const std::string s = cfg.str("family", "paren");
    if (s == "paren") return Family::Paren;
    if (s == "bracket") return Family::Bracket;
    throw ConfigError("[params] family: expected paren or bracket");
}

Variant variant_of(const RunConfig& cfg) {
    const std::string s = cfg.str("variant", "base");
    if (s == "base" || s == "0") return Variant::Base;
    if (s == "sub1" || s == "1") return Variant::Sub1;
    if (s == "sub2" || s == "2") return Variant::Sub2;
    throw ConfigError("[params] variant: expected base, sub1 or sub2");
}

Domain domain_of(const RunConfig& cfg, Domain dflt) {
    if (!cfg.has_param("domain")) return dflt;
    const std::string s = cfg.str("domain", "");
    if (s == "line") return Domain::Line;
    if (s == "half" || s == "halfline") return Domain::HalfLine;
    throw ConfigError("[params] domain: expected line or half");
}

FunctionSpec function_or(const RunConfig& cfg, const std::string& key) {
    return cfg.has_binding(key) ? cfg.function(key) : cfg.function("function");
}

std::function<double(double)> varphi_of(const RunConfig& cfg) {
    if (!cfg.has_binding("varphi")) return {};
    const PhiSpec v = cfg.phi("varphi");
    return [v](double x) { return v(x); };
}

double scalar_value(const Vec& v) {
    if (v.size() == 1) return v[0];
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::string op_of(const RunConfig& cfg, const std::string& dflt, const std::vector<std::string>& allowed) {
    const std::string op = cfg.str("op", cfg.str("which", dflt));
    for (const auto& a : allowed)
        if (a == op) return op;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw ConfigError("[params] op: unknown '" + op + "' (expected one of " + list + ")");
}

CommandOutput verdict_output(Report& r, const Verdict& v, CsvTable table) {
    r.raw(render_verdict(v));
    return {exit_code_for(v.status), r.str(), std::move(table)};
}

CommandOutput verdict_output(Report& r, const Verdict& v) { return verdict_output(r, v, diagnostics_table(v.diagnostics)); }

// ------------------------------------------------------------ norm

CommandOutput cmd_norm(const RunConfig& cfg, Report& r) {
    const std::string op = op_of(cfg, "luxemburg",
                                 {"luxemburg", "modular", "windowed", "stepanov", "bs", "holder", "embedding",
                                  "domination"});
    r.kv("op", op);
    const ExponentSpec p = cfg.exponent("exponent", 1.0);
    const double lo = cfg.num("lo", 0.0), hi = cfg.num("hi", 1.0);
    LuxOptions lux;
    lux.tol = cfg.num("lux_tol", lux.tol);
    if (op == "luxemburg" || op == "modular") {
        const FunctionSpec f = cfg.function("function");
        if (op == "modular") {
            const double m = modular(f, p, lo, hi);
            r.kv("value", m);
            CsvTable t({"lo", "hi", "modular"});
            t.add_row({csv_number(lo), csv_number(hi), csv_number(m)});
            return {0, r.str(), t};
        }
        const NormResult n = luxemburg_norm(f, p, lo, hi, lux);
        r.kv("value", n.value);
        r.kv("method", to_string(n.method));
        r.kv("modular_at_value", n.modular_at_value);
        r.kv("iterations", std::to_string(n.iterations));
        r.kv("error_bound", n.error_bound);
        CsvTable t({"lo", "hi", "value", "method", "modular_at_value", "iterations", "error_bound"});
        t.add_row({csv_number(lo), csv_number(hi), csv_number(n.value), to_string(n.method),
                   csv_number(n.modular_at_value), std::to_string(n.iterations), csv_number(n.error_bound)});
        return {0, r.str(), t};
    }
    if (op == "windowed") {
        const FunctionSpec f = cfg.function("function");
        const double l = cfg.num("l", 1.0);
        const std::vector<double> ts = grid_or_param(cfg, "t", GridSpec::uniform(0.0, 10.0, 11).values());
        std::vector<double> vals(ts.size());
        parallel_for(ts.size(), 0, [&](std::size_t i) { vals[i] = windowed_norm(f, p, ts[i], l, lux); });
        CsvTable t({"t", "value"});
        double mx = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            t.add_row({csv_number(ts[i]), csv_number(vals[i])});
            mx = std::max(mx, vals[i]);
        }
        r.kv("l", l);
        r.kv("max", mx);
        return {0, r.str(), t};
    }
    if (op == "stepanov" || op == "bs") {
        const FunctionSpec f = cfg.function("function");
        const GridSpec tg = cfg.grid("t", GridSpec::uniform(-16.0, 16.0, 129));
        const SupResult s = op == "stepanov" ? stepanov_norm(f, p, tg) : bs_norm(f, p, tg);
        r.kv("value", s.value);
        r.kv("argmax_t", s.argmax);
        CsvTable t({"value", "argmax_t"});
        t.add_row({csv_number(s.value), csv_number(s.argmax)});
        return {0, r.str(), t};
    }
    if (op == "holder") {
        const FunctionSpec u = cfg.function("function"), v = cfg.function("g");
        const ExponentSpec rr = cfg.exponent("exponent1", 1.0);
        ExponentSpec q = ExponentSpec::constant(1.0);
        if (cfg.has_binding("q_exponent")) {
            q = cfg.exponent("q_exponent", 1.0);
        } else if (p.constant_value() && rr.constant_value()) {
            q = ExponentSpec::constant(1.0 / (1.0 / *p.constant_value() + 1.0 / *rr.constant_value()));
        } else {
            throw ConfigError("[bindings] q_exponent: required for non-constant exponents");
        }
        return verdict_output(r, holder_check(u, v, p, q, rr, lo, hi));
    }
    if (op == "embedding")
        return verdict_output(r, embedding_check(cfg.function("function"), p, cfg.num("t", 0.0), cfg.num("l", 1.0)));
    return verdict_output(r, domination_check(cfg.function("function"), cfg.function("g"), p, lo, hi));
}

// ------------------------------------------------------------ seminorm

SeminormRequest seminorm_request(const RunConfig& cfg) {
    SeminormRequest req;
    req.f = cfg.function("function");
    req.p = cfg.exponent("exponent", 1.0);
    req.phi = cfg.phi("phi");
    req.weight = cfg.weight("weight");
    if (cfg.has_param("stevate")) {
        const std::string w = cfg.str("stevate", "");
        if (w != "F1" && w != "F2") throw ConfigError("[params] stevate: expected F1 or F2");
        auto vp = varphi_of(cfg);
        if (!vp) throw ConfigError("[bindings] varphi: required by stevate");
        req.weight = stevate_transform(req.weight, vp, w == "F1" ? StevateWhich::F1 : StevateWhich::F2);
    }
    req.family = family_of(cfg);
    req.variant = variant_of(cfg);
    req.domain = domain_of(cfg, req.f.domain());
    req.t_grid = cfg.grid_opt("t");
    req.untranslated = cfg.flag("untranslated", false);
    req.lux.tol = cfg.num("lux_tol", req.lux.tol);
    return req;
}

CommandOutput cmd_seminorm(const RunConfig& cfg, Report& r) {
    SeminormRequest base = seminorm_request(cfg);
    const std::string mode = cfg.str("mode", "value");
    if (mode != "value" && mode != "limsup") throw ConfigError("[params] mode: expected value or limsup");
    const std::vector<double> taus = num_list(cfg, "tau", {1.0});
    r.kv("mode", mode);
    r.kv("family", to_string(base.family));
    r.kv("variant", to_string(base.variant));
    if (mode == "limsup") {
        const GridSpec lg = cfg.grid("limsup_l", GridSpec::geometric(2.0, 256.0, 8));
        CsvTable t({"l", "tau", "value", "argmax_t"});
        for (double tau : taus) {
            SeminormRequest req = base;
            req.tau = tau;
            const LimsupResult ls = limsup_over_l(req, lg);
            for (std::size_t i = 0; i < ls.ls.size(); ++i)
                t.add_row({csv_number(ls.ls[i]), csv_number(tau), csv_number(ls.per_l[i].value),
                           csv_number(ls.per_l[i].argmax_t)});
            r.kv("limsup[tau=" + csv_number(tau) + "]", ls.value);
            r.kv("argmax_l[tau=" + csv_number(tau) + "]", ls.argmax_l);
        }
        return {0, r.str(), t};
    }
    const std::vector<double> ls = grid_or_param(cfg, "l", {1.0});
    const bool curve = cfg.flag("curve", false);
    struct Job {
        double l, tau;
    };
    std::vector<Job> jobs;
    for (double l : ls)
        for (double tau : taus) jobs.push_back({l, tau});
    std::vector<SeminormResult> res(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        SeminormRequest req = base;
        req.l = jobs[i].l;
        req.tau = jobs[i].tau;
        req.emit_curve = curve && i == 0;
        res[i] = seminorm(req);
    }
    if (curve) {
        CsvTable t({"t", "value"});
        for (const auto& [tt, v] : res[0].curve) t.add_row({csv_number(tt), csv_number(v)});
        r.kv("value", res[0].value);
        r.kv("argmax_t", res[0].argmax_t);
        return {0, r.str(), t};
    }
    CsvTable t({"l", "tau", "value", "argmax_t"});
    double mx = 0.0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        t.add_row({csv_number(jobs[i].l), csv_number(jobs[i].tau), csv_number(res[i].value),
                   csv_number(res[i].argmax_t)});
        mx = std::max(mx, res[i].value);
    }
    if (jobs.size() == 1) {
        r.kv("value", res[0].value);
        r.kv("argmax_t", res[0].argmax_t);
    } else {
        r.kv("max", mx);
    }
    return {0, r.str(), t};
}

// ------------------------------------------------------------ membership

ClassConfig class_config(const RunConfig& cfg, Domain dflt_domain) {
    ClassConfig c;
    c.family = family_of(cfg);
    c.variant = variant_of(cfg);
    c.p = cfg.exponent("exponent", 1.0);
    c.phi = cfg.phi("phi");
    c.weight = cfg.weight("weight");
    c.equi = cfg.flag("equi", true);
    c.eps_list = cfg.list_param("eps", c.eps_list);
    c.l_search = cfg.grid("l_search", c.l_search);
    c.L_ladder = cfg.list_param("L", c.L_ladder);
    c.limsup_l_grid = cfg.grid("limsup_l", c.limsup_l_grid);
    if (cfg.has_param("tau_step")) c.tau_step = cfg.num("tau_step", 0.0);
    if (cfg.has_param("scan_lo") || cfg.has_param("scan_hi")) {
        if (!cfg.has_param("scan_lo") || !cfg.has_param("scan_hi"))
            throw ConfigError("[params] scan_lo and scan_hi must be given together");
        c.scan_range = std::make_pair(cfg.num("scan_lo", 0.0), cfg.num("scan_hi", 0.0));
    }
    c.window_count = static_cast<int>(cfg.integer("window_count", c.window_count));
    c.domain = domain_of(cfg, dflt_domain);
    c.t_grid = cfg.grid_opt("t");
    return c;
}

CommandOutput cmd_membership(const RunConfig& cfg, Report& r) {
    const FunctionSpec f = cfg.function("function");
    const ClassConfig c = class_config(cfg, f.domain());
    r.kv("class", std::string(c.equi ? "equi" : "non-equi") + " " + to_string(c.family) + "/" + to_string(c.variant));
    r.kv("function", f.describe());
    r.kv("weight", c.weight.describe());
    return verdict_output(r, membership_report(f, c));
}

// ------------------------------------------------------------ vanishing

VanishingConfig vanishing_config(const RunConfig& cfg) {
    const std::string order = cfg.str("order", "equi");
    if (order != "equi" && order != "weyl") throw ConfigError("[params] order: expected equi or weyl");
    VanishingConfig v = order == "equi" ? VanishingConfig{} : weyl_order_defaults();
    v.p = cfg.exponent("exponent", 1.0);
    v.phi = cfg.phi("phi");
    v.weight = cfg.weight("weight");
    v.variant = variant_of(cfg);
    v.t_grid = cfg.grid("t", v.t_grid);
    v.l_grid = cfg.grid("l", v.l_grid);
    v.x_grid = cfg.grid_opt("x");
    v.threshold = cfg.num("threshold", v.threshold);
    v.x_points = static_cast<int>(cfg.integer("x_points", v.x_points));
    return v;
}

CommandOutput cmd_vanishing(const RunConfig& cfg, Report& r) {
    const std::string mode = cfg.str("mode", "iterated");
    r.kv("mode", mode);
    if (mode == "iterated") {
        const FunctionSpec q = function_or(cfg, "q");
        const VanishingConfig v = vanishing_config(cfg);
        r.kv("order", to_string(v.order));
        r.kv("weight", v.weight.describe());
        return verdict_output(r, vanishing_verdict(q, v));
    }
    if (mode == "stepanov") {
        const FunctionSpec q = function_or(cfg, "q");
        const WeightSpec G = cfg.weight("weight");
        const int variant = static_cast<int>(variant_of(cfg));
        const GridSpec tg = cfg.grid("t", GridSpec::geometric(1.0, 4096.0, 13));
        return verdict_output(r, stepanov_vanishing_verdict(q, cfg.exponent("exponent", 1.0), cfg.phi("phi"),
                                                            [G](double t) { return G(1.0, t); }, variant, tg,
                                                            cfg.num("threshold", 0.2)));
    }
    if (mode == "decomposition") {
        const FunctionSpec g = cfg.function("g"), q = cfg.function("q");
        return verdict_output(r, asymptotic_decomposition_check(g, q, class_config(cfg, Domain::HalfLine),
                                                                vanishing_config(cfg)));
    }
    throw ConfigError("[params] mode: expected iterated, stepanov or decomposition");
}

// ------------------------------------------------------------ convolve

CommandOutput cmd_convolve(const RunConfig& cfg, Report& r) {
    const std::string op = op_of(cfg, "infinite", {"infinite", "split", "series", "scalar", "h2"});
    r.kv("op", op);
    const double tol = cfg.tol;
    if (op == "infinite" || op == "h2") {
        const KernelSpec R = cfg.kernel();
        const FunctionSpec g = op == "h2" ? function_or(cfg, "q") : function_or(cfg, "g");
        const std::vector<double> xs =
            grid_or_param(cfg, op == "h2" ? "t" : "x", GridSpec::uniform(op == "h2" ? 0.0 : -10.0, 10.0, 21).values());
        std::vector<Vec> vals(xs.size());
        if (op == "infinite") {
            parallel_for(xs.size(), 0, [&](std::size_t i) { vals[i] = infinite_convolution(R, g, xs[i], tol); });
        } else {
            const FunctionSpec h2 = h2_function(R, g, tol);
            for (std::size_t i = 0; i < xs.size(); ++i) vals[i] = {h2.norm_at(xs[i])};
        }
        const std::size_t dim = vals.empty() ? 1 : vals[0].size();
        std::vector<std::string> header{op == "h2" ? "t" : "x"};
        for (std::size_t d = 0; d < dim; ++d) header.push_back(dim == 1 ? "value" : "value_" + std::to_string(d));
        CsvTable t(header);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            std::vector<std::string> row{csv_number(xs[i])};
            for (double v : vals[i]) row.push_back(csv_number(v));
            t.add_row(std::move(row));
        }
        r.kv("kernel", R.describe());
        if (xs.size() == 1) r.kv("value", scalar_value(vals[0]));
        return {0, r.str(), t};
    }
    if (op == "split") {
        const KernelSpec R = cfg.kernel();
        const FunctionSpec g = cfg.function("g"), q = cfg.function("q");
        const std::vector<double> ts = grid_or_param(cfg, "t", {1.0});
        CsvTable t({"t", "H", "H1", "H2", "G", "identity_residual"});
        for (double tt : ts) {
            const SplitResult s = finite_convolution_split(R, g, q, tt, tol);
            const double h = scalar_value(s.H), h1 = scalar_value(s.H1), h2 = scalar_value(s.H2),
                         gg = scalar_value(s.G);
            double res = 0.0;
            for (std::size_t d = 0; d < s.H.size(); ++d)
                res = std::max(res, std::abs(s.H[d] - (s.H2[d] + s.G[d] - s.H1[d])));
            t.add_row({csv_number(tt), csv_number(h), csv_number(h1), csv_number(h2), csv_number(gg), csv_number(res)});
        }
        return {0, r.str(), t};
    }
    if (op == "scalar") {
        const FunctionSpec psi = cfg.function("psi"), f = cfg.function("function");
        const std::vector<double> xs = grid_or_param(cfg, "x", {0.0});
        std::vector<Vec> vals(xs.size());
        parallel_for(xs.size(), 0, [&](std::size_t i) { vals[i] = scalar_convolution(psi, f, xs[i], tol); });
        CsvTable t({"x", "value"});
        for (std::size_t i = 0; i < xs.size(); ++i) t.add_row({csv_number(xs[i]), csv_number(scalar_value(vals[i]))});
        if (xs.size() == 1) r.kv("value", scalar_value(vals[0]));
        return {0, r.str(), t};
    }
    // series
    const std::string name = cfg.str("series", "H");
    static const std::map<std::string, SeriesKind> kinds = {
        {"H", SeriesKind::H}, {"Hp", SeriesKind::Hp}, {"W", SeriesKind::W}, {"W2", SeriesKind::W2}, {"Wp", SeriesKind::Wp}};
    auto kit = kinds.find(name);
    if (kit == kinds.end()) throw ConfigError("[params] series: expected H, Hp, W, W2 or Wp");
    SeriesParams sp;
    sp.R = cfg.kernel();
    sp.q = cfg.exponent("q_exponent", 2.0);
    sp.varphi = varphi_of(cfg);
    sp.F = cfg.weight("weight");
    sp.a = cfg.sequence("a", sp.a);
    if (cfg.has_binding("b")) {
        auto fn = compile_math(cfg.bindings.at("b").text, {"k"});
        sp.b = [fn](long k) {
            const double kk = static_cast<double>(k);
            return fn(&kk);
        };
    }
    sp.x = cfg.num("x", 0.0);
    sp.tol = cfg.tol;
    sp.max_terms = cfg.integer("max_terms", sp.max_terms);
    const std::vector<double> ls = grid_or_param(cfg, "l", {1.0});
    CsvTable t({"l", "x", "value", "terms", "tail", "converged", "tail_model"});
    for (double l : ls) {
        SeriesParams s2 = sp;
        s2.l = l;
        const SeriesResult res = series_eval(kit->second, s2);
        t.add_row({csv_number(l), csv_number(sp.x), csv_number(res.value), std::to_string(res.terms),
                   csv_number(res.tail), res.converged ? "true" : "false", res.tail_model});
        if (ls.size() == 1) {
            r.kv("value", res.value);
            r.kv("terms", std::to_string(res.terms));
            r.kv("converged", res.converged ? "true" : "false");
        }
    }
    r.kv("series", name);
    return {0, r.str(), t};
}

// ------------------------------------------------------------ check

CommandOutput theorem_output(Report& r, const TheoremConditionReport& rep) {
    r.kv("theorem", rep.theorem);
    r.kv("status", rep.all_satisfied ? "satisfied-on-grid" : "violated-with-witness");
    r.kv("max_condition", rep.max_condition);
    r.kv("conclusion", rep.conclusion);
    if (rep.first_violation) {
        Verdict v;
        v.witness = rep.first_violation;
        const std::string w = render_verdict(v);
        r.raw(w.substr(w.find("witness.") == std::string::npos ? w.size() : w.find("witness.")));
    }
    std::vector<DiagnosticRow> rows = rep.conditions;
    for (auto row : rep.series) {
        row.note = row.note.empty() ? "series" : "series " + row.note;
        rows.push_back(std::move(row));
    }
    return {rep.all_satisfied ? 0 : 1, r.str(), diagnostics_table(rows)};
}

CommandOutput cmd_check(const RunConfig& cfg, Report& r) {
    const std::string th = cfg.str("theorem", "");
    if (th.empty()) throw ConfigError("[params] theorem: required");
    if (th == "section41") {
        const auto ks = num_list(cfg, "k", {0.0});
        const auto ls = num_list(cfg, "l", {1.0});
        const auto qs = num_list(cfg, "q", {1.0});
        const auto bs = num_list(cfg, "beta", {1.0});
        const auto gs = num_list(cfg, "gamma", {2.0});
        CsvTable t({"k", "l", "q", "beta", "gamma", "lhs", "rhs", "status"});
        long total = 0, failed = 0;
        for (double k : ks)
            for (double l : ls)
                for (double q : qs)
                    for (double b : bs)
                        for (double g : gs) {
                            if (!((b - 1.0) * q > -1.0)) continue;
                            const Verdict v = section41_bound_check(static_cast<long>(k), l, q, b, g);
                            ++total;
                            if (!v.satisfied()) ++failed;
                            t.add_row({csv_number(k), csv_number(l), csv_number(q), csv_number(b), csv_number(g),
                                       csv_number(v.lhs), csv_number(v.rhs), to_string(v.status)});
                        }
        r.kv("theorem", th);
        r.kv("cells", std::to_string(total));
        r.kv("violations", std::to_string(failed));
        r.kv("status", failed == 0 ? "satisfied-on-grid" : "violated-with-witness");
        return {failed == 0 ? 0 : 1, r.str(), t};
    }
    if (th == "bluz") {
        r.kv("theorem", th);
        return verdict_output(r, bluz_check(cfg.num("p", 2.0), cfg.num("beta", 1.0), cfg.num("gamma", 2.0),
                                            cfg.grid("l", GridSpec::geometric(1.0, 64.0, 7))));
    }
    if (th == "finite") {
        PropFiniteConfig pc;
        pc.q_exp = cfg.exponent("q_exponent", 1.0);
        if (cfg.has_binding("weight")) pc.F = cfg.weight("weight");
        if (cfg.has_binding("weight1")) pc.F1 = cfg.weight("weight1");
        pc.M = cfg.num("M", pc.M);
        pc.s_grid = cfg.grid("s", pc.s_grid);
        pc.vcfg.t_grid = cfg.grid("t", pc.vcfg.t_grid);
        pc.vcfg.l_grid = cfg.grid("l", pc.vcfg.l_grid);
        pc.vcfg.x_points = static_cast<int>(cfg.integer("x_points", pc.vcfg.x_points));
        pc.threshold = cfg.num("threshold", pc.threshold);
        pc.vcfg.threshold = pc.threshold;
        pc.tol = cfg.tol;
        const PropFiniteReport rep = check_prop_finite(cfg.kernel(), function_or(cfg, "q"), pc);
        r.kv("theorem", th);
        r.kv("S_decays", rep.S_decays ? "true" : "false");
        r.kv("hypothesis", to_string(rep.hypothesis.status) + " | " + rep.hypothesis.summary);
        r.kv("zran_ratio", rep.zran_ratio);
        r.kv("zran_ok", rep.zran_ok ? "true" : "false");
        r.kv("conclusion", to_string(rep.conclusion.status) + " | " + rep.conclusion.summary);
        CsvTable t({"t", "S"});
        for (const auto& [tt, s] : rep.S) t.add_row({csv_number(tt), csv_number(s)});
        const bool ok = rep.S_decays && rep.hypothesis.satisfied() && rep.zran_ok && rep.conclusion.satisfied();
        r.kv("status", ok ? "satisfied-on-grid" : "not-satisfied");
        return {ok ? 0 : 1, r.str(), t};
    }
    if (th == "invariance") {
        InvarianceConfig ic;
        ic.p = cfg.exponent("exponent", 1.0);
        ic.p1 = cfg.exponent("exponent1", 1.0);
        ic.varphi = varphi_of(cfg);
        ic.F = cfg.weight("weight");
        ic.F1 = cfg.weight("weight1");
        ic.a = cfg.sequence("a", ic.a);
        ic.family = family_of(cfg);
        ic.l_grid = cfg.grid("l", ic.l_grid);
        ic.t_grid = cfg.grid("t", ic.t_grid);
        ic.drop_factor_two = cfg.flag("drop_factor_two", false);
        ic.tol = cfg.tol;
        return theorem_output(r, check_convolution_invariance(cfg.function("psi"), ic));
    }
    const auto id = theorem_from_string(th);
    if (!id) throw ConfigError("[params] theorem: unknown '" + th + "'");
    TheoremConfig tc;
    tc.R = cfg.kernel();
    tc.p = cfg.exponent("exponent", 2.0);
    if (cfg.has_binding("q_exponent")) tc.q = cfg.exponent("q_exponent", 2.0);
    tc.varphi = varphi_of(cfg);
    tc.phi = cfg.phi("phi");
    tc.F = cfg.weight("weight");
    tc.F1 = cfg.weight("weight1");
    tc.a = cfg.sequence("a", tc.a);
    if (cfg.has_binding("b")) {
        auto fn = compile_math(cfg.bindings.at("b").text, {"k"});
        tc.b = [fn](long k) {
            const double kk = static_cast<double>(k);
            return fn(&kk);
        };
    }
    if (cfg.has_binding("omega")) {
        const PhiSpec om = cfg.phi("omega");
        tc.omega = [om](double e) { return om(e); };
    }
    if (cfg.has_binding("S")) {
        const WeightSpec S = cfg.weight("S");
        tc.S = [S](double l, double t) { return S(l, t); };
    }
    tc.l_grid = cfg.grid("l", tc.l_grid);
    tc.t_grid = cfg.grid("t", tc.t_grid);
    tc.eps_list = cfg.list_param("eps", tc.eps_list);
    tc.tol = cfg.tol;
    return theorem_output(r, check_theorem(*id, tc));
}

// ------------------------------------------------------------ frac

CommandOutput cmd_frac(const RunConfig& cfg, Report& r) {
    const std::string op =
        op_of(cfg, "caputo", {"caputo", "weyl-liouville", "kernel", "semigroup", "mild", "mild-line"});
    r.kv("op", op);
    FracConfig fc;
    fc.zeta = cfg.num("zeta", fc.zeta);
    if (cfg.has_param("h")) fc.h = cfg.num("h", 0.0);
    if (cfg.has_param("tail_T")) fc.tail_T = cfg.num("tail_T", 0.0);
    r.kv("zeta", fc.zeta);
    const std::vector<double> ts = grid_or_param(cfg, "t", {1.0});
    if (op == "caputo" || op == "weyl-liouville") {
        const FunctionSpec u = function_or(cfg, "u");
        CsvTable t({"t", "value", "status", "h", "tail_T", "tail_bound"});
        int code = 0;
        for (double tt : ts) {
            const FracResult fr = op == "caputo" ? caputo_derivative(u, tt, fc) : weyl_liouville_derivative(u, tt, fc);
            if (fr.status != VerdictStatus::SatisfiedOnGrid) code = 1;
            t.add_row({csv_number(tt), csv_number(fr.value), to_string(fr.status), csv_number(fr.h),
                       csv_number(fr.tail_T), csv_number(fr.tail_bound)});
            if (ts.size() == 1) {
                r.kv("value", fr.value);
                r.kv("status", to_string(fr.status));
                if (!fr.note.empty()) r.kv("note", fr.note);
            }
        }
        return {code, r.str(), t};
    }
    if (op == "kernel" || op == "semigroup") {
        const double eta = cfg.num("q", 0.5);
        CsvTable t = op == "kernel" ? CsvTable({"t", "g_zeta"}) : CsvTable({"t", "convolution", "g_sum", "abs_error"});
        for (double tt : ts) {
            if (op == "kernel") {
                t.add_row({csv_number(tt), csv_number(gamma_kernel(fc.zeta, tt))});
            } else {
                const double c = kernel_convolution(fc.zeta, eta, tt), g = gamma_kernel(fc.zeta + eta, tt);
                t.add_row({csv_number(tt), csv_number(c), csv_number(g), csv_number(std::abs(c - g))});
            }
        }
        return {0, r.str(), t};
    }
    const KernelSpec K = cfg.kernel();
    if (op == "mild") {
        const FunctionSpec f = function_or(cfg, "u");
        const std::vector<double> u0 = num_list(cfg, "u0", std::vector<double>(f.dimension(), 0.0));
        CsvTable t({"t", "value", "s0_limit", "continuity_ok"});
        int code = 0;
        for (double tt : ts) {
            const MildResult m = mild_solution_dfp(K, u0, f, tt, cfg.tol);
            if (!m.continuity_ok) code = 1;
            t.add_row({csv_number(tt), csv_number(scalar_value(m.value)), csv_number(m.s0_limit),
                       m.continuity_ok ? "true" : "false"});
        }
        return {code, r.str(), t};
    }
    const FunctionSpec g = function_or(cfg, "g");
    CsvTable t({"t", "value"});
    for (double tt : ts) t.add_row({csv_number(tt), csv_number(scalar_value(mild_solution_line(K, g, tt, cfg.tol)))});
    return {0, r.str(), t};
}

// ------------------------------------------------------------ export

CommandOutput cmd_export(const RunConfig& cfg, Report& r) {
    const std::string what = cfg.str("which", "function");
    r.kv("which", what);
    if (what == "defaults") {
        CsvTable t({"key", "value", "description"});
        for (const auto& d : defaults_table()) t.add_row({d.key, d.value, d.description});
        return {0, r.str(), t};
    }
    if (what != "function") throw ConfigError("[params] which: expected function or defaults");
    const FunctionSpec f = cfg.function("function");
    const double lo = f.domain() == Domain::HalfLine ? 0.0 : -8.0;
    const std::vector<double> xs = grid_or_param(cfg, "x", GridSpec::uniform(lo, 8.0, 161).values());
    const bool has_tau = cfg.has_param("tau");
    const double tau = cfg.num("tau", 0.0);
    const bool has_p = cfg.has_binding("exponent");
    const ExponentSpec p = cfg.exponent("exponent", 1.0);
    std::vector<std::string> header{"x"};
    const std::size_t dim = f.dimension();
    for (std::size_t d = 0; d < dim; ++d) header.push_back(dim == 1 ? "value" : "value_" + std::to_string(d));
    if (has_tau) header.push_back("difference");
    if (has_p) header.push_back("p");
    CsvTable t(header);
    const FunctionSpec diff = has_tau ? FunctionSpec::difference(f, tau) : f;
    for (double x : xs) {
        std::vector<std::string> row{csv_number(x)};
        for (double v : f.evaluate(x)) row.push_back(csv_number(v));
        if (has_tau) row.push_back(csv_number(diff.norm_at(x)));
        if (has_p) row.push_back(csv_number(p.at(x)));
        t.add_row(std::move(row));
    }
    r.kv("function", f.describe());
    return {0, r.str(), t};
}

}  // namespace

CommandOutput run_command(const RunConfig& cfg) {
    Report r;
    r.kv("command", cfg.command);
    r.kv("seed", std::to_string(cfg.seed));
    r.kv("tol", cfg.tol);
    const std::string& c = cfg.command;
    if (c == "norm") return cmd_norm(cfg, r);
    if (c == "seminorm") return cmd_seminorm(cfg, r);
    if (c == "membership") return cmd_membership(cfg, r);
    if (c == "vanishing") return cmd_vanishing(cfg, r);
    if (c == "convolve") return cmd_convolve(cfg, r);
    if (c == "check") return cmd_check(cfg, r);
    if (c == "frac") return cmd_frac(cfg, r);
    if (c == "export") return cmd_export(cfg, r);
    if (c == "paper-suite") {
        const SuiteReport s = run_paper_suite(cfg.str("selection", "all"));
        r.raw(s.summary);
        return {s.all_match ? 0 : 1, r.str(), s.table};
    }
    if (c.empty()) throw UsageError("no command given");
    throw UsageError("unknown command '" + c + "'");
}

}  // namespace wap
