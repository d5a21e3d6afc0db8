#include "wap/paper_suite.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "wap/apclass.hpp"
#include "wap/convolution.hpp"
#include "wap/ergodic.hpp"
#include "wap/weylnorms.hpp"

namespace wap {

namespace {

std::string num10(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct Measured {
    std::string text;
    bool match = false;
};

struct Case {
    std::string id, group, description, expected, paper_claim;
    std::function<Measured()> run;
};

Measured status_case(VerdictStatus expect, const Verdict& v) {
    return {to_string(v.status), v.status == expect};
}

Measured value_case(double expect, double tol, double got) {
    return {num10(got), std::abs(got - expect) <= tol * std::max(1.0, std::abs(expect))};
}

ClassConfig power_class(double sigma, bool equi) {
    // psi(l) = l^sigma with p = 1: F(l, t) = l^{-sigma}.
    ClassConfig c;
    c.weight = WeightSpec::power_of_l(-sigma);
    c.equi = equi;
    return c;
}

FunctionSpec spikes_one() { return FunctionSpec::spike_train(AmplitudeRule::constant(1.0)); }
FunctionSpec spikes_sqrt() { return FunctionSpec::spike_train(AmplitudeRule::sqrt_n()); }

// q = 1/n^2 on [(n-1)^2, n^2): gaps grow and the values vanish.
FunctionSpec more_example() {
    CallableTraits tr;
    tr.label = "more";
    tr.lower = 0.0;
    tr.sup_bound = 1.0;
    for (long n = 1; n <= 1100; ++n) tr.kinks.push_back(static_cast<double>(n * n));
    return FunctionSpec::callable(
        [](double t) {
            const double n = std::floor(std::sqrt(t)) + 1.0;
            return 1.0 / (n * n);
        },
        tr);
}

// Max of window / bound over a fixed 10 x 10 x 10 (t, l, x) grid; p = 1.
Verdict spike_bound_check(const FunctionSpec& q, const std::function<double(double, double)>& bound) {
    static const double ts[] = {0, 1, 3, 10, 30, 100, 300, 1000, 3000, 10000};
    static const double ls[] = {0.5, 1, 2, 5, 10, 20, 50, 100, 200, 500};
    static const double xs[] = {0, 0.5, 1, 2, 3.7, 10, 25, 50, 99, 250};
    VanishingConfig cfg;
    std::vector<double> ratio(1000);
    parallel_for(1000, 0, [&](std::size_t k) {
        const double t = ts[k / 100], l = ls[(k / 10) % 10], x = xs[k % 10];
        ratio[k] = vanishing_window(q, cfg, l, t, x) / bound(l, t);
    });
    Verdict v;
    std::size_t arg = 0;
    for (std::size_t k = 1; k < ratio.size(); ++k)
        if (ratio[k] > ratio[arg]) arg = k;
    v.lhs = ratio[arg];
    v.rhs = 1.0;
    if (ratio[arg] <= 1.0 + 1e-12) {
        v.status = VerdictStatus::SatisfiedOnGrid;
    } else {
        v.status = VerdictStatus::ViolatedWithWitness;
        Witness w;
        w.t = ts[arg / 100];
        w.l = ls[(arg / 10) % 10];
        w.x = xs[arg % 10];
        w.value = ratio[arg];
        w.threshold = 1.0;
        w.note = "window norm exceeds the bound";
        v.witness = w;
    }
    v.summary = "max window/bound " + num10(ratio[arg]);
    return v;
}

Measured bound_case(VerdictStatus expect, const Verdict& v) {
    return {to_string(v.status) + " (max ratio " + num10(v.lhs) + ")", v.status == expect};
}

Verdict spike_vanishing(const FunctionSpec& q, double sigma, LimitOrder order) {
    VanishingConfig c = order == LimitOrder::Equi ? VanishingConfig{} : weyl_order_defaults();
    c.weight = WeightSpec::power_of_l(sigma);
    return vanishing_verdict(q, c);
}

// Criterion grid of the kernel bound: count of violated cells.
std::pair<int, int> section41_grid() {
    int total = 0, bad = 0;
    for (long k = 0; k <= 20; ++k)
        for (double l : {0.5, 1.0, 2.0, 5.0})
            for (double q : {1.0, 2.0, 4.0})
                for (double b : {0.5, 1.0})
                    for (double g : {1.5, 2.0, 3.0}) {
                        if (!((b - 1.0) * q > -1.0)) continue;
                        ++total;
                        if (!section41_bound_check(k, l, q, b, g).satisfied()) ++bad;
                    }
    return {bad, total};
}

const std::string kSat = to_string(VerdictStatus::SatisfiedOnGrid);
const std::string kViol = to_string(VerdictStatus::ViolatedWithWitness);

std::vector<Case> all_cases() {
    using VS = VerdictStatus;
    std::vector<Case> c;
    // Heaviside and indicator examples.
    c.push_back({"heaviside-exact-p1", "sec2", "Heaviside paren base seminorm, p=1, tau=1, l=3 equals |tau|^{1/p}", num10(1.0),
                 "agree", [] {
                     SeminormRequest r;
                     r.f = FunctionSpec::heaviside();
                     r.tau = 1.0;
                     r.l = 3.0;
                     return value_case(1.0, 1e-9, seminorm(r).value);
                 }});
    c.push_back({"heaviside-exact-p2", "sec2", "Heaviside paren base seminorm, p=2, tau=2, l=5 equals |tau|^{1/p}",
                 num10(std::sqrt(2.0)), "agree", [] {
                     SeminormRequest r;
                     r.f = FunctionSpec::heaviside();
                     r.p = ExponentSpec::constant(2.0);
                     r.tau = 2.0;
                     r.l = 5.0;
                     return value_case(std::sqrt(2.0), 1e-9, seminorm(r).value);
                 }});
    c.push_back({"indicator-equi-sigma1", "sec2", "chi[0,1/2] equi-Weyl-(1,x,l^1)", kSat, "agree",
                 [] { return status_case(VS::SatisfiedOnGrid, membership_report(FunctionSpec::indicator(0, 0.5), power_class(1.0, true))); }});
    c.push_back({"indicator-equi-sigma0", "sec2", "chi[0,1/2] equi-Weyl-(1,x,l^0), scan [10,20]", kViol, "agree", [] {
                     ClassConfig cc = power_class(0.0, true);
                     cc.scan_range = std::make_pair(10.0, 20.0);
                     return status_case(VS::ViolatedWithWitness, membership_report(FunctionSpec::indicator(0, 0.5), cc));
                 }});
    c.push_back({"indicator-equi-sigma-1", "sec2", "chi[0,1/2] equi-Weyl-(1,x,l^-1)", kViol, "conflict", [] {
                     return status_case(VS::ViolatedWithWitness,
                                        membership_report(FunctionSpec::indicator(0, 0.5), power_class(-1.0, true)));
                 }});
    c.push_back({"heaviside-equi-sigma1", "sec2", "Heaviside equi-Weyl-(1,x,l^1)", kViol, "agree", [] {
                     return status_case(VS::ViolatedWithWitness, membership_report(FunctionSpec::heaviside(), power_class(1.0, true)));
                 }});
    c.push_back({"heaviside-equi-sigma2", "sec2", "Heaviside equi-Weyl-(1,x,l^2)", kSat, "conflict", [] {
                     return status_case(VS::SatisfiedOnGrid, membership_report(FunctionSpec::heaviside(), power_class(2.0, true)));
                 }});
    c.push_back({"heaviside-weyl-psi-l", "sec2", "Heaviside Weyl-(1,x,l) (non-equi)", kSat, "agree", [] {
                     return status_case(VS::SatisfiedOnGrid, membership_report(FunctionSpec::heaviside(), power_class(1.0, false)));
                 }});
    c.push_back({"heaviside-limsup", "sec2", "Heaviside limsup over l in geometric(2,256,8), tau=1, psi=l: |tau|/128",
                 num10(1.0 / 128.0), "agree", [] {
                     SeminormRequest r;
                     r.f = FunctionSpec::heaviside();
                     r.tau = 1.0;
                     r.weight = WeightSpec::power_of_l(-1.0);
                     return value_case(1.0 / 128.0, 1e-9, limsup_over_l(r, GridSpec::geometric(2.0, 256.0, 8)).value);
                 }});
    // Spike trains and the gap example.
    c.push_back({"spikes-bound", "sec3", "SpikeTrain(1) window norm <= 2 + l/(sqrt t + sqrt l), p=1", kSat, "agree", [] {
                     return bound_case(VS::SatisfiedOnGrid, spike_bound_check(spikes_one(), [](double l, double t) {
                                           return 2.0 + l / (std::sqrt(t) + std::sqrt(l));
                                       }));
                 }});
    c.push_back({"spikes-equi-sigma-1", "sec3", "SpikeTrain(1) equi vanishing, F=l^-1", kSat, "agree",
                 [] { return status_case(VS::SatisfiedOnGrid, spike_vanishing(spikes_one(), -1.0, LimitOrder::Equi)); }});
    c.push_back({"spikes-equi-sigma0", "sec3", "SpikeTrain(1) equi vanishing, F=1", kViol, "agree",
                 [] { return status_case(VS::ViolatedWithWitness, spike_vanishing(spikes_one(), 0.0, LimitOrder::Equi)); }});
    c.push_back({"sqrt-spikes-bound", "sec3", "SpikeTrain(sqrt n) window norm <= (l+t)^{1/2}, p=1", kViol, "conflict", [] {
                     return bound_case(VS::ViolatedWithWitness,
                                       spike_bound_check(spikes_sqrt(), [](double l, double t) { return std::sqrt(l + t); }));
                 }});
    c.push_back({"sqrt-spikes-weyl-sigma-1", "sec3", "SpikeTrain(sqrt n) Weyl vanishing, F=l^-1", kSat, "agree",
                 [] { return status_case(VS::SatisfiedOnGrid, spike_vanishing(spikes_sqrt(), -1.0, LimitOrder::Weyl)); }});
    c.push_back({"sqrt-spikes-weyl-sigma-0.6", "sec3", "SpikeTrain(sqrt n) Weyl vanishing, F=l^-0.6", kViol, "conflict",
                 [] { return status_case(VS::ViolatedWithWitness, spike_vanishing(spikes_sqrt(), -0.6, LimitOrder::Weyl)); }});
    c.push_back({"sqrt-spikes-weyl-sigma0", "sec3", "SpikeTrain(sqrt n) Weyl vanishing, F=1", kViol, "agree",
                 [] { return status_case(VS::ViolatedWithWitness, spike_vanishing(spikes_sqrt(), 0.0, LimitOrder::Weyl)); }});
    c.push_back({"sqrt-spikes-equi", "sec3", "SpikeTrain(sqrt n) equi vanishing, F=l^-1", kViol, "agree",
                 [] { return status_case(VS::ViolatedWithWitness, spike_vanishing(spikes_sqrt(), -1.0, LimitOrder::Equi)); }});
    c.push_back({"decaying-steps-equi", "sec3", "q=1/n^2 on [(n-1)^2,n^2) equi vanishing, F=1", kSat, "agree",
                 [] { return status_case(VS::SatisfiedOnGrid, vanishing_verdict(more_example(), VanishingConfig{})); }});
    // Kernel bounds.
    c.push_back({"sec41-k0", "sec41", "k=0, l=1, q=2, beta=1, gamma=2: integral pi/8 + 1/4 within its bound",
                 num10(M_PI / 8 + 0.25), "agree", [] {
                     const Verdict v = section41_bound_check(0, 1.0, 2.0, 1.0, 2.0);
                     Measured m = value_case(M_PI / 8 + 0.25, 1e-9, v.lhs);
                     m.match = m.match && v.satisfied();
                     return m;
                 }});
    c.push_back({"sec41-k3", "sec41", "k=3, l=2, q=1, beta=1, gamma=2: integral atan 8 - atan 6 within its bound",
                 num10(std::atan(8.0) - std::atan(6.0)), "agree", [] {
                     const Verdict v = section41_bound_check(3, 2.0, 1.0, 1.0, 2.0);
                     Measured m = value_case(std::atan(8.0) - std::atan(6.0), 1e-9, v.lhs);
                     m.match = m.match && v.satisfied();
                     return m;
                 }});
    c.push_back({"sec41-grid", "sec41", "per-k bound over k<=20, l, q, beta, gamma grid: violated cells", "9 of 1008",
                 "conflict", [] {
                     const auto [bad, total] = section41_grid();
                     const std::string s = std::to_string(bad) + " of " + std::to_string(total);
                     return Measured{s, s == "9 of 1008"};
                 }});
    c.push_back({"window-sum-growth-p2", "sec41", "l * (sum_k window integrals^{1/q})^p, p=2, beta=1, gamma=2 bounded in l", kViol,
                 "conflict", [] {
                     return status_case(VS::ViolatedWithWitness, bluz_check(2.0, 1.0, 2.0, GridSpec::geometric(1.0, 64.0, 7)));
                 }});
    // Convolution products.
    c.push_back({"conv-exp-sin", "sec4", "G for R=e^-t, g=sin at x=0 equals (sin x - cos x)/2", num10(-0.5), "agree", [] {
                     return value_case(-0.5, 1e-8, infinite_convolution(KernelSpec::exp_decay(1, 1, 1), FunctionSpec::sinusoid(1.0), 0.0)[0]);
                 }});
    c.push_back({"series-W2", "sec4", "W2 for R=e^-t, q=1: (1-e^-1)/(1-e^-1/2)",
                 num10((1 - std::exp(-1.0)) / (1 - std::exp(-1.0) / 2)), "agree", [] {
                     SeriesParams sp;
                     sp.q = ExponentSpec::constant(1.0);
                     return value_case((1 - std::exp(-1.0)) / (1 - std::exp(-1.0) / 2), 1e-8,
                                       series_eval(SeriesKind::W2, sp).value);
                 }});
    c.push_back({"prop-finite", "sec4", "R=e^-t, q=SpikeTrain(1): S decays, hypothesis and conclusion hold", kSat, "agree", [] {
                     const PropFiniteReport r = check_prop_finite(KernelSpec::exp_decay(1, 1, 1), spikes_one(), PropFiniteConfig{});
                     const bool ok = r.S_decays && r.hypothesis.satisfied() && r.zran_ok && r.conclusion.satisfied();
                     return Measured{ok ? kSat : "hypothesis " + to_string(r.hypothesis.status) + ", conclusion " +
                                                      to_string(r.conclusion.status),
                                     ok};
                 }});
    return c;
}

}  // namespace

std::string suite_group(const std::string& selection) {
    if (selection == "all") return "";
    if (selection == "sec2" || selection == "§2-examples") return "sec2";
    if (selection == "sec3" || selection == "§3-examples") return "sec3";
    if (selection == "sec41" || selection == "§4.1-bounds") return "sec41";
    if (selection == "sec4") return "sec4";
    throw UsageError("unknown paper-suite selection '" + selection +
                     "' (expected all, sec2, sec3, sec41, sec4, §2-examples, §3-examples or §4.1-bounds)");
}

SuiteReport run_paper_suite(const std::string& selection) {
    const std::string group = suite_group(selection);
    SuiteReport rep;
    rep.table.set_header({"id", "group", "description", "expected", "measured", "paper_claim", "match"});
    int n = 0, bad = 0;
    for (const Case& c : all_cases()) {
        if (!group.empty() && c.group != group) continue;
        SuiteRow row{c.id, c.group, c.description, c.expected, "", c.paper_claim, false};
        try {
            const Measured m = c.run();
            row.measured = m.text;
            row.match = m.match;
        } catch (const std::exception& ex) {
            row.measured = std::string("error: ") + ex.what();
        }
        ++n;
        if (!row.match) {
            ++bad;
            rep.all_match = false;
        }
        rep.table.add_row({row.id, row.group, row.description, row.expected, row.measured, row.paper_claim,
                           row.match ? "yes" : "no"});
        rep.rows.push_back(std::move(row));
    }
    int conflicts = 0;
    for (const auto& r : rep.rows)
        if (r.paper_claim == "conflict") ++conflicts;
    rep.summary = "selection: " + selection + "\nrows: " + std::to_string(n) + "\nmismatches: " + std::to_string(bad) +
                  "\npaper_claim conflicts: " + std::to_string(conflicts) + "\n";
    for (const auto& r : rep.rows)
        if (!r.match) rep.summary += "mismatch: " + r.id + " expected " + r.expected + ", measured " + r.measured + "\n";
    return rep;
}

}  // namespace wap
