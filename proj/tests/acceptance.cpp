// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
// With --known-failures 3,8,9 the exit is zero only when exactly those fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "wap/apclass.hpp"
#include "wap/convolution.hpp"
#include "wap/ergodic.hpp"
#include "wap/fractional.hpp"
#include "wap/paper_suite.hpp"
#include "wap/varlebesgue.hpp"
#include "wap/weylnorms.hpp"

using namespace wap;
using wap::test::random_pwc;
using wap::test::rel_close;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void add(Outcome& o, bool ok, const std::string& what) {
    if (!ok) o.pass = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += what;
}

// psi(l) = l^sigma with p = 1 gives F = l^{-sigma}.
ClassConfig power_class(double sigma, bool equi) {
    ClassConfig c;
    c.weight = WeightSpec::power_of_l(-sigma);
    c.equi = equi;
    return c;
}

FunctionSpec spikes_one() { return FunctionSpec::spike_train(AmplitudeRule::constant(1.0)); }
FunctionSpec spikes_sqrt() { return FunctionSpec::spike_train(AmplitudeRule::sqrt_n()); }

Outcome criterion1() {
    Outcome o;
    double worst = 0.0;
    for (double p : {1.0, 2.0})
        for (double tau : {0.25, 1.0, 2.0}) {
            SeminormRequest r;
            r.f = FunctionSpec::heaviside();
            r.p = ExponentSpec::constant(p);
            r.tau = tau;
            r.l = 2 * tau + 1;
            worst = std::max(worst, std::abs(seminorm(r).value - std::pow(tau, 1.0 / p)));
        }
    add(o, worst <= 1e-6, "max |seminorm - |tau|^{1/p}| = " + fmt(worst));
    return o;
}

Outcome criterion2() {
    Outcome o;
    const auto chi = FunctionSpec::indicator(0, 0.5);
    const auto s1 = membership_report(chi, power_class(1.0, true));
    add(o, s1.satisfied(), "sigma=1: " + to_string(s1.status));
    ClassConfig c0 = power_class(0.0, true);
    c0.eps_list = {0.2};
    c0.scan_range = std::make_pair(10.0, 20.0);
    const auto s0 = membership_report(chi, c0);
    add(o, s0.violated(), "sigma=0, eps=0.2, scan [10,20]: " + to_string(s0.status));
    return o;
}

Outcome criterion3() {
    Outcome o;
    const auto H = FunctionSpec::heaviside();
    for (double sigma : {0.5, 1.0, 2.0}) {
        const auto v = membership_report(H, power_class(sigma, true));
        add(o, v.violated(), "equi psi=l^" + fmt(sigma) + ": " + to_string(v.status));
    }
    const auto w = membership_report(H, power_class(1.0, false));
    add(o, w.satisfied(), "non-equi psi=l: " + to_string(w.status));
    SeminormRequest r;
    r.f = H;
    r.tau = 1.0;
    r.weight = WeightSpec::power_of_l(-1.0);
    const auto lim = limsup_over_l(r, GridSpec::geometric(2, 256, 8));
    add(o, lim.value <= 1e-2, "limsup at l=256 " + fmt(lim.value));
    return o;
}

Outcome criterion4() {
    Outcome o;
    std::mt19937_64 rng(4);
    LuxOptions opt;
    opt.force_bisection = true;
    int bad = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = random_pwc(rng);
        for (double p : {1.0, 1.5, 2.0, 4.0}) {
            const double oracle = std::pow(exact_power_integral(f, p, 0, 1), 1.0 / p);
            const double v = luxemburg_norm(f, ExponentSpec::constant(p), 0, 1, opt).value;
            if (oracle > 0) worst = std::max(worst, std::abs(v - oracle) / oracle);
            if (!rel_close(v, oracle, 1e-9) && !(v == 0 && oracle == 0)) ++bad;
        }
    }
    add(o, bad == 0, "800 bisection cases, max rel err " + fmt(worst));
    const double mixed =
        luxemburg_norm(FunctionSpec::indicator(0, 1), ExponentSpec::piecewise({0.5}, {2, 4}), 0, 1).value;
    add(o, std::abs(mixed - 1.0) <= 1e-9, "mixed exponent " + fmt(mixed));
    return o;
}

Outcome criterion5() {
    Outcome o;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int hv = 0, ev = 0, dv = 0;
    for (int i = 0; i < 200; ++i) {
        const auto f = random_pwc(rng), g = random_pwc(rng);
        // p, r in [2, 6] keep 1/q = 1/p + 1/r <= 1.
        const auto p = ExponentSpec::piecewise({0.5}, {2 + 4 * u(rng), 2 + 4 * u(rng)});
        const auto r = ExponentSpec::piecewise({0.5}, {2 + 4 * u(rng), 2 + 4 * u(rng)});
        const auto q = ExponentSpec::piecewise(
            {0.5}, {1.0 / (1.0 / p.at(0.25) + 1.0 / r.at(0.25)), 1.0 / (1.0 / p.at(0.75) + 1.0 / r.at(0.75))});
        if (!holder_check(f, g, p, q, r, 0, 1).satisfied()) ++hv;
    }
    for (int i = 0; i < 200; ++i) {
        const auto f = random_pwc(rng, -2, 8, 8);
        const double t = 6 * u(rng) - 1, l = 0.1 + 4 * u(rng);
        const auto p = ExponentSpec::piecewise({t + l * u(rng)}, {1 + 4 * u(rng), 1 + 4 * u(rng)});
        if (!embedding_check(f, p, t, l).satisfied()) ++ev;
    }
    for (int i = 0; i < 200; ++i) {
        const auto f = random_pwc(rng);
        const auto g = FunctionSpec::scale(u(rng), f);
        const auto p = ExponentSpec::piecewise({u(rng)}, {1 + 3 * u(rng), 1 + 3 * u(rng)});
        if (!domination_check(f, g, p, 0, 1).satisfied()) ++dv;
    }
    add(o, hv == 0, "Hoelder violations " + std::to_string(hv) + "/200");
    add(o, ev == 0, "embedding violations " + std::to_string(ev) + "/200");
    add(o, dv == 0, "domination violations " + std::to_string(dv) + "/200");
    return o;
}

Outcome criterion6() {
    Outcome o;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<PhiSpec> convex{PhiSpec::catalog("square"), PhiSpec::catalog("expm1"),
                                      PhiSpec::catalog("cube"), PhiSpec::power(1.5)};
    const std::vector<PhiSpec> concave{PhiSpec::catalog("sqrt"), PhiSpec::catalog("log1p"),
                                       PhiSpec::catalog("sat"), PhiSpec::power(0.5)};
    int cv = 0, cc = 0;
    for (int i = 0; i < 500; ++i) {
        const auto a = SequenceSpec::geometric(0.05 + 0.9 * u(rng));
        std::vector<double> xs(1 + i % 16);
        for (double& x : xs) x = 4 * u(rng);
        if (!jensen_series_check(convex[i % convex.size()], a, xs).satisfied()) ++cv;
        if (!jensen_series_check(concave[i % concave.size()], a, xs).satisfied()) ++cc;
    }
    add(o, cv == 0, "convex violations " + std::to_string(cv) + "/500");
    add(o, cc == 0, "concave (reversed) violations " + std::to_string(cc) + "/500");
    return o;
}

Outcome criterion7() {
    Outcome o;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int bad = 0;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto f = random_pwc(rng, -2, 2, 6);
        const double tau = 3 * u(rng) - 1.5, l = 0.25 + 4 * u(rng), p = 1 + 3 * u(rng), sigma = 2 * u(rng) - 1;
        const auto P = ExponentSpec::constant(p);
        const auto psi = PsiSpec::power(sigma);
        SeminormRequest b, q;
        b.f = q.f = f;
        b.tau = q.tau = tau;
        b.l = q.l = l;
        b.p = q.p = P;
        b.family = Family::Bracket;
        b.weight = WeightSpec::psi_bracket(psi, P);
        q.weight = WeightSpec::psi_power(psi, P);
        const double vb = seminorm(b).value, vq = seminorm(q).value;
        if (vb > 0 || vq > 0) worst = std::max(worst, std::abs(vb - vq) / std::max(vb, vq));
        if (!(rel_close(vb, vq, 1e-9) || (vb == 0 && vq == 0))) ++bad;
    }
    add(o, bad == 0, "100 cases, max rel diff " + fmt(worst));
    return o;
}

Outcome criterion8() {
    Outcome o;
    int total = 0, bad = 0;
    std::string first;
    for (long k = 0; k <= 20; ++k)
        for (double l : {0.5, 1.0, 2.0, 5.0})
            for (double q : {1.0, 2.0, 4.0})
                for (double b : {0.5, 1.0})
                    for (double g : {1.5, 2.0, 3.0}) {
                        if (!((b - 1.0) * q > -1.0)) continue;
                        ++total;
                        const auto v = section41_bound_check(k, l, q, b, g);
                        if (!v.satisfied()) {
                            if (bad == 0)
                                first = "k=" + std::to_string(k) + " l=" + fmt(l) + " q=" + fmt(q) + " beta=" +
                                        fmt(b) + " gamma=" + fmt(g) + ": " + fmt(v.lhs) + " > " + fmt(v.rhs);
                            ++bad;
                        }
                    }
    add(o, bad == 0, std::to_string(bad) + " of " + std::to_string(total) + " cells violated" +
                         (first.empty() ? "" : " (first " + first + ")"));
    return o;
}

// Max window / bound over a 10 x 10 x 10 (t, l, x) grid, p = 1.
double max_ratio(const FunctionSpec& q, const std::function<double(double, double)>& bound) {
    static const double ts[] = {0, 1, 3, 10, 30, 100, 300, 1000, 3000, 10000};
    static const double ls[] = {0.5, 1, 2, 5, 10, 20, 50, 100, 200, 500};
    static const double xs[] = {0, 0.5, 1, 2, 3.7, 10, 25, 50, 99, 250};
    VanishingConfig cfg;
    double worst = 0.0;
    for (double t : ts)
        for (double l : ls)
            for (double x : xs) worst = std::max(worst, vanishing_window(q, cfg, l, t, x) / bound(l, t));
    return worst;
}

Outcome criterion9() {
    Outcome o;
    const double r1 = max_ratio(spikes_one(), [](double l, double t) { return 2.0 + l / (std::sqrt(t) + std::sqrt(l)); });
    add(o, r1 <= 1.0 + 1e-9, "SpikeTrain(1) max window/bound " + fmt(r1));
    const double r2 = max_ratio(spikes_sqrt(), [](double l, double t) { return std::sqrt(l + t); });
    add(o, r2 <= 1.0 + 1e-9, "SpikeTrain(sqrt n) max window/(l+t)^{1/2} " + fmt(r2));
    for (double sigma : {-1.0, -0.5, 0.0}) {
        VanishingConfig c;
        c.weight = WeightSpec::power_of_l(sigma);
        const auto v = vanishing_verdict(spikes_one(), c);
        const bool ok = sigma < 0 ? v.satisfied() : !v.satisfied();
        add(o, ok, "SpikeTrain(1) equi sigma=" + fmt(sigma) + " " + to_string(v.status));
    }
    for (double sigma : {-1.0, -0.6, -0.25, 0.0}) {
        VanishingConfig c = weyl_order_defaults();
        c.weight = WeightSpec::power_of_l(sigma);
        const auto v = vanishing_verdict(spikes_sqrt(), c);
        const bool ok = sigma < -0.5 ? v.satisfied() : !v.satisfied();
        add(o, ok, "SpikeTrain(sqrt n) weyl sigma=" + fmt(sigma) + " " + to_string(v.status));
    }
    return o;
}

Outcome criterion10() {
    Outcome o;
    const auto id = FunctionSpec::callable([](double t) { return t; }, {});
    FracConfig cfg;
    double worst = 0.0;
    for (double z : {0.3, 0.5, 0.9})
        for (int i = 0; i <= 19; ++i) {
            const double t = 0.1 + 0.1 * i;
            cfg.zeta = z;
            const double exact = std::pow(t, 1 - z) / std::tgamma(2 - z);
            worst = std::max(worst, std::abs(caputo_derivative(id, t, cfg).value - exact) / exact);
        }
    add(o, worst <= 1e-4, "Caputo power rule max rel err " + fmt(worst));
    double sg = 0.0;
    for (double z : {0.25, 0.5, 0.75})
        for (double e : {0.3, 0.5, 1.0})
            for (double t : {0.5, 1.0, 2.0}) sg = std::max(sg, std::abs(kernel_convolution(z, e, t) - gamma_kernel(z + e, t)));
    add(o, sg <= 1e-6, "semigroup max err " + fmt(sg));
    const auto S = KernelSpec::exp_decay(1, 1, 1);
    const auto f = FunctionSpec::callable([](double t) { return std::cos(t); }, {});
    auto u = [&](double t) { return mild_solution_dfp(S, {0.5}, f, t, 1e-12).value[0]; };
    double res = 0.0;
    const double h = 1e-4;
    for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double du = (u(t + h) - u(t - h)) / (2 * h);
        res = std::max(res, std::abs(du + u(t) - std::cos(t)));
    }
    add(o, res <= 1e-4, "mild residual " + fmt(res));
    return o;
}

Outcome criterion11() {
    Outcome o;
    const auto R = KernelSpec::exp_decay(1, 1, 1);
    const auto g = FunctionSpec::callable([](double x) { return std::sin(x); }, {});
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = -10 + 0.05 * i;
        worst = std::max(worst, std::abs(infinite_convolution(R, g, x)[0] - (std::sin(x) - std::cos(x)) / 2));
    }
    add(o, worst <= 1e-6, "max |G - (sin - cos)/2| " + fmt(worst));
    SeminormRequest r;
    r.f = convolution_function(R, g);
    r.tau = 2 * M_PI;
    r.l = 1.0;
    r.t_grid = GridSpec::uniform(-10, 10, 21);
    r.refine = false;
    const double s = seminorm(r).value;
    add(o, s < 1e-5, "seminorm at tau=2pi " + fmt(s));
    return o;
}

Outcome criterion12() {
    Outcome o;
    const auto a = run_paper_suite("all");
    const auto b = run_paper_suite("all");
    int mism = 0;
    for (const auto& row : a.rows) mism += row.match ? 0 : 1;
    add(o, a.all_match, std::to_string(a.rows.size()) + " rows, " + std::to_string(mism) + " mismatches");
    add(o, a.table.str() == b.table.str(), a.table.str() == b.table.str() ? "CSV identical across runs"
                                                                            : "CSV differs across runs");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::optional<std::set<int>> known;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--known-failures" && i + 1 < argc) {
            known.emplace();
            std::stringstream ss(argv[++i]);
            for (std::string tok; std::getline(ss, tok, ',');) known->insert(std::stoi(tok));
        } else {
            std::fprintf(stderr, "usage: acceptance [--known-failures N,N,...]\n");
            return 2;
        }
    }
    using Clock = std::chrono::steady_clock;
    struct Entry {
        int id;
        double limit_s;  // 0: no runtime bound
        std::function<Outcome()> run;
    };
    const std::vector<Entry> entries{
        {1, 5, criterion1},   {2, 30, criterion2},  {3, 0, criterion3},  {4, 0, criterion4},
        {5, 0, criterion5},   {6, 0, criterion6},   {7, 0, criterion7},  {8, 60, criterion8},
        {9, 0, criterion9},   {10, 0, criterion10}, {11, 0, criterion11}, {12, 300, criterion12},
    };
    int failures = 0;
    std::set<int> failed;
    for (const auto& e : entries) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = e.run();
        } catch (const std::exception& ex) {
            o.pass = false;
            o.detail = std::string("exception: ") + ex.what();
        }
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        if (e.limit_s > 0 && secs > e.limit_s) {
            o.pass = false;
            o.detail += "; runtime over " + fmt(e.limit_s) + " s";
        }
        if (!o.pass) {
            ++failures;
            failed.insert(e.id);
        }
        std::printf("criterion %d: %s | %s | %.2f s\n", e.id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(entries.size()) - failures, entries.size());
    if (!known) return failures == 0 ? 0 : 1;
    std::string ks;
    for (int k : *known) ks += (ks.empty() ? "" : ",") + std::to_string(k);
    const bool same = failed == *known;
    std::printf("failing set %s the documented known failures {%s}\n", same ? "matches" : "DIFFERS FROM",
                ks.c_str());
    return same ? 0 : 1;
}
