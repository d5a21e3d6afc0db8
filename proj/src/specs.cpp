#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "wap/funcspace.hpp"

namespace wap {

namespace {

std::string num(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

void audit_phi(const std::string& label, const std::function<double(double)>& f, const PhiSpec::Flags& fl,
               std::uint64_t seed) {
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("phi audit failed for " + label + ": " + what);
    };
    if (std::fabs(f(0.0)) > 1e-14) fail("phi(0) != 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-6.0, 3.0);
    for (int i = 0; i < 256; ++i) {
        double x = std::pow(10.0, u(rng)), y = std::pow(10.0, u(rng));
        if (x > y) std::swap(x, y);
        const double fx = f(x), fy = f(y);
        const double tol = 1e-10 * (std::fabs(fx) + std::fabs(fy)) + 1e-300;
        if (fl.monotone && fx > fy + tol) fail("declared monotone");
        const double fm = f(0.5 * (x + y));
        if (fl.convex && fm > 0.5 * (fx + fy) + tol) fail("declared convex");
        if (fl.concave && fm < 0.5 * (fx + fy) - tol) fail("declared concave");
        if (fl.subadditive && f(x + y) > fx + fy + tol) fail("declared subadditive");
    }
}

}  // namespace

PhiSpec PhiSpec::custom(std::string label, std::function<double(double)> fn, Flags flags,
                        std::function<double(double)> varphi, std::uint64_t audit_seed) {
    if (!fn) throw std::invalid_argument("phi: empty function");
    if (flags.convex && flags.concave) {
        // only linear maps are both; the audit below will catch anything else
    }
    audit_phi(label, fn, flags, audit_seed);
    PhiSpec p;
    p.fn_ = std::make_shared<std::function<double(double)>>(std::move(fn));
    p.varphi_ = std::make_shared<std::function<double(double)>>(std::move(varphi));
    p.flags_ = flags;
    p.label_ = std::move(label);
    return p;
}

PhiSpec PhiSpec::power(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("phi power: alpha must be positive");
    Flags f;
    f.monotone = true;
    f.convex = alpha >= 1.0;
    f.concave = alpha <= 1.0;
    f.subadditive = alpha <= 1.0;
    std::function<double(double)> fn;
    if (alpha == 1.0)
        fn = [](double x) { return x; };
    else if (alpha == 2.0)
        fn = [](double x) { return x * x; };
    else
        fn = [alpha](double x) { return std::pow(x, alpha); };
    PhiSpec p = custom(alpha == 1.0 ? "identity" : "power(" + num(alpha) + ")", std::move(fn), f,
                       [alpha](double l) { return std::pow(l, alpha); });
    p.alpha_ = alpha;
    p.identity_ = alpha == 1.0;
    return p;
}

PhiSpec PhiSpec::identity() { return power(1.0); }

PhiSpec PhiSpec::catalog(std::string_view name) {
    if (name == "identity") return identity();
    if (name == "square") return power(2.0);
    if (name == "cube") return power(3.0);
    if (name == "sqrt") return power(0.5);
    Flags f;
    if (name == "log1p") {
        f.concave = true;
        f.subadditive = true;
        return custom("log1p", [](double x) { return std::log1p(x); }, f,
                      [](double l) { return std::max(1.0, l); });
    }
    if (name == "sat") {
        f.concave = true;
        f.subadditive = true;
        return custom("sat", [](double x) { return x / (1.0 + x); }, f,
                      [](double l) { return std::max(1.0, l); });
    }
    if (name == "expm1") {
        f.convex = true;
        return custom("expm1", [](double x) { return std::expm1(x); }, f);
    }
    throw std::invalid_argument("unknown phi catalog entry '" + std::string(name) + "'");
}

double PhiSpec::varphi(double l) const {
    if (!has_varphi()) throw std::logic_error("phi " + label_ + " has no companion varphi");
    return (*varphi_)(l);
}

double PhiSpec::inverse_sup(double y) const {
    if (y < 0.0) return 0.0;
    if (alpha_) return std::pow(y, 1.0 / *alpha_);
    if (label_ == "log1p") return std::expm1(y);
    if (label_ == "sat") return y >= 1.0 ? kInf : y / (1.0 - y);
    if (label_ == "expm1") return std::log1p(y);
    const auto& f = *fn_;
    double hi = 1.0;
    while (f(hi) <= y) {
        hi *= 2.0;
        if (hi > 1e300) return kInf;
    }
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) <= y ? lo : hi) = mid;
    }
    return lo;
}

PsiSpec PsiSpec::power(double sigma) {
    std::function<double(double)> fn;
    if (sigma == 0.0)
        fn = [](double) { return 1.0; };
    else if (sigma == 1.0)
        fn = [](double l) { return l; };
    else
        fn = [sigma](double l) { return std::pow(l, sigma); };
    return {std::move(fn), "l^" + num(sigma)};
}

WeightSpec WeightSpec::custom(std::string label, std::function<double(double, double)> fn, bool t_independent,
                              bool satisfies_d) {
    if (!fn) throw std::invalid_argument("weight: empty function");
    WeightSpec w;
    w.fn_ = std::make_shared<std::function<double(double, double)>>(std::move(fn));
    w.t_independent_ = t_independent;
    w.satisfies_d_ = satisfies_d;
    w.label_ = std::move(label);
    return w;
}

WeightSpec WeightSpec::one() { return custom("1", [](double, double) { return 1.0; }, true, true); }

WeightSpec WeightSpec::power_of_l(double sigma) {
    if (sigma == 0.0) return custom("l^0", [](double, double) { return 1.0; }, true, true);
    return custom("l^" + num(sigma), [sigma](double l, double) { return std::pow(l, sigma); }, true, true);
}

WeightSpec WeightSpec::psi_power(const PsiSpec& psi, const ExponentSpec& p) {
    auto fn = psi.fn;
    const std::string label = psi.label + "^(-1/p)";
    if (auto c = p.constant_value()) {
        const double e = *c == kInf ? 0.0 : -1.0 / *c;
        return custom(label, [fn, e](double l, double) { return e == 0.0 ? 1.0 : std::pow(fn(l), e); }, true, true);
    }
    return custom(
        label,
        [fn, p](double l, double t) {
            const double pt = p.at(t);
            return pt == kInf ? 1.0 : std::pow(fn(l), -1.0 / pt);
        },
        false, false);
}

WeightSpec WeightSpec::psi_bracket(const PsiSpec& psi, const ExponentSpec& p) {
    auto fn = psi.fn;
    const std::string label = "(l/" + psi.label + ")^(1/p)";
    return custom(
        label,
        [fn, p](double l, double t) {
            const double pt = p.at(t);
            return pt == kInf ? 1.0 : std::pow(l / fn(l), 1.0 / pt);
        },
        p.is_constant(), p.is_constant());
}

double WeightSpec::operator()(double l, double t) const {
    const double v = (*fn_)(l, t);
    if (!(v > 0.0) || std::isnan(v)) throw std::domain_error("weight " + label_ + " not positive at l=" + num(l));
    return v;
}

// ------------------------------------------------------------------ kernels

KernelSpec KernelSpec::poly_decay(double M, double beta, double gamma) {
    if (!(M > 0.0) || !(beta > 0.0) || !(gamma > beta))
        throw std::invalid_argument("polydecay: need M > 0, beta > 0, gamma > beta");
    KernelSpec k;
    k.kind_ = Kind::PolyDecay;
    k.M_ = M;
    k.beta_ = beta;
    k.gamma_ = gamma;
    return k;
}

KernelSpec KernelSpec::exp_decay(double M, double beta, double c) {
    if (!(M > 0.0) || !(beta > 0.0) || !(c > 0.0))
        throw std::invalid_argument("expdecay: need M > 0, beta > 0, c > 0");
    KernelSpec k;
    k.kind_ = Kind::ExpDecay;
    k.M_ = M;
    k.beta_ = beta;
    k.c_ = c;
    return k;
}

KernelSpec KernelSpec::table(std::vector<double> ts, std::vector<double> vs) {
    if (ts.size() < 2 || ts.size() != vs.size()) throw std::invalid_argument("table kernel: need >= 2 samples");
    if (ts.front() < 0.0) throw std::invalid_argument("table kernel: samples must be on [0, inf)");
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (!(ts[i] > ts[i - 1])) throw std::invalid_argument("table kernel: abscissae must increase");
    KernelSpec k;
    k.kind_ = Kind::Table;
    k.beta_ = 1.0;
    k.ts_ = std::make_shared<const std::vector<double>>(std::move(ts));
    k.vs_ = std::make_shared<const std::vector<double>>(std::move(vs));
    return k;
}

double KernelSpec::operator()(double t) const {
    if (t < 0.0) return 0.0;
    switch (kind_) {
        case Kind::PolyDecay:
            if (t == 0.0) return beta_ < 1.0 ? kInf : (beta_ == 1.0 ? M_ : 0.0);
            return M_ * (beta_ == 1.0 ? 1.0 : std::pow(t, beta_ - 1.0)) / (1.0 + std::pow(t, gamma_));
        case Kind::ExpDecay:
            if (t == 0.0) return beta_ < 1.0 ? kInf : (beta_ == 1.0 ? M_ : 0.0);
            return M_ * (beta_ == 1.0 ? 1.0 : std::pow(t, beta_ - 1.0)) * std::exp(-c_ * t);
        case Kind::Table: {
            const auto& ts = *ts_;
            const auto& vs = *vs_;
            if (t < ts.front() || t > ts.back()) return 0.0;
            const auto it = std::upper_bound(ts.begin(), ts.end(), t);
            if (it == ts.end()) return vs.back();
            const std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
            const double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
            return vs[i] + w * (vs[i + 1] - vs[i]);
        }
    }
    return 0.0;
}

double KernelSpec::singular_exponent() const { return kind_ == Kind::Table ? 0.0 : std::min(0.0, beta_ - 1.0); }

double KernelSpec::value_at_zero_plus() const {
    if (kind_ == Kind::Table) return (*this)(ts_->front());
    return (*this)(0.0);
}

double KernelSpec::integral(double a, double b) const {
    if (b <= a) return 0.0;
    a = std::max(a, 0.0);
    if (b <= a) return 0.0;
    if (kind_ == Kind::ExpDecay && beta_ == 1.0) {
        if (b == kInf) return M_ * std::exp(-c_ * a) / c_;
        return M_ * (std::exp(-c_ * a) - std::exp(-c_ * b)) / c_;
    }
    if (kind_ == Kind::PolyDecay && beta_ == 1.0 && gamma_ == 2.0) {
        if (b == kInf) return M_ * (M_PI / 2 - std::atan(a));
        return M_ * (std::atan(b) - std::atan(a));
    }
    double tail = 0.0;
    if (b == kInf) {
        const double V = std::max(a, truncation_point(1e-14));
        tail = tail_integral(V);
        b = V;
    }
    std::vector<double> br;
    if (kind_ == Kind::Table) br = *ts_;
    std::vector<quad::Singularity> sg;
    if (a == 0.0 && singular_exponent() < 0.0) sg.push_back({0.0, singular_exponent()});
    quad::Options opt;
    opt.abs_tol = 1e-13;
    return quad::integrate([this](double t) { return (*this)(t); }, a, b, br, opt, sg).value + tail;
}

double KernelSpec::tail_integral(double V) const {
    if (V <= 0.0) return kInf;
    switch (kind_) {
        case Kind::PolyDecay: return M_ * std::pow(V, beta_ - gamma_) / (gamma_ - beta_);
        case Kind::ExpDecay: {
            if (beta_ <= 1.0) return M_ * std::pow(V, beta_ - 1.0) * std::exp(-c_ * V) / c_;
            const double knee = 2.0 * (beta_ - 1.0) / c_;
            if (V >= knee) return 2.0 * M_ * std::pow(V, beta_ - 1.0) * std::exp(-c_ * V) / c_;
            return integral(V, knee) + 2.0 * M_ * std::pow(knee, beta_ - 1.0) * std::exp(-c_ * knee) / c_;
        }
        case Kind::Table: {
            if (V >= ts_->back()) return 0.0;
            double s = 0.0;
            const auto& ts = *ts_;
            for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
                const double lo = std::max(ts[i], V), hi = ts[i + 1];
                if (hi <= lo) continue;
                s += 0.5 * (std::fabs((*this)(lo)) + std::fabs((*this)(hi))) * (hi - lo);
            }
            return s;
        }
    }
    return kInf;
}

double KernelSpec::truncation_point(double eps) const {
    if (kind_ == Kind::Table) return ts_->back();
    double hi = 1.0;
    while (tail_integral(hi) > eps) {
        hi *= 2.0;
        if (hi > 1e300) throw std::runtime_error("kernel tail does not reach tolerance");
    }
    double lo = hi / 2.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (tail_integral(mid) > eps ? lo : hi) = mid;
    }
    return hi;
}

double KernelSpec::window_sup(double a, double b) const {
    a = std::max(a, 0.0);
    if (b < a) return 0.0;
    if (kind_ == Kind::Table) {
        double m = std::max(std::fabs((*this)(a)), std::fabs((*this)(b)));
        for (double t : *ts_)
            if (t > a && t < b) m = std::max(m, std::fabs((*this)(t)));
        return m;
    }
    if (beta_ <= 1.0) return (*this)(a);
    double peak;
    if (kind_ == Kind::ExpDecay)
        peak = (beta_ - 1.0) / c_;
    else
        peak = std::pow((beta_ - 1.0) / (gamma_ - beta_ + 1.0), 1.0 / gamma_);
    return (*this)(std::clamp(peak, a, b));
}

FunctionSpec KernelSpec::as_function() const {
    CallableTraits tr;
    tr.label = describe();
    tr.lower = 0.0;
    if (singular_exponent() < 0.0) tr.singular.push_back({0.0, singular_exponent()});
    if (kind_ == Kind::Table) tr.kinks = *ts_;
    if (singular_exponent() == 0.0) tr.sup_bound = window_sup(0.0, kInf);
    KernelSpec self = *this;
    return FunctionSpec::callable([self](double t) { return self(t); }, tr);
}

KernelSpec KernelSpec::scaled(double c) const {
    if (!(c > 0.0)) throw std::invalid_argument("kernel scale must be positive");
    KernelSpec k = *this;
    if (kind_ == Kind::Table) {
        auto vs = *vs_;
        for (auto& v : vs) v *= c;
        k.vs_ = std::make_shared<const std::vector<double>>(std::move(vs));
    } else {
        k.M_ *= c;
    }
    return k;
}

std::string KernelSpec::describe() const {
    switch (kind_) {
        case Kind::PolyDecay:
            return "polydecay(M=" + num(M_) + ", beta=" + num(beta_) + ", gamma=" + num(gamma_) + ")";
        case Kind::ExpDecay: return "expdecay(M=" + num(M_) + ", beta=" + num(beta_) + ", c=" + num(c_) + ")";
        case Kind::Table: return "table(n=" + std::to_string(ts_->size()) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------- sequences

SequenceSpec SequenceSpec::geometric(double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("geometric sequence: need 0 < r < 1");
    SequenceSpec s;
    s.kind_ = Kind::Geometric;
    s.r_ = r;
    return s;
}

SequenceSpec SequenceSpec::two_sided_geometric(double r) {
    SequenceSpec s = geometric(r);
    s.kind_ = Kind::TwoSided;
    s.two_sided_ = true;
    return s;
}

SequenceSpec SequenceSpec::custom(std::vector<double> terms, bool two_sided) {
    if (terms.empty()) throw std::invalid_argument("sequence: empty");
    double total = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i] < 0.0) throw std::invalid_argument("sequence: negative term");
        total += (two_sided && i > 0 ? 2.0 : 1.0) * terms[i];
    }
    if (std::fabs(total - 1.0) > 1e-9) throw std::invalid_argument("sequence: terms must sum to 1");
    SequenceSpec s;
    s.kind_ = Kind::Custom;
    s.two_sided_ = two_sided;
    s.terms_ = std::make_shared<const std::vector<double>>(std::move(terms));
    return s;
}

double SequenceSpec::operator()(long k) const {
    if (k < 0 && !two_sided_) return 0.0;
    const long a = k < 0 ? -k : k;
    switch (kind_) {
        case Kind::Geometric: return (1.0 - r_) * std::pow(r_, static_cast<double>(a));
        case Kind::TwoSided: return (1.0 - r_) / (1.0 + r_) * std::pow(r_, static_cast<double>(a));
        case Kind::Custom: return static_cast<std::size_t>(a) < terms_->size() ? (*terms_)[a] : 0.0;
    }
    return 0.0;
}

double SequenceSpec::tail_mass(long K) const {
    if (K <= 0) return 1.0;
    switch (kind_) {
        case Kind::Geometric: return std::pow(r_, static_cast<double>(K));
        case Kind::TwoSided: return 2.0 * std::pow(r_, static_cast<double>(K)) / (1.0 + r_);
        case Kind::Custom: {
            double s = 0.0;
            for (std::size_t i = static_cast<std::size_t>(K); i < terms_->size(); ++i)
                s += (two_sided_ ? 2.0 : 1.0) * (*terms_)[i];
            return s;
        }
    }
    return 0.0;
}

std::string SequenceSpec::describe() const {
    switch (kind_) {
        case Kind::Geometric: return "geometric(" + num(r_) + ")";
        case Kind::TwoSided: return "twosided(" + num(r_) + ")";
        case Kind::Custom: return "custom(n=" + std::to_string(terms_->size()) + ")";
    }
    return "?";
}

}  // namespace wap
