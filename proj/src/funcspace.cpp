#include "wap/funcspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wap {

namespace {

constexpr double kMergeEps = 1e-12;

std::string num(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

double vnorm(const double* v, std::size_t d) {
    if (d == 1) return std::fabs(v[0]);
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += v[i] * v[i];
    return std::sqrt(s);
}

// Stack buffer for small dimensions.
struct Buf {
    std::array<double, 8> small{};
    std::vector<double> big;
    double* data;
    explicit Buf(std::size_t d) {
        if (d <= small.size()) {
            data = small.data();
        } else {
            big.assign(d, 0.0);
            data = big.data();
        }
    }
};

}  // namespace

struct FunctionSpec::Impl {
    virtual ~Impl() = default;
    virtual std::size_t dim() const = 0;
    virtual void eval(double x, double* out) const = 0;
    virtual double lower() const { return -kInf; }
    virtual double upper() const { return kInf; }
    virtual bool exact() const = 0;
    virtual void breaks(double a, double b, std::vector<double>& out) const = 0;
    virtual void sing(double, double, std::vector<quad::Singularity>&) const {}
    virtual std::optional<double> sup() const { return std::nullopt; }
    virtual double noise() const { return 0.0; }
    virtual std::optional<double> period() const { return std::nullopt; }
    virtual std::string describe() const = 0;

    void check_domain(double x) const {
        if (std::isnan(x) || x < lower() - 1e-12 || x > upper() + 1e-12) {
            throw std::domain_error("evaluate: point " + num(x) + " outside domain of " + describe());
        }
    }
};

namespace {

using Impl = FunctionSpec::Impl;
using ImplPtr = std::shared_ptr<const Impl>;

struct PiecewiseConstantImpl final : Impl {
    std::vector<double> br;
    std::vector<Vec> vals;
    Vec left, right;
    Domain domain;
    std::string label;
    std::size_t d;

    std::size_t dim() const override { return d; }
    double lower() const override { return domain == Domain::HalfLine ? 0.0 : -kInf; }
    void eval(double x, double* out) const override {
        check_domain(x);
        const Vec* v;
        if (br.empty() || x < br.front()) {
            v = br.empty() ? &right : &left;
        } else if (x >= br.back()) {
            v = &right;
        } else {
            const auto it = std::upper_bound(br.begin(), br.end(), x);
            v = &vals[static_cast<std::size_t>(it - br.begin()) - 1];
        }
        std::copy(v->begin(), v->end(), out);
    }
    bool exact() const override { return true; }
    void breaks(double a, double b, std::vector<double>& out) const override {
        auto lo = std::upper_bound(br.begin(), br.end(), a);
        for (auto it = lo; it != br.end() && *it < b; ++it) out.push_back(*it);
    }
    std::optional<double> sup() const override {
        double m = 0.0;
        if (!br.empty() || domain == Domain::Line) m = std::max(m, vnorm(left.data(), d));
        m = std::max(m, vnorm(right.data(), d));
        for (const auto& v : vals) m = std::max(m, vnorm(v.data(), d));
        return m;
    }
    std::string describe() const override { return label; }
};

struct SpikeTrainImpl final : Impl {
    AmplitudeRule rule;
    std::size_t dim() const override { return 1; }
    double lower() const override { return 0.0; }
    double amp(long n) const {
        if (rule.max_n >= 0 && n > rule.max_n) return 0.0;
        return rule.amp(n);
    }
    void eval(double x, double* out) const override {
        check_domain(x);
        auto n = static_cast<long>(std::floor(std::sqrt(std::max(x, 0.0))));
        while (n > 0 && static_cast<double>(n) * n > x) --n;
        while (static_cast<double>(n + 1) * (n + 1) <= x) ++n;
        const double start = static_cast<double>(n) * n;
        out[0] = (x >= start && x < start + 1.0) ? amp(n) : 0.0;
    }
    bool exact() const override { return true; }
    void breaks(double a, double b, std::vector<double>& out) const override {
        const double lo = std::max(a, 0.0) - 1.0;
        auto n = static_cast<long>(std::floor(std::sqrt(std::max(lo, 0.0))));
        if (n > 0) --n;
        for (;; ++n) {
            if (rule.max_n >= 0 && n > rule.max_n) break;
            const double s = static_cast<double>(n) * n;
            if (s >= b) break;
            if (s > a) out.push_back(s);
            if (s + 1.0 > a && s + 1.0 < b) out.push_back(s + 1.0);
        }
    }
    std::optional<double> sup() const override {
        if (rule.sup) return rule.sup;
        return std::nullopt;
    }
    std::string describe() const override { return "spiketrain(" + rule.label + ")"; }
};

struct PeriodicImpl final : Impl {
    ImplPtr base;
    double P;
    std::size_t dim() const override { return base->dim(); }
    void eval(double x, double* out) const override {
        double r = x - P * std::floor(x / P);
        if (r >= P) r -= P;
        if (r < 0.0) r = 0.0;
        base->eval(r, out);
    }
    bool exact() const override { return base->exact(); }
    void breaks(double a, double b, std::vector<double>& out) const override {
        std::vector<double> inner;
        base->breaks(0.0, P, inner);
        const double k0 = std::floor(a / P), k1 = std::ceil(b / P);
        if (k1 - k0 > 1e7) throw std::runtime_error("periodic: too many periods in breakpoint request");
        for (double k = k0; k <= k1; k += 1.0) {
            const double off = k * P;
            if (off > a && off < b) out.push_back(off);
            for (double x : inner)
                if (x + off > a && x + off < b) out.push_back(x + off);
        }
    }
    void sing(double a, double b, std::vector<quad::Singularity>& out) const override {
        std::vector<quad::Singularity> inner;
        base->sing(0.0, P, inner);
        if (inner.empty()) return;
        const double k0 = std::floor(a / P), k1 = std::ceil(b / P);
        for (double k = k0; k <= k1; k += 1.0)
            for (auto s : inner) {
                s.at += k * P;
                if (s.at >= a && s.at <= b) out.push_back(s);
            }
    }
    std::optional<double> sup() const override { return base->sup(); }
    double noise() const override { return base->noise(); }
    std::optional<double> period() const override { return P; }
    std::string describe() const override { return "periodic(" + base->describe() + ", " + num(P) + ")"; }
};

struct SinusoidImpl final : Impl {
    double w, ph, A;
    std::size_t dim() const override { return 1; }
    void eval(double x, double* out) const override { out[0] = A * std::sin(w * x + ph); }
    bool exact() const override { return false; }
    void breaks(double, double, std::vector<double>&) const override {}
    std::optional<double> sup() const override { return std::fabs(A); }
    std::optional<double> period() const override {
        if (w == 0.0) return std::nullopt;
        return 2.0 * M_PI / std::fabs(w);
    }
    std::string describe() const override {
        return "sinusoid(freq=" + num(w) + ", phase=" + num(ph) + ", amp=" + num(A) + ")";
    }
};

struct SampledImpl final : Impl {
    std::vector<double> xs, ys;
    std::size_t dim() const override { return 1; }
    void eval(double x, double* out) const override {
        if (x <= xs.front()) {
            out[0] = ys.front();
            return;
        }
        if (x >= xs.back()) {
            out[0] = ys.back();
            return;
        }
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
        const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
        out[0] = ys[i] + t * (ys[i + 1] - ys[i]);
    }
    bool exact() const override { return false; }
    void breaks(double a, double b, std::vector<double>& out) const override {
        for (double x : xs)
            if (x > a && x < b) out.push_back(x);
    }
    std::optional<double> sup() const override {
        double m = 0.0;
        for (double y : ys) m = std::max(m, std::fabs(y));
        return m;
    }
    std::string describe() const override { return "sampled(n=" + std::to_string(xs.size()) + ")"; }
};

struct CallableImpl final : Impl {
    std::size_t d;
    std::function<void(double, double*)> fn;
    CallableTraits tr;
    std::size_t dim() const override { return d; }
    double lower() const override { return tr.lower; }
    double upper() const override { return tr.upper; }
    void eval(double x, double* out) const override {
        check_domain(x);
        fn(x, out);
    }
    bool exact() const override { return false; }
    void breaks(double a, double b, std::vector<double>& out) const override {
        for (double x : tr.kinks)
            if (x > a && x < b) out.push_back(x);
        if (tr.period) {
            // kinks repeat with the period when one is declared
        }
    }
    void sing(double a, double b, std::vector<quad::Singularity>& out) const override {
        for (const auto& s : tr.singular)
            if (s.at >= a && s.at <= b) out.push_back(s);
    }
    std::optional<double> sup() const override { return tr.sup_bound; }
    double noise() const override { return tr.abs_error; }
    std::optional<double> period() const override { return tr.period; }
    std::string describe() const override { return tr.label; }
};

struct ScaleImpl final : Impl {
    double c;
    ImplPtr f;
    std::size_t dim() const override { return f->dim(); }
    double lower() const override { return f->lower(); }
    double upper() const override { return f->upper(); }
    void eval(double x, double* out) const override {
        f->eval(x, out);
        for (std::size_t i = 0; i < f->dim(); ++i) out[i] *= c;
    }
    bool exact() const override { return f->exact(); }
    void breaks(double a, double b, std::vector<double>& out) const override { f->breaks(a, b, out); }
    void sing(double a, double b, std::vector<quad::Singularity>& out) const override { f->sing(a, b, out); }
    std::optional<double> sup() const override {
        auto s = f->sup();
        if (s) return std::fabs(c) * *s;
        return s;
    }
    double noise() const override { return std::fabs(c) * f->noise(); }
    std::optional<double> period() const override { return f->period(); }
    std::string describe() const override { return "scale(" + num(c) + ", " + f->describe() + ")"; }
};

struct SumImpl final : Impl {
    std::vector<ImplPtr> fs;
    std::size_t dim() const override { return fs.front()->dim(); }
    double lower() const override {
        double m = -kInf;
        for (const auto& f : fs) m = std::max(m, f->lower());
        return m;
    }
    double upper() const override {
        double m = kInf;
        for (const auto& f : fs) m = std::min(m, f->upper());
        return m;
    }
    void eval(double x, double* out) const override {
        const std::size_t d = dim();
        std::fill(out, out + d, 0.0);
        Buf tmp(d);
        for (const auto& f : fs) {
            f->eval(x, tmp.data);
            for (std::size_t i = 0; i < d; ++i) out[i] += tmp.data[i];
        }
    }
    bool exact() const override {
        return std::all_of(fs.begin(), fs.end(), [](const ImplPtr& f) { return f->exact(); });
    }
    void breaks(double a, double b, std::vector<double>& out) const override {
        for (const auto& f : fs) f->breaks(a, b, out);
    }
    void sing(double a, double b, std::vector<quad::Singularity>& out) const override {
        for (const auto& f : fs) f->sing(a, b, out);
    }
    std::optional<double> sup() const override {
        double s = 0.0;
        for (const auto& f : fs) {
            auto v = f->sup();
            if (!v) return std::nullopt;
            s += *v;
        }
        return s;
    }
    double noise() const override {
        double s = 0.0;
        for (const auto& f : fs) s += f->noise();
        return s;
    }
    std::optional<double> period() const override {
        std::optional<double> p;
        for (const auto& f : fs) {
            auto q = f->period();
            if (!q) return std::nullopt;
            if (p && std::fabs(*p - *q) > 1e-12 * *p) return std::nullopt;
            p = q;
        }
        return p;
    }
    std::string describe() const override {
        std::string s = "sum(";
        for (std::size_t i = 0; i < fs.size(); ++i) s += (i ? ", " : "") + fs[i]->describe();
        return s + ")";
    }
};

struct AffineImpl final : Impl {
    double s, c;
    ImplPtr f;
    std::size_t dim() const override { return f->dim(); }
    double map_back(double y) const { return (y - c) / s; }
    double lower() const override {
        return s > 0 ? (std::isfinite(f->lower()) ? map_back(f->lower()) : -kInf)
                     : (std::isfinite(f->upper()) ? map_back(f->upper()) : -kInf);
    }
    double upper() const override {
        return s > 0 ? (std::isfinite(f->upper()) ? map_back(f->upper()) : kInf)
                     : (std::isfinite(f->lower()) ? map_back(f->lower()) : kInf);
    }
    void eval(double x, double* out) const override { f->eval(s * x + c, out); }
    bool exact() const override { return f->exact(); }
    void breaks(double a, double b, std::vector<double>& out) const override {
        double ya = s * a + c, yb = s * b + c;
        if (ya > yb) std::swap(ya, yb);
        std::vector<double> inner;
        f->breaks(ya, yb, inner);
        for (double y : inner) {
            const double x = map_back(y);
            if (x > a && x < b) out.push_back(x);
        }
    }
    void sing(double a, double b, std::vector<quad::Singularity>& out) const override {
        double ya = s * a + c, yb = s * b + c;
        if (ya > yb) std::swap(ya, yb);
        std::vector<quad::Singularity> inner;
        f->sing(ya, yb, inner);
        for (auto q : inner) {
            q.at = map_back(q.at);
            out.push_back(q);
        }
    }
    std::optional<double> sup() const override { return f->sup(); }
    double noise() const override { return f->noise(); }
    std::optional<double> period() const override {
        auto p = f->period();
        if (p) return *p / std::fabs(s);
        return p;
    }
    std::string describe() const override {
        if (s == 1.0) return "translate(" + num(c) + ", " + f->describe() + ")";
        if (s == -1.0 && c == 0.0) return "reflect(" + f->describe() + ")";
        return "affine(" + num(s) + ", " + num(c) + ", " + f->describe() + ")";
    }
};

struct NormMapImpl final : Impl {
    std::function<double(double)> phi;
    ImplPtr f;
    double power;
    std::string label;
    std::size_t dim() const override { return 1; }
    double lower() const override { return f->lower(); }
    double upper() const override { return f->upper(); }
    void eval(double x, double* out) const override {
        Buf tmp(f->dim());
        f->eval(x, tmp.data);
        const double n = vnorm(tmp.data, f->dim());
        out[0] = phi ? phi(n) : n;
    }
    // phi is nondecreasing on [0, inf) for every caller.
    std::optional<double> sup() const override {
        auto s = f->sup();
        if (s && phi) return phi(*s);
        return s;
    }
    double noise() const override { return phi ? phi(f->noise()) : f->noise(); }
    bool exact() const override { return f->exact(); }
    void breaks(double a, double b, std::vector<double>& out) const override { f->breaks(a, b, out); }
    void sing(double a, double b, std::vector<quad::Singularity>& out) const override {
        std::vector<quad::Singularity> inner;
        f->sing(a, b, inner);
        for (auto q : inner) {
            q.exponent *= power;
            out.push_back(q);
        }
    }
    std::optional<double> period() const override { return f->period(); }
    std::string describe() const override { return label + "(|" + f->describe() + "|)"; }
};

struct ProductImpl final : Impl {
    ImplPtr u, v;
    std::size_t dim() const override { return 1; }
    double lower() const override { return std::max(u->lower(), v->lower()); }
    double upper() const override { return std::min(u->upper(), v->upper()); }
    void eval(double x, double* out) const override {
        Buf a(u->dim()), b(v->dim());
        u->eval(x, a.data);
        v->eval(x, b.data);
        out[0] = vnorm(a.data, u->dim()) * vnorm(b.data, v->dim());
    }
    bool exact() const override { return u->exact() && v->exact(); }
    void breaks(double a, double b, std::vector<double>& out) const override {
        u->breaks(a, b, out);
        v->breaks(a, b, out);
    }
    void sing(double a, double b, std::vector<quad::Singularity>& out) const override {
        u->sing(a, b, out);
        v->sing(a, b, out);
    }
    std::optional<double> sup() const override {
        auto a = u->sup(), b = v->sup();
        if (a && b) return *a * *b;
        return std::nullopt;
    }
    std::string describe() const override { return "product(" + u->describe() + ", " + v->describe() + ")"; }
};

}  // namespace

AmplitudeRule AmplitudeRule::constant(double c) {
    return {[c](long) { return c; }, num(c), -1, std::fabs(c)};
}

AmplitudeRule AmplitudeRule::sqrt_n(long max_n) {
    AmplitudeRule r{[](long n) { return std::sqrt(static_cast<double>(n)); }, "sqrt", max_n, std::nullopt};
    if (max_n >= 0) r.sup = std::sqrt(static_cast<double>(max_n));
    return r;
}

FunctionSpec::FunctionSpec() : FunctionSpec(constant(0.0)) {}

FunctionSpec FunctionSpec::piecewise_constant(std::vector<double> breaks, std::vector<Vec> values, Vec left_tail,
                                              Vec right_tail, Domain domain) {
    if (values.size() + 1 != breaks.size() && !(breaks.empty() && values.empty()))
        throw std::invalid_argument("piecewise_constant: need values.size() == breaks.size() - 1");
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i] > breaks[i - 1])) throw std::invalid_argument("piecewise_constant: breaks must increase");
    for (double b : breaks)
        if (!std::isfinite(b)) throw std::invalid_argument("piecewise_constant: non-finite breakpoint");
    const std::size_t d = !right_tail.empty() ? right_tail.size() : 1;
    if (right_tail.empty()) right_tail.assign(d, 0.0);
    if (left_tail.empty()) left_tail.assign(d, 0.0);
    if (left_tail.size() != d) throw std::invalid_argument("piecewise_constant: dimension mismatch");
    for (const auto& v : values)
        if (v.size() != d) throw std::invalid_argument("piecewise_constant: dimension mismatch");
    if (domain == Domain::HalfLine && !breaks.empty() && breaks.front() < 0.0)
        throw std::invalid_argument("piecewise_constant: half-line function with negative breakpoint");
    auto impl = std::make_shared<PiecewiseConstantImpl>();
    impl->br = std::move(breaks);
    impl->vals = std::move(values);
    impl->left = std::move(left_tail);
    impl->right = std::move(right_tail);
    impl->domain = domain;
    impl->d = d;
    impl->label = "piecewise(n=" + std::to_string(impl->vals.size()) + ")";
    return FunctionSpec(impl);
}

FunctionSpec FunctionSpec::piecewise_constant_scalar(std::vector<double> breaks, std::vector<double> values,
                                                     double left_tail, double right_tail, Domain domain) {
    std::vector<Vec> vs;
    vs.reserve(values.size());
    for (double v : values) vs.push_back({v});
    return piecewise_constant(std::move(breaks), std::move(vs), {left_tail}, {right_tail}, domain);
}

FunctionSpec FunctionSpec::indicator(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("indicator: need a < b");
    auto f = piecewise_constant_scalar({a, b}, {1.0});
    auto impl = std::make_shared<PiecewiseConstantImpl>(static_cast<const PiecewiseConstantImpl&>(f.impl()));
    impl->label = "indicator(" + num(a) + ", " + num(b) + ")";
    return FunctionSpec(impl);
}

FunctionSpec FunctionSpec::heaviside() {
    auto f = piecewise_constant_scalar({0.0}, {}, 0.0, 1.0);
    auto impl = std::make_shared<PiecewiseConstantImpl>(static_cast<const PiecewiseConstantImpl&>(f.impl()));
    impl->br = {0.0};
    impl->vals.clear();
    impl->label = "heaviside()";
    return FunctionSpec(impl);
}

FunctionSpec FunctionSpec::constant(Vec value) {
    if (value.empty()) throw std::invalid_argument("constant: empty value");
    auto impl = std::make_shared<PiecewiseConstantImpl>();
    impl->d = value.size();
    impl->left = value;
    impl->right = value;
    impl->domain = Domain::Line;
    std::string s = "constant(";
    for (std::size_t i = 0; i < value.size(); ++i) s += (i ? ", " : "") + num(value[i]);
    impl->label = s + ")";
    return FunctionSpec(impl);
}

FunctionSpec FunctionSpec::constant(double value) { return constant(Vec{value}); }

FunctionSpec FunctionSpec::spike_train(AmplitudeRule rule) {
    if (!rule.amp) throw std::invalid_argument("spike_train: missing amplitude rule");
    auto impl = std::make_shared<SpikeTrainImpl>();
    impl->rule = std::move(rule);
    return FunctionSpec(impl);
}

FunctionSpec FunctionSpec::periodic(FunctionSpec base, double period) {
    if (!(period > 0.0) || !std::isfinite(period)) throw std::invalid_argument("periodic: period must be positive");
    auto impl = std::make_shared<PeriodicImpl>();
    impl->base = base.impl_;
    impl->P = period;
    return FunctionSpec(impl);
}

FunctionSpec FunctionSpec::sinusoid(double freq, double phase, double amplitude) {
    auto impl = std::make_shared<SinusoidImpl>();
    impl->w = freq;
    impl->ph = phase;
    impl->A = amplitude;
    return FunctionSpec(impl);
}

FunctionSpec FunctionSpec::sampled(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() < 2 || xs.size() != ys.size()) throw std::invalid_argument("sampled: need >= 2 matching samples");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("sampled: abscissae must increase");
    auto impl = std::make_shared<SampledImpl>();
    impl->xs = std::move(xs);
    impl->ys = std::move(ys);
    return FunctionSpec(impl);
}

FunctionSpec FunctionSpec::callable(std::function<double(double)> fn, CallableTraits traits) {
    if (!fn) throw std::invalid_argument("callable: empty function");
    return callable_vec(1, [fn = std::move(fn)](double x, double* out) { out[0] = fn(x); }, std::move(traits));
}

FunctionSpec FunctionSpec::callable_vec(std::size_t dim, std::function<void(double, double*)> fn,
                                        CallableTraits traits) {
    if (dim == 0 || !fn) throw std::invalid_argument("callable_vec: bad arguments");
    auto impl = std::make_shared<CallableImpl>();
    impl->d = dim;
    impl->fn = std::move(fn);
    std::sort(traits.kinks.begin(), traits.kinks.end());
    impl->tr = std::move(traits);
    return FunctionSpec(impl);
}

FunctionSpec FunctionSpec::scale(double c, const FunctionSpec& f) {
    auto impl = std::make_shared<ScaleImpl>();
    impl->c = c;
    impl->f = f.impl_;
    return FunctionSpec(impl);
}

FunctionSpec FunctionSpec::sum(std::vector<FunctionSpec> fs) {
    if (fs.empty()) throw std::invalid_argument("sum: no terms");
    auto impl = std::make_shared<SumImpl>();
    for (auto& f : fs) {
        if (f.dimension() != fs.front().dimension()) throw std::invalid_argument("sum: dimension mismatch");
        impl->fs.push_back(f.impl_);
    }
    return FunctionSpec(impl);
}

FunctionSpec FunctionSpec::affine(double s, double c, const FunctionSpec& f) {
    if (s == 0.0 || !std::isfinite(s) || !std::isfinite(c)) throw std::invalid_argument("affine: bad map");
    auto impl = std::make_shared<AffineImpl>();
    impl->s = s;
    impl->c = c;
    impl->f = f.impl_;
    return FunctionSpec(impl);
}

FunctionSpec FunctionSpec::translate(double tau, const FunctionSpec& f) { return affine(1.0, tau, f); }

FunctionSpec FunctionSpec::reflect(const FunctionSpec& f) { return affine(-1.0, 0.0, f); }

FunctionSpec FunctionSpec::norm_map(std::function<double(double)> phi, const FunctionSpec& f, double power,
                                    std::string label) {
    auto impl = std::make_shared<NormMapImpl>();
    impl->phi = std::move(phi);
    impl->f = f.impl_;
    impl->power = power;
    impl->label = std::move(label);
    return FunctionSpec(impl);
}

FunctionSpec FunctionSpec::difference(const FunctionSpec& f, double tau) {
    auto d = sum({translate(tau, f), scale(-1.0, f)});
    return norm_map({}, d, 1.0, "norm");
}

FunctionSpec FunctionSpec::product(const FunctionSpec& u, const FunctionSpec& v) {
    auto impl = std::make_shared<ProductImpl>();
    impl->u = u.impl_;
    impl->v = v.impl_;
    return FunctionSpec(impl);
}

Vec FunctionSpec::evaluate(double x) const {
    Vec out(impl_->dim());
    impl_->check_domain(x);
    impl_->eval(x, out.data());
    return out;
}

double FunctionSpec::norm_at(double x) const {
    const std::size_t d = impl_->dim();
    Buf tmp(d);
    impl_->eval(x, tmp.data);
    return vnorm(tmp.data, d);
}

std::size_t FunctionSpec::dimension() const { return impl_->dim(); }
double FunctionSpec::lower() const { return impl_->lower(); }
double FunctionSpec::upper() const { return impl_->upper(); }
Domain FunctionSpec::domain() const { return std::isfinite(impl_->lower()) ? Domain::HalfLine : Domain::Line; }
bool FunctionSpec::exactly_integrable() const { return impl_->exact(); }

std::vector<double> FunctionSpec::breakpoints(double a, double b) const {
    std::vector<double> out;
    impl_->breaks(a, b, out);
    std::vector<quad::Singularity> s;
    impl_->sing(a, b, s);
    for (const auto& q : s) out.push_back(q.at);
    return quad::clean_breaks(std::move(out), a, b, kMergeEps);
}

std::vector<Piece> FunctionSpec::pieces(double a, double b) const {
    if (!exactly_integrable()) throw std::logic_error("pieces: " + describe() + " is not exactly integrable");
    if (!(a <= b)) throw std::invalid_argument("pieces: require a <= b");
    std::vector<double> pts = breakpoints(a, b);
    pts.insert(pts.begin(), a);
    pts.push_back(b);
    std::vector<Piece> out;
    out.reserve(pts.size());
    const std::size_t d = dimension();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(pts[i + 1] > pts[i])) continue;
        Piece p{pts[i], pts[i + 1], Vec(d)};
        impl_->eval(0.5 * (pts[i] + pts[i + 1]), p.value.data());
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<quad::Singularity> FunctionSpec::singularities(double a, double b) const {
    std::vector<quad::Singularity> out;
    impl_->sing(a, b, out);
    return out;
}

std::optional<double> FunctionSpec::sup_bound() const { return impl_->sup(); }

double FunctionSpec::noise_floor() const { return impl_->noise(); }
std::optional<double> FunctionSpec::period() const { return impl_->period(); }
std::string FunctionSpec::describe() const { return impl_->describe(); }

double exact_power_integral(const FunctionSpec& f, double p, double a, double b) {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("exact_power_integral: p must be finite > 0");
    double s = 0.0;
    for (const auto& pc : f.pieces(a, b)) {
        const double n = vnorm(pc.value.data(), pc.value.size());
        if (n == 0.0) continue;
        s += std::pow(n, p) * (pc.hi - pc.lo);
    }
    return s;
}

double phi_p(double p, double t) {
    if (p == kInf) return t <= 1.0 ? 0.0 : kInf;
    return std::pow(t, p);
}

// ---------------------------------------------------------------- exponents

ExponentSpec ExponentSpec::constant(double p) {
    if (std::isnan(p) || p < 1.0) throw std::invalid_argument("exponent below 1");
    if (p == kInf) return piecewise({}, {kInf});
    ExponentSpec e;
    e.kind_ = Kind::Constant;
    e.value_ = p;
    e.pmin_ = e.pmax_ = p;
    return e;
}

ExponentSpec ExponentSpec::piecewise(std::vector<double> breaks, std::vector<double> values) {
    if (values.size() != breaks.size() + 1)
        throw std::invalid_argument("piecewise exponent: need values.size() == breaks.size() + 1");
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i] > breaks[i - 1])) throw std::invalid_argument("piecewise exponent: breaks must increase");
    for (double v : values)
        if (std::isnan(v) || v < 1.0) throw std::invalid_argument("exponent below 1");
    ExponentSpec e;
    e.kind_ = Kind::Piecewise;
    e.breaks_ = std::move(breaks);
    e.values_ = std::move(values);
    e.pmin_ = *std::min_element(e.values_.begin(), e.values_.end());
    e.pmax_ = *std::max_element(e.values_.begin(), e.values_.end());
    return e;
}

ExponentSpec ExponentSpec::callable(std::function<double(double)> fn, double p_minus, double p_plus,
                                    std::string label) {
    if (!fn) throw std::invalid_argument("callable exponent: empty function");
    if (std::isnan(p_minus) || p_minus < 1.0) throw std::invalid_argument("exponent below 1");
    if (!(p_plus >= p_minus)) throw std::invalid_argument("callable exponent: p_plus < p_minus");
    if (p_plus == kInf) throw std::invalid_argument("callable exponent: infinite values need a piecewise exponent");
    ExponentSpec e;
    e.kind_ = Kind::Callable;
    e.fn_ = std::make_shared<std::function<double(double)>>(std::move(fn));
    e.pmin_ = p_minus;
    e.pmax_ = p_plus;
    e.label_ = std::move(label);
    return e;
}

double ExponentSpec::at(double x) const {
    switch (kind_) {
        case Kind::Constant: return value_;
        case Kind::Piecewise: {
            const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
            return values_[static_cast<std::size_t>(it - breaks_.begin())];
        }
        case Kind::Callable: {
            const double v = (*fn_)(x);
            if (std::isnan(v) || v < 1.0) throw std::domain_error("exponent below 1 at " + num(x));
            return v;
        }
    }
    return value_;
}

bool ExponentSpec::is_constant() const {
    return kind_ == Kind::Constant || (kind_ == Kind::Piecewise && pmin_ == pmax_);
}

std::optional<double> ExponentSpec::constant_value() const {
    if (is_constant()) return kind_ == Kind::Constant ? value_ : values_.front();
    return std::nullopt;
}

std::vector<double> ExponentSpec::breakpoints(double a, double b) const {
    std::vector<double> out;
    if (kind_ == Kind::Piecewise)
        for (std::size_t i = 0; i < breaks_.size(); ++i)
            if (breaks_[i] > a && breaks_[i] < b && values_[i] != values_[i + 1]) out.push_back(breaks_[i]);
    return out;
}

ExponentSpec ExponentSpec::affine(double s, double c) const {
    if (s <= 0.0) throw std::invalid_argument("exponent affine: scale must be positive");
    switch (kind_) {
        case Kind::Constant: return *this;
        case Kind::Piecewise: {
            std::vector<double> br;
            for (double b : breaks_) br.push_back((b - c) / s);
            return piecewise(std::move(br), values_);
        }
        case Kind::Callable: {
            auto fn = fn_;
            return callable([fn, s, c](double x) { return (*fn)(s * x + c); }, pmin_, pmax_, label_);
        }
    }
    return *this;
}

std::string ExponentSpec::describe() const {
    switch (kind_) {
        case Kind::Constant: return "const(" + num(value_) + ")";
        case Kind::Piecewise: {
            if (breaks_.empty()) return values_[0] == kInf ? std::string("const(inf)") : "const(" + num(values_[0]) + ")";
            std::string s = "piecewise(breaks=[";
            for (std::size_t i = 0; i < breaks_.size(); ++i) s += (i ? "," : "") + num(breaks_[i]);
            s += "], values=[";
            for (std::size_t i = 0; i < values_.size(); ++i)
                s += (i ? "," : "") + (values_[i] == kInf ? std::string("inf") : num(values_[i]));
            return s + "])";
        }
        case Kind::Callable: return label_;
    }
    return "?";
}

}  // namespace wap
