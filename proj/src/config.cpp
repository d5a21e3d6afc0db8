#include "wap/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "wap/convolution.hpp"

namespace wap {

// ---------------------------------------------------------------- values

const Expr* Expr::arg(std::size_t pos, const std::string& name) const {
    for (const auto& [k, v] : named)
        if (k == name) return &v;
    if (pos < args.size()) return &args[pos];
    return nullptr;
}

namespace {

class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    Expr parse() {
        Expr e = value();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return e;
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("bad value '" + s_ + "': " + what + " at column " + std::to_string(i_ + 1));
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    std::string ident() {
        skip();
        const std::size_t b = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '-'))
            ++i_;
        return s_.substr(b, i_ - b);
    }
    void items(std::vector<Expr>& pos, std::vector<std::pair<std::string, Expr>>* named, char close) {
        if (eat(close)) return;
        do {
            skip();
            const std::size_t save = i_;
            if (named) {
                std::string id = ident();
                if (!id.empty() && eat('=')) {
                    named->push_back({id, value()});
                    continue;
                }
                i_ = save;
            }
            if (named && !named->empty()) fail("positional argument after named argument");
            pos.push_back(value());
        } while (eat(','));
        if (!eat(close)) fail(std::string("expected '") + close + "'");
    }
    Expr value() {
        skip();
        if (i_ >= s_.size()) fail("missing value");
        const std::size_t start = i_;
        Expr e;
        const char c = s_[i_];
        if (c == '"') {
            ++i_;
            const std::size_t b = i_;
            while (i_ < s_.size() && s_[i_] != '"') ++i_;
            if (i_ >= s_.size()) fail("unterminated string");
            e.kind = Expr::Kind::String;
            e.text = s_.substr(b, i_ - b);
            ++i_;
        } else if (c == '[') {
            ++i_;
            e.kind = Expr::Kind::List;
            items(e.args, nullptr, ']');
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
            const char* b = s_.c_str() + i_;
            char* end = nullptr;
            const double v = std::strtod(b, &end);
            if (end == b) {
                if (s_.compare(i_, 4, "-inf") == 0) {
                    e.number = -kInf;
                    i_ += 4;
                } else {
                    fail("bad number");
                }
            } else {
                e.number = v;
                i_ += static_cast<std::size_t>(end - b);
            }
            e.kind = Expr::Kind::Number;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            e.text = ident();
            if (eat('(')) {
                e.kind = Expr::Kind::Call;
                items(e.args, &e.named, ')');
            } else if (e.text == "inf") {
                e.kind = Expr::Kind::Number;
                e.number = kInf;
            } else if (e.text == "pi") {
                e.kind = Expr::Kind::Number;
                e.number = std::numbers::pi;
            } else {
                e.kind = Expr::Kind::Name;
            }
        } else {
            fail("unexpected '" + std::string(1, c) + "'");
        }
        e.source = s_.substr(start, i_ - start);
        return e;
    }
};

// -------------------------------------------------------------- math

using MathFn = std::function<double(const double*)>;

class MathParser {
public:
    MathParser(const std::string& s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

    MathFn parse() {
        MathFn f = sum();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return f;
    }

private:
    const std::string& s_;
    const std::vector<std::string>& vars_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("bad expression \"" + s_ + "\": " + what);
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    MathFn sum() {
        MathFn a = product();
        for (;;) {
            if (eat('+')) {
                MathFn b = product();
                a = [a, b](const double* v) { return a(v) + b(v); };
            } else if (eat('-')) {
                MathFn b = product();
                a = [a, b](const double* v) { return a(v) - b(v); };
            } else {
                return a;
            }
        }
    }
    MathFn product() {
        MathFn a = unary();
        for (;;) {
            if (eat('*')) {
                MathFn b = unary();
                a = [a, b](const double* v) { return a(v) * b(v); };
            } else if (eat('/')) {
                MathFn b = unary();
                a = [a, b](const double* v) { return a(v) / b(v); };
            } else {
                return a;
            }
        }
    }
    MathFn unary() {
        if (eat('-')) {
            MathFn a = unary();
            return [a](const double* v) { return -a(v); };
        }
        if (eat('+')) return unary();
        return power();
    }
    MathFn power() {
        MathFn a = atom();
        if (eat('^')) {
            MathFn b = unary();  // right associative
            return [a, b](const double* v) { return std::pow(a(v), b(v)); };
        }
        return a;
    }
    MathFn atom() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end");
        if (eat('(')) {
            MathFn a = sum();
            if (!eat(')')) fail("expected ')'");
            return a;
        }
        const char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* b = s_.c_str() + i_;
            char* end = nullptr;
            const double x = std::strtod(b, &end);
            i_ += static_cast<std::size_t>(end - b);
            return [x](const double*) { return x; };
        }
        if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected '" + std::string(1, c) + "'");
        const std::size_t b = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        const std::string name = s_.substr(b, i_ - b);
        if (eat('(')) {
            std::vector<MathFn> args;
            if (!eat(')')) {
                do args.push_back(sum());
                while (eat(','));
                if (!eat(')')) fail("expected ')'");
            }
            return call(name, std::move(args));
        }
        for (std::size_t k = 0; k < vars_.size(); ++k)
            if (vars_[k] == name) return [k](const double* v) { return v[k]; };
        if (name == "pi") return [](const double*) { return std::numbers::pi; };
        if (name == "e") return [](const double*) { return std::numbers::e; };
        if (name == "inf") return [](const double*) { return kInf; };
        fail("unknown name '" + name + "'");
    }
    MathFn call(const std::string& name, std::vector<MathFn> a) {
        using F1 = double (*)(double);
        static const std::map<std::string, F1> unary = {
            {"sin", [](double x) { return std::sin(x); }},   {"cos", [](double x) { return std::cos(x); }},
            {"tan", [](double x) { return std::tan(x); }},   {"exp", [](double x) { return std::exp(x); }},
            {"log", [](double x) { return std::log(x); }},   {"sqrt", [](double x) { return std::sqrt(x); }},
            {"abs", [](double x) { return std::fabs(x); }},  {"floor", [](double x) { return std::floor(x); }},
            {"ceil", [](double x) { return std::ceil(x); }}, {"tanh", [](double x) { return std::tanh(x); }},
            {"atan", [](double x) { return std::atan(x); }}, {"gamma", [](double x) { return std::tgamma(x); }},
        };
        if (auto it = unary.find(name); it != unary.end()) {
            if (a.size() != 1) fail(name + " takes one argument");
            const F1 f = it->second;
            MathFn x = a[0];
            return [f, x](const double* v) { return f(x(v)); };
        }
        if (name == "min" || name == "max" || name == "pow") {
            if (a.size() != 2) fail(name + " takes two arguments");
            MathFn x = a[0], y = a[1];
            if (name == "min") return [x, y](const double* v) { return std::min(x(v), y(v)); };
            if (name == "max") return [x, y](const double* v) { return std::max(x(v), y(v)); };
            return [x, y](const double* v) { return std::pow(x(v), y(v)); };
        }
        fail("unknown function '" + name + "'");
    }
};

// ---------------------------------------------------------- helpers

std::string where(const Expr& e) { return "'" + e.source + "'"; }

double as_number(const Expr& e) {
    if (e.kind != Expr::Kind::Number) throw ConfigError("expected a number, got " + where(e));
    return e.number;
}

double num_arg(const Expr& e, std::size_t pos, const std::string& name, std::optional<double> dflt = std::nullopt) {
    const Expr* a = e.arg(pos, name);
    if (!a) {
        if (dflt) return *dflt;
        throw ConfigError("missing argument '" + name + "' in " + where(e));
    }
    return as_number(*a);
}

bool bool_arg(const Expr& e, const std::string& name, bool dflt) {
    const Expr* a = e.arg(static_cast<std::size_t>(-1), name);
    if (!a) return dflt;
    if (a->kind == Expr::Kind::Name) {
        if (a->text == "true" || a->text == "yes") return true;
        if (a->text == "false" || a->text == "no") return false;
    }
    if (a->kind == Expr::Kind::Number) return a->number != 0.0;
    throw ConfigError("expected true/false for '" + name + "' in " + where(e));
}

std::vector<double> list_arg(const Expr& e, std::size_t pos, const std::string& name) {
    const Expr* a = e.arg(pos, name);
    if (!a) throw ConfigError("missing list '" + name + "' in " + where(e));
    return build_list(*a);
}

const std::string& string_arg(const Expr& e, std::size_t pos, const std::string& name) {
    const Expr* a = e.arg(pos, name);
    if (!a || a->kind != Expr::Kind::String) throw ConfigError("expected a quoted expression in " + where(e));
    return a->text;
}

void check_args(const Expr& e, std::size_t max_pos, std::initializer_list<const char*> names) {
    if (e.args.size() > max_pos) throw ConfigError("too many arguments in " + where(e));
    for (const auto& [k, v] : e.named) {
        bool ok = false;
        for (const char* n : names) ok = ok || k == n;
        if (!ok) throw ConfigError("unknown argument '" + k + "' in " + where(e));
    }
}

std::string tag(const Expr& e) {
    if (e.kind == Expr::Kind::Call || e.kind == Expr::Kind::Name) return e.text;
    return "";
}

template <class F>
auto wrap(const Expr& e, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        throw ConfigError(std::string(ex.what()) + " in " + where(e));
    }
}

}  // namespace

Expr parse_expr(const std::string& text) { return ExprParser(text).parse(); }

std::function<double(const double*)> compile_math(const std::string& text, const std::vector<std::string>& vars) {
    return MathParser(text, vars).parse();
}

std::vector<double> build_list(const Expr& e) {
    if (e.kind == Expr::Kind::Number) return {e.number};
    if (e.kind == Expr::Kind::List || (e.kind == Expr::Kind::Call && e.text == "list")) {
        std::vector<double> v;
        for (const auto& a : e.args) v.push_back(as_number(a));
        return v;
    }
    throw ConfigError("expected a number list, got " + where(e));
}

FunctionSpec build_function(const Expr& e) {
    return wrap(e, [&]() -> FunctionSpec {
        if (e.kind == Expr::Kind::Number) return FunctionSpec::constant(e.number);
        const std::string t = tag(e);
        if (t == "zero") return FunctionSpec();
        if (t == "heaviside") return FunctionSpec::heaviside();
        if (t == "indicator") {
            check_args(e, 2, {"a", "b"});
            return FunctionSpec::indicator(num_arg(e, 0, "a"), num_arg(e, 1, "b"));
        }
        if (t == "const" || t == "constant") {
            check_args(e, 1, {"c"});
            return FunctionSpec::constant(num_arg(e, 0, "c"));
        }
        if (t == "spiketrain") {
            check_args(e, 1, {"amp", "max_n"});
            const long max_n = static_cast<long>(num_arg(e, 99, "max_n", -1.0));
            const Expr* a = e.arg(0, "amp");
            if (a && a->kind == Expr::Kind::Name && a->text == "sqrt")
                return FunctionSpec::spike_train(AmplitudeRule::sqrt_n(max_n));
            AmplitudeRule r = AmplitudeRule::constant(a ? as_number(*a) : 1.0);
            r.max_n = max_n;
            return FunctionSpec::spike_train(r);
        }
        if (t == "periodic") {
            check_args(e, 2, {"f", "period"});
            const Expr* f = e.arg(0, "f");
            if (!f) throw ConfigError("periodic needs a base function");
            return FunctionSpec::periodic(build_function(*f), num_arg(e, 1, "period"));
        }
        if (t == "sinusoid" || t == "sin") {
            check_args(e, 3, {"freq", "phase", "amp"});
            return FunctionSpec::sinusoid(num_arg(e, 0, "freq", 1.0), num_arg(e, 1, "phase", 0.0),
                                          num_arg(e, 2, "amp", 1.0));
        }
        if (t == "pwc") {
            check_args(e, 2, {"breaks", "values", "left", "right", "half"});
            return FunctionSpec::piecewise_constant_scalar(
                list_arg(e, 0, "breaks"), list_arg(e, 1, "values"), num_arg(e, 99, "left", 0.0),
                num_arg(e, 99, "right", 0.0), bool_arg(e, "half", false) ? Domain::HalfLine : Domain::Line);
        }
        if (t == "sampled") {
            check_args(e, 2, {"xs", "ys"});
            return FunctionSpec::sampled(list_arg(e, 0, "xs"), list_arg(e, 1, "ys"));
        }
        if (t == "fn") {
            check_args(e, 1, {"expr", "lower", "kinks", "sup", "period", "label"});
            const std::string& src = string_arg(e, 0, "expr");
            auto f = compile_math(src, {"t"});
            CallableTraits tr;
            tr.label = src;
            tr.lower = num_arg(e, 99, "lower", -kInf);
            if (e.arg(99, "kinks")) tr.kinks = list_arg(e, 99, "kinks");
            if (e.arg(99, "sup")) tr.sup_bound = num_arg(e, 99, "sup");
            if (e.arg(99, "period")) tr.period = num_arg(e, 99, "period");
            return FunctionSpec::callable([f](double x) { return f(&x); }, tr);
        }
        if (t == "scale") {
            check_args(e, 2, {"c", "f"});
            const Expr* f = e.arg(1, "f");
            if (!f) throw ConfigError("scale needs a function");
            return FunctionSpec::scale(num_arg(e, 0, "c"), build_function(*f));
        }
        if (t == "sum") {
            if (e.args.empty() || !e.named.empty()) throw ConfigError("sum takes one or more functions");
            std::vector<FunctionSpec> fs;
            for (const auto& a : e.args) fs.push_back(build_function(a));
            return FunctionSpec::sum(std::move(fs));
        }
        if (t == "translate") {
            check_args(e, 2, {"tau", "f"});
            const Expr* f = e.arg(1, "f");
            if (!f) throw ConfigError("translate needs a function");
            return FunctionSpec::translate(num_arg(e, 0, "tau"), build_function(*f));
        }
        if (t == "affine") {
            check_args(e, 3, {"s", "c", "f"});
            const Expr* f = e.arg(2, "f");
            if (!f) throw ConfigError("affine needs a function");
            return FunctionSpec::affine(num_arg(e, 0, "s"), num_arg(e, 1, "c"), build_function(*f));
        }
        if (t == "reflect") {
            if (e.args.size() != 1) throw ConfigError("reflect takes one function");
            return FunctionSpec::reflect(build_function(e.args[0]));
        }
        if (t == "diff") {
            check_args(e, 2, {"f", "tau"});
            const Expr* f = e.arg(0, "f");
            if (!f) throw ConfigError("diff needs a function");
            return FunctionSpec::difference(build_function(*f), num_arg(e, 1, "tau"));
        }
        if (t == "vec") {
            if (e.args.empty()) throw ConfigError("vec takes one or more scalar functions");
            std::vector<FunctionSpec> parts;
            double lower = -kInf;
            for (const auto& a : e.args) {
                parts.push_back(build_function(a));
                if (parts.back().dimension() != 1) throw ConfigError("vec components must be scalar");
                lower = std::max(lower, parts.back().lower());
            }
            CallableTraits tr;
            tr.label = "vec";
            tr.lower = lower;
            for (const auto& p : parts)
                for (double k : p.breakpoints(-1e4, 1e4)) tr.kinks.push_back(k);
            std::sort(tr.kinks.begin(), tr.kinks.end());
            tr.kinks.erase(std::unique(tr.kinks.begin(), tr.kinks.end()), tr.kinks.end());
            return FunctionSpec::callable_vec(parts.size(),
                                              [parts](double x, double* out) {
                                                  for (std::size_t i = 0; i < parts.size(); ++i)
                                                      out[i] = parts[i].evaluate(x)[0];
                                              },
                                              tr);
        }
        if (t == "conv") {
            check_args(e, 2, {"kernel", "g"});
            const Expr* k = e.arg(0, "kernel");
            const Expr* g = e.arg(1, "g");
            if (!k || !g) throw ConfigError("conv needs a kernel and a function");
            return convolution_function(build_kernel(*k), build_function(*g));
        }
        if (t == "sconv") {
            check_args(e, 2, {"psi", "f"});
            const Expr* p = e.arg(0, "psi");
            const Expr* f = e.arg(1, "f");
            if (!p || !f) throw ConfigError("sconv needs psi and f");
            return scalar_convolution_function(build_function(*p), build_function(*f));
        }
        throw ConfigError("unknown function " + where(e));
    });
}

ExponentSpec build_exponent(const Expr& e) {
    return wrap(e, [&]() -> ExponentSpec {
        auto check = [&](double v) {
            if (!(v >= 1.0)) throw ConfigError("exponent below 1 in " + where(e));
            return v;
        };
        if (e.kind == Expr::Kind::Number) return ExponentSpec::constant(check(e.number));
        const std::string t = tag(e);
        if (t == "const" || t == "constant") {
            check_args(e, 1, {"p"});
            return ExponentSpec::constant(check(num_arg(e, 0, "p")));
        }
        if (t == "piecewise") {
            check_args(e, 2, {"breaks", "values"});
            auto vals = list_arg(e, 1, "values");
            for (double v : vals) check(v);
            return ExponentSpec::piecewise(list_arg(e, 0, "breaks"), vals);
        }
        if (t == "fn") {
            check_args(e, 1, {"expr", "min", "max"});
            const std::string& src = string_arg(e, 0, "expr");
            auto f = compile_math(src, {"x"});
            const double lo = check(num_arg(e, 99, "min")), hi = num_arg(e, 99, "max");
            if (hi < lo) throw ConfigError("exponent max below min in " + where(e));
            return ExponentSpec::callable([f](double x) { return f(&x); }, lo, hi, src);
        }
        throw ConfigError("unknown exponent " + where(e));
    });
}

PhiSpec build_phi(const Expr& e) {
    return wrap(e, [&]() -> PhiSpec {
        const std::string t = tag(e);
        if (t == "identity" || t == "id") return PhiSpec::identity();
        if (t == "power") {
            check_args(e, 1, {"alpha"});
            return PhiSpec::power(num_arg(e, 0, "alpha"));
        }
        if (t == "fn") {
            check_args(e, 1, {"expr", "convex", "concave", "subadditive"});
            const std::string& src = string_arg(e, 0, "expr");
            auto f = compile_math(src, {"x"});
            PhiSpec::Flags fl;
            fl.convex = bool_arg(e, "convex", false);
            fl.concave = bool_arg(e, "concave", false);
            fl.subadditive = bool_arg(e, "subadditive", false);
            return PhiSpec::custom(src, [f](double x) { return f(&x); }, fl);
        }
        if (e.kind == Expr::Kind::Name) return PhiSpec::catalog(t);
        throw ConfigError("unknown phi " + where(e));
    });
}

WeightSpec build_weight(const Expr& e, const ExponentSpec& p) {
    return wrap(e, [&]() -> WeightSpec {
        if (e.kind == Expr::Kind::Number) {
            const double c = e.number;
            if (!(c > 0.0)) throw ConfigError("weight must be positive in " + where(e));
            return WeightSpec::custom(e.source, [c](double, double) { return c; }, true, true);
        }
        const std::string t = tag(e);
        if (t == "one") return WeightSpec::one();
        if (t == "power") {
            check_args(e, 1, {"sigma"});
            return WeightSpec::power_of_l(num_arg(e, 0, "sigma"));
        }
        if (t == "psipower" || t == "psibracket") {
            check_args(e, 1, {"sigma"});
            const PsiSpec psi = PsiSpec::power(num_arg(e, 0, "sigma"));
            return t == "psipower" ? WeightSpec::psi_power(psi, p) : WeightSpec::psi_bracket(psi, p);
        }
        if (t == "fn") {
            check_args(e, 1, {"expr", "tind", "cond_d"});
            const std::string& src = string_arg(e, 0, "expr");
            auto f = compile_math(src, {"l", "t"});
            return WeightSpec::custom(
                src,
                [f](double l, double tt) {
                    const double v[2] = {l, tt};
                    return f(v);
                },
                bool_arg(e, "tind", false), bool_arg(e, "cond_d", false));
        }
        throw ConfigError("unknown weight " + where(e));
    });
}

KernelSpec build_kernel(const Expr& e) {
    return wrap(e, [&]() -> KernelSpec {
        const std::string t = tag(e);
        if (t == "polydecay") {
            check_args(e, 3, {"M", "beta", "gamma"});
            return KernelSpec::poly_decay(num_arg(e, 0, "M", 1.0), num_arg(e, 1, "beta", 1.0),
                                          num_arg(e, 2, "gamma", 2.0));
        }
        if (t == "expdecay") {
            check_args(e, 3, {"M", "beta", "c"});
            return KernelSpec::exp_decay(num_arg(e, 0, "M", 1.0), num_arg(e, 1, "beta", 1.0), num_arg(e, 2, "c", 1.0));
        }
        if (t == "table") {
            check_args(e, 2, {"ts", "vs"});
            return KernelSpec::table(list_arg(e, 0, "ts"), list_arg(e, 1, "vs"));
        }
        if (t == "zero") return KernelSpec::table({0.0, 1.0}, {0.0, 0.0});
        throw ConfigError("undefined kernel " + where(e));
    });
}

SequenceSpec build_sequence(const Expr& e) {
    return wrap(e, [&]() -> SequenceSpec {
        const std::string t = tag(e);
        if (t == "geometric") {
            check_args(e, 1, {"r"});
            return SequenceSpec::geometric(num_arg(e, 0, "r", 0.5));
        }
        if (t == "twosided") {
            check_args(e, 1, {"r"});
            return SequenceSpec::two_sided_geometric(num_arg(e, 0, "r", 0.5));
        }
        if (t == "custom") {
            check_args(e, 1, {"terms", "two_sided"});
            return SequenceSpec::custom(list_arg(e, 0, "terms"), bool_arg(e, "two_sided", false));
        }
        throw ConfigError("unknown sequence " + where(e));
    });
}

GridSpec build_grid(const Expr& e) {
    return wrap(e, [&]() -> GridSpec {
        if (e.kind == Expr::Kind::Number || e.kind == Expr::Kind::List) return GridSpec::points(build_list(e));
        const std::string t = tag(e);
        if (t == "list") return GridSpec::points(build_list(e));
        if (t == "uniform" || t == "geometric") {
            check_args(e, 3, {"a", "b", "n"});
            const double n = num_arg(e, 2, "n");
            if (!(n >= 1.0)) throw ConfigError("grid needs n >= 1 in " + where(e));
            const auto cnt = static_cast<std::size_t>(n);
            return t == "uniform" ? GridSpec::uniform(num_arg(e, 0, "a"), num_arg(e, 1, "b"), cnt)
                                  : GridSpec::geometric(num_arg(e, 0, "a"), num_arg(e, 1, "b"), cnt);
        }
        if (t == "step") {
            check_args(e, 3, {"a", "b", "h"});
            return GridSpec::uniform_step(num_arg(e, 0, "a"), num_arg(e, 1, "b"), num_arg(e, 2, "h"));
        }
        throw ConfigError("unknown grid " + where(e));
    });
}

// ------------------------------------------------------------ RunConfig

namespace {

const Expr& need(const std::map<std::string, Expr>& m, const std::string& key, const char* section) {
    auto it = m.find(key);
    if (it == m.end()) throw ConfigError(std::string("missing [") + section + "] key '" + key + "'");
    return it->second;
}

}  // namespace

FunctionSpec RunConfig::function(const std::string& key) const { return build_function(need(bindings, key, "bindings")); }

ExponentSpec RunConfig::exponent(const std::string& key, double dflt) const {
    auto it = bindings.find(key);
    return it == bindings.end() ? ExponentSpec::constant(dflt) : build_exponent(it->second);
}

PhiSpec RunConfig::phi(const std::string& key) const {
    auto it = bindings.find(key);
    return it == bindings.end() ? PhiSpec::identity() : build_phi(it->second);
}

WeightSpec RunConfig::weight(const std::string& key) const {
    auto it = bindings.find(key);
    return it == bindings.end() ? WeightSpec::one() : build_weight(it->second, exponent("exponent", 1.0));
}

KernelSpec RunConfig::kernel(const std::string& key) const { return build_kernel(need(bindings, key, "bindings")); }

SequenceSpec RunConfig::sequence(const std::string& key, const SequenceSpec& dflt) const {
    auto it = bindings.find(key);
    return it == bindings.end() ? dflt : build_sequence(it->second);
}

GridSpec RunConfig::grid(const std::string& key, const GridSpec& dflt) const {
    auto it = grids.find(key);
    return it == grids.end() ? dflt : build_grid(it->second);
}

std::optional<GridSpec> RunConfig::grid_opt(const std::string& key) const {
    auto it = grids.find(key);
    if (it == grids.end()) return std::nullopt;
    return build_grid(it->second);
}

std::vector<double> RunConfig::list_param(const std::string& key, std::vector<double> dflt) const {
    auto it = grids.find(key);
    return it == grids.end() ? dflt : build_list(it->second);
}

double RunConfig::num(const std::string& key, double dflt) const {
    auto it = params.find(key);
    if (it == params.end()) return dflt;
    try {
        Expr e = parse_expr(it->second);
        return as_number(e);
    } catch (const ConfigError& ex) {
        throw ConfigError("[params] " + key + ": " + ex.what());
    }
}

long RunConfig::integer(const std::string& key, long dflt) const {
    const double v = num(key, static_cast<double>(dflt));
    if (v != std::floor(v)) throw ConfigError("[params] " + key + ": expected an integer");
    return static_cast<long>(v);
}

bool RunConfig::flag(const std::string& key, bool dflt) const {
    auto it = params.find(key);
    if (it == params.end()) return dflt;
    const std::string& v = it->second;
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError("[params] " + key + ": expected true or false");
}

std::string RunConfig::str(const std::string& key, const std::string& dflt) const {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
}

const std::map<std::string, std::vector<std::string>>& config_schema() {
    static const std::map<std::string, std::vector<std::string>> schema = {
        {"run", {"command", "out", "seed", "tol", "jobs"}},
        {"bindings",
         {"function", "g", "q", "psi", "u", "exponent", "exponent1", "q_exponent", "phi", "varphi", "weight",
          "weight1", "kernel", "a", "b", "omega", "S"}},
        {"grid", {"l", "t", "x", "eps", "s", "limsup_l", "l_search", "L", "zeta"}},
        {"params",
         {"lo",        "hi",       "tau",       "l",        "t",         "x",         "family",   "variant",
          "equi",      "order",    "threshold", "theorem",  "series",    "mode",      "zeta",     "h",
          "tail_T",    "u0",       "k",         "q",        "beta",      "gamma",     "p",        "M",
          "drop_factor_two", "selection", "untranslated", "scan_lo", "scan_hi", "window_count", "tau_step",
          "domain",    "x_points", "curve",     "op",       "which",     "stevate",   "max_terms", "lux_tol"}},
    };
    return schema;
}

RunConfig parse_config(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& ex) {
        throw ConfigError("parse error at line " + std::to_string(ex.line()) + ": " + ex.message(),
                          static_cast<int>(ex.line()));
    }
    const auto& schema = config_schema();
    RunConfig cfg;
    for (const auto& [section, body] : tree) {
        auto sit = schema.find(section);
        if (sit == schema.end()) {
            if (body.empty()) throw ConfigError("key '" + section + "' outside a section");
            throw ConfigError("unknown section [" + section + "]");
        }
        for (const auto& [key, node] : body) {
            const auto& allowed = sit->second;
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                throw ConfigError("unknown key '" + key + "' in [" + section + "]");
            const std::string value = node.get_value<std::string>();
            if (section == "run") {
                if (key == "command") {
                    cfg.command = value;
                } else if (key == "out") {
                    cfg.out = value;
                } else {
                    double v = 0.0;
                    try {
                        v = as_number(parse_expr(value));
                    } catch (const ConfigError& ex) {
                        throw ConfigError("[run] " + key + ": " + ex.what());
                    }
                    if (key == "seed") {
                        if (v < 0.0 || v != std::floor(v)) throw ConfigError("[run] seed: expected a non-negative integer");
                        cfg.seed = static_cast<std::uint64_t>(v);
                    } else if (key == "tol") {
                        if (!(v > 0.0)) throw ConfigError("[run] tol: must be positive");
                        cfg.tol = v;
                    } else {
                        cfg.jobs = static_cast<int>(v);
                    }
                }
            } else if (section == "params") {
                cfg.params[key] = value;
            } else {
                Expr e;
                try {
                    e = parse_expr(value);
                } catch (const ConfigError& ex) {
                    throw ConfigError("[" + section + "] " + key + ": " + ex.what());
                }
                (section == "bindings" ? cfg.bindings : cfg.grids)[key] = e;
            }
        }
    }
    // Resolve every binding now so errors surface at load time.
    const ExponentSpec p = cfg.exponent("exponent", 1.0);
    for (const auto& [key, e] : cfg.bindings) {
        try {
            if (key == "function" || key == "g" || key == "q" || key == "psi" || key == "u") build_function(e);
            else if (key == "exponent" || key == "exponent1" || key == "q_exponent") build_exponent(e);
            else if (key == "phi" || key == "varphi" || key == "omega") build_phi(e);
            else if (key == "weight" || key == "weight1" || key == "S") build_weight(e, p);
            else if (key == "kernel") build_kernel(e);
            else if (key == "a") build_sequence(e);
            else if (key == "b") {
                if (e.kind != Expr::Kind::String) throw ConfigError("expected a quoted expression in k");
                compile_math(e.text, {"k"});
            }
        } catch (const ConfigError& ex) {
            throw ConfigError("[bindings] " + key + ": " + ex.what());
        }
    }
    for (const auto& [key, e] : cfg.grids) {
        try {
            if (key == "eps" || key == "L") build_list(e);
            else build_grid(e);
        } catch (const ConfigError& ex) {
            throw ConfigError("[grid] " + key + ": " + ex.what());
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace wap
