#pragma once

// Value types describing functions, exponents, weights, kernels and
// sequences. All specs are immutable and cheap to copy (shared state).

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wap/quadrature.hpp"

namespace wap {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Domain { Line, HalfLine };

// A constant-valued piece of an exactly integrable function on [lo, hi).
struct Piece {
    double lo = 0.0;
    double hi = 0.0;
    Vec value;
};

// Amplitudes a_n for a spike train sum_n a_n chi_[n^2, n^2+1].
struct AmplitudeRule {
    std::function<double(long)> amp;
    std::string label;
    long max_n = -1;  // negative: no truncation
    std::optional<double> sup;  // known sup |a_n| if bounded

    static AmplitudeRule constant(double c);
    static AmplitudeRule sqrt_n(long max_n = -1);
};

struct CallableTraits {
    std::string label = "callable";
    double lower = -kInf;
    double upper = kInf;
    std::vector<double> kinks;                 // split points for quadrature
    std::vector<quad::Singularity> singular;   // integrable singularities
    std::optional<double> sup_bound;           // global bound on |f|
    double abs_error = 0.0;                    // absolute accuracy of each evaluation
    std::optional<double> period;
};

class FunctionSpec {
public:
    struct Impl;

    FunctionSpec();  // zero function on the line

    static FunctionSpec piecewise_constant(std::vector<double> breaks, std::vector<Vec> values, Vec left_tail,
                                           Vec right_tail, Domain domain = Domain::Line);
    static FunctionSpec piecewise_constant_scalar(std::vector<double> breaks, std::vector<double> values,
                                                  double left_tail = 0.0, double right_tail = 0.0,
                                                  Domain domain = Domain::Line);
    static FunctionSpec indicator(double a, double b);
    static FunctionSpec heaviside();
    static FunctionSpec constant(Vec value);
    static FunctionSpec constant(double value);
    static FunctionSpec spike_train(AmplitudeRule rule);
    static FunctionSpec periodic(FunctionSpec base, double period);
    static FunctionSpec sinusoid(double freq, double phase = 0.0, double amplitude = 1.0);
    static FunctionSpec sampled(std::vector<double> xs, std::vector<double> ys);
    static FunctionSpec callable(std::function<double(double)> fn, CallableTraits traits = {});
    static FunctionSpec callable_vec(std::size_t dim, std::function<void(double, double*)> fn,
                                     CallableTraits traits = {});
    static FunctionSpec scale(double c, const FunctionSpec& f);
    static FunctionSpec sum(std::vector<FunctionSpec> fs);
    static FunctionSpec translate(double tau, const FunctionSpec& f);       // x -> f(x + tau)
    static FunctionSpec affine(double s, double c, const FunctionSpec& f);  // x -> f(s x + c)
    static FunctionSpec reflect(const FunctionSpec& f);                     // x -> f(-x)
    // x -> phi(||f(x)||). `power` is the growth exponent of phi near its
    // argument's singular points, used only as a quadrature hint.
    static FunctionSpec norm_map(std::function<double(double)> phi, const FunctionSpec& f, double power = 1.0,
                                 std::string label = "phi");
    // x -> ||f(x + tau) - f(x)||
    static FunctionSpec difference(const FunctionSpec& f, double tau);
    // x -> ||u(x)|| * ||v(x)||
    static FunctionSpec product(const FunctionSpec& u, const FunctionSpec& v);

    Vec evaluate(double x) const;
    double norm_at(double x) const;
    std::size_t dimension() const;
    double lower() const;
    double upper() const;
    Domain domain() const;
    bool exactly_integrable() const;
    // Sorted, merged points in (a, b) where the function jumps or kinks.
    std::vector<double> breakpoints(double a, double b) const;
    // Constant pieces covering [a, b]. Requires exactly_integrable().
    std::vector<Piece> pieces(double a, double b) const;
    std::vector<quad::Singularity> singularities(double a, double b) const;
    std::optional<double> sup_bound() const;
    // Absolute evaluation error carried from callables; 0 for exact inputs.
    double noise_floor() const;
    std::optional<double> period() const;
    std::string describe() const;

    const Impl& impl() const { return *impl_; }

private:
    explicit FunctionSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

// Exact integral of ||f||^p over [a, b] for exactly integrable f.
double exact_power_integral(const FunctionSpec& f, double p, double a, double b);

// Variable exponent p(.) with values in [1, inf].
class ExponentSpec {
public:
    static ExponentSpec constant(double p);
    // values.size() == breaks.size() + 1; values[i] holds on [breaks[i-1], breaks[i]).
    static ExponentSpec piecewise(std::vector<double> breaks, std::vector<double> values);
    static ExponentSpec callable(std::function<double(double)> fn, double p_minus, double p_plus,
                                 std::string label = "callable");

    double at(double x) const;
    double p_minus() const { return pmin_; }
    double p_plus() const { return pmax_; }
    bool bounded() const { return pmax_ < kInf; }
    bool is_constant() const;
    std::optional<double> constant_value() const;
    bool is_piecewise() const { return kind_ != Kind::Callable; }
    std::vector<double> breakpoints(double a, double b) const;
    // Exponent x -> p(s x + c).
    ExponentSpec affine(double s, double c) const;
    std::string describe() const;

private:
    enum class Kind { Constant, Piecewise, Callable };
    Kind kind_ = Kind::Constant;
    double value_ = 1.0;
    std::vector<double> breaks_;
    std::vector<double> values_;
    std::shared_ptr<std::function<double(double)>> fn_;
    double pmin_ = 1.0;
    double pmax_ = 1.0;
    std::string label_;
};

// Young-type function phi with declared properties. Declared properties are
// audited on random samples at construction.
class PhiSpec {
public:
    struct Flags {
        bool convex = false;
        bool concave = false;
        bool monotone = true;
        bool subadditive = false;
    };

    static PhiSpec identity();
    static PhiSpec power(double alpha);
    // Named entries: identity, square, sqrt, log1p, sat (x/(1+x)), expm1, cube.
    static PhiSpec catalog(std::string_view name);
    static PhiSpec custom(std::string label, std::function<double(double)> fn, Flags flags,
                          std::function<double(double)> varphi = {}, std::uint64_t audit_seed = 1);

    double operator()(double x) const { return (*fn_)(x); }
    bool has_varphi() const { return static_cast<bool>(varphi_) && static_cast<bool>(*varphi_); }
    double varphi(double l) const;
    // sup { x >= 0 : phi(x) <= y } (monotone phi); +inf if unbounded.
    double inverse_sup(double y) const;
    const Flags& flags() const { return flags_; }
    bool is_identity() const { return identity_; }
    std::optional<double> power_exponent() const { return alpha_; }
    std::string describe() const { return label_; }

private:
    std::shared_ptr<std::function<double(double)>> fn_;
    std::shared_ptr<std::function<double(double)>> varphi_;
    Flags flags_;
    bool identity_ = false;
    std::optional<double> alpha_;
    std::string label_;
};

// psi(l) used to build weights F = psi(l)^{-1/p(t)}.
struct PsiSpec {
    std::function<double(double)> fn;
    std::string label;
    static PsiSpec power(double sigma);
    double operator()(double l) const { return fn(l); }
};

// Weight F(l, t) > 0.
class WeightSpec {
public:
    static WeightSpec one();
    static WeightSpec power_of_l(double sigma);                            // l^sigma
    static WeightSpec psi_power(const PsiSpec& psi, const ExponentSpec& p);   // psi(l)^{-1/p(t)}
    static WeightSpec psi_bracket(const PsiSpec& psi, const ExponentSpec& p); // (l/psi(l))^{1/p(t)}
    static WeightSpec custom(std::string label, std::function<double(double, double)> fn, bool t_independent,
                             bool satisfies_d = false);

    double operator()(double l, double t) const;
    bool t_independent() const { return t_independent_; }
    bool satisfies_d() const { return satisfies_d_; }
    std::string describe() const { return label_; }

private:
    std::shared_ptr<std::function<double(double, double)>> fn_;
    bool t_independent_ = true;
    bool satisfies_d_ = true;
    std::string label_;
};

// Convolution kernel R on (0, inf).
class KernelSpec {
public:
    enum class Kind { PolyDecay, ExpDecay, Table };

    static KernelSpec poly_decay(double M, double beta, double gamma);  // M t^{beta-1} / (1 + t^gamma)
    static KernelSpec exp_decay(double M, double beta, double c);       // M t^{beta-1} e^{-c t}
    static KernelSpec table(std::vector<double> ts, std::vector<double> vs);  // linear, zero outside

    Kind kind() const { return kind_; }
    double operator()(double t) const;
    double integral(double a, double b) const;
    // Upper bound on int_V^inf |R|.
    double tail_integral(double V) const;
    // Smallest V with tail_integral(V) <= eps.
    double truncation_point(double eps) const;
    double window_sup(double a, double b) const;
    double singular_exponent() const;
    double value_at_zero_plus() const;
    FunctionSpec as_function() const;
    KernelSpec scaled(double c) const;
    double M() const { return M_; }
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }
    double c() const { return c_; }
    std::string describe() const;

private:
    Kind kind_ = Kind::ExpDecay;
    double M_ = 1.0, beta_ = 1.0, gamma_ = 2.0, c_ = 1.0;
    std::shared_ptr<const std::vector<double>> ts_, vs_;
};

// Nonnegative sequence a_k with sum 1, over k >= 0 or k in Z.
class SequenceSpec {
public:
    static SequenceSpec geometric(double r);            // (1-r) r^k
    static SequenceSpec two_sided_geometric(double r);  // (1-r)/(1+r) r^|k|
    static SequenceSpec custom(std::vector<double> terms, bool two_sided = false);

    double operator()(long k) const;
    // Mass of terms with |k| >= K.
    double tail_mass(long K) const;
    bool two_sided() const { return two_sided_; }
    std::string describe() const;

private:
    enum class Kind { Geometric, TwoSided, Custom };
    Kind kind_ = Kind::Geometric;
    double r_ = 0.5;
    bool two_sided_ = false;
    std::shared_ptr<const std::vector<double>> terms_;
};

// phi_p(t) = t^p, with phi_inf(t) = 0 for t <= 1 and +inf otherwise.
double phi_p(double p, double t);

}  // namespace wap
