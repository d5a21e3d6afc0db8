#pragma once

// Run configuration: a line-oriented INI file ([run], [bindings], [grid],
// [params]) whose values use a small tag(args) grammar, plus the builders
// that turn those values into specs.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wap/funcspace.hpp"
#include "wap/grid.hpp"

namespace wap {

// Parse or validation failure. line is 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line = 0) : std::runtime_error(msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Parsed value expression: number, string, name, list or call.
struct Expr {
    enum class Kind { Number, String, Name, List, Call };
    Kind kind = Kind::Number;
    double number = 0.0;
    std::string text;  // string literal, name, or call tag
    std::vector<Expr> args;                // positional (list items for List)
    std::vector<std::pair<std::string, Expr>> named;
    std::string source;

    const Expr* arg(std::size_t pos, const std::string& name) const;
};

Expr parse_expr(const std::string& text);

// Arithmetic expression in named variables, e.g. "exp(-abs(t))/2".
// Supports + - * / ^, parentheses, pi, e, and sin cos tan exp log sqrt abs
// floor ceil tanh atan min max pow.
std::function<double(const double*)> compile_math(const std::string& text, const std::vector<std::string>& vars);

FunctionSpec build_function(const Expr& e);
ExponentSpec build_exponent(const Expr& e);
PhiSpec build_phi(const Expr& e);
WeightSpec build_weight(const Expr& e, const ExponentSpec& p);
KernelSpec build_kernel(const Expr& e);
SequenceSpec build_sequence(const Expr& e);
GridSpec build_grid(const Expr& e);
std::vector<double> build_list(const Expr& e);

struct RunConfig {
    std::string command;
    std::optional<std::string> out;
    std::uint64_t seed = 1;
    double tol = 1e-10;
    int jobs = 0;
    std::map<std::string, Expr> bindings;
    std::map<std::string, Expr> grids;
    std::map<std::string, std::string> params;

    bool has_binding(const std::string& k) const { return bindings.count(k) > 0; }
    bool has_grid(const std::string& k) const { return grids.count(k) > 0; }
    bool has_param(const std::string& k) const { return params.count(k) > 0; }

    FunctionSpec function(const std::string& key) const;
    ExponentSpec exponent(const std::string& key, double dflt) const;
    PhiSpec phi(const std::string& key = "phi") const;
    // Weight; its psi forms use the exponent bound to "exponent".
    WeightSpec weight(const std::string& key) const;
    KernelSpec kernel(const std::string& key = "kernel") const;
    SequenceSpec sequence(const std::string& key, const SequenceSpec& dflt) const;
    GridSpec grid(const std::string& key, const GridSpec& dflt) const;
    std::optional<GridSpec> grid_opt(const std::string& key) const;
    std::vector<double> list_param(const std::string& key, std::vector<double> dflt) const;

    double num(const std::string& key, double dflt) const;
    long integer(const std::string& key, long dflt) const;
    bool flag(const std::string& key, bool dflt) const;
    std::string str(const std::string& key, const std::string& dflt) const;
};

// Accepted keys per section; unknown keys are rejected.
const std::map<std::string, std::vector<std::string>>& config_schema();

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace wap
