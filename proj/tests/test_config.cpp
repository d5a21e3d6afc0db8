#include <cmath>
#include <string>

#include "doctest.h"
#include "wap/commands.hpp"
#include "wap/config.hpp"
#include "wap/paper_suite.hpp"

using namespace wap;

TEST_CASE("minimal config gets defaults") {
    const auto cfg = parse_config("[run]\ncommand = norm\n[bindings]\nfunction = indicator(0, 0.5)\n");
    CHECK(cfg.command == "norm");
    CHECK(cfg.seed == 1);
    CHECK(cfg.tol == 1e-10);
    CHECK(cfg.jobs == 0);
    CHECK_FALSE(cfg.out.has_value());
    CHECK(cfg.function("function").norm_at(0.25) == 1.0);
    CHECK(cfg.exponent("exponent", 1.0).constant_value().value() == 1.0);
}

TEST_CASE("validation errors") {
    auto message = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("[run]\ncommand = norm\n[bindings]\nexponent = const(0.5)\n").find("exponent below 1") !=
          std::string::npos);
    CHECK(message("[bindings]\nkernel = mystery\n").find("undefined kernel") != std::string::npos);
    CHECK(message("[run]\ncolour = red\n").find("unknown key") != std::string::npos);
    CHECK(message("[nowhere]\nx = 1\n").find("unknown section") != std::string::npos);
    CHECK(message("[run]\ntol = -1\n").find("tol") != std::string::npos);
    CHECK(message("[grid]\nl = geometric(1, 2, 0)\n").find("n >= 1") != std::string::npos);
}

TEST_CASE("parse errors carry the line number") {
    try {
        parse_config("[run]\ncommand = norm\nthis line is broken\n");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("expression grammar") {
    const auto e = parse_expr("pwc(breaks=[0, 1, 2], values=[1, 3])");
    CHECK(e.kind == Expr::Kind::Call);
    CHECK(e.text == "pwc");
    const auto f = build_function(e);
    CHECK(f.norm_at(1.5) == 3.0);
    CHECK(build_grid(parse_expr("geometric(1, 256, 9)")).values().size() == 9);
    CHECK(build_grid(parse_expr("[1, 2, 5]")).last() == 5.0);
    CHECK(build_kernel(parse_expr("expdecay(1, 1, 2)"))(1.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(build_sequence(parse_expr("geometric(0.25)"))(1) == doctest::Approx(0.75 * 0.25));
    CHECK_THROWS_AS(parse_expr("indicator(0, "), ConfigError);
}

TEST_CASE("compile_math") {
    const auto f = compile_math("exp(-abs(t))/2 + max(t, 0)^2", {"t"});
    const double t1 = -1.5, t2 = 2.0;
    CHECK(f(&t1) == doctest::Approx(std::exp(-1.5) / 2));
    CHECK(f(&t2) == doctest::Approx(std::exp(-2.0) / 2 + 4));
    const auto g = compile_math("l * t - pi", {"l", "t"});
    const double v[2] = {3, 4};
    CHECK(g(v) == doctest::Approx(12 - M_PI));
    CHECK_THROWS_AS(compile_math("sin(", {"x"}), ConfigError);
    CHECK_THROWS_AS(compile_math("y + 1", {"x"}), ConfigError);
}

TEST_CASE("CSV formatting") {
    CHECK(csv_number(0.5) == "0.5");
    CHECK(csv_number(kInf) == "inf");
    CHECK(csv_number(-kInf) == "-inf");
    CHECK(csv_number(std::nan("")) == "nan");
    CHECK(csv_quote("a,b") == "\"a,b\"");
    CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CsvTable t({"x", "y"});
    t.add_row({"1", "2"});
    CHECK(t.str() == "x,y\r\n1,2\r\n");
    CHECK_THROWS(t.add_row({"1"}));
}

TEST_CASE("run_command is deterministic and maps verdicts to exit codes") {
    const auto cfg = parse_config(
        "[run]\ncommand = seminorm\n[bindings]\nfunction = heaviside\nexponent = const(2)\n"
        "[params]\ntau = 1\nl = 4\n");
    const auto a = run_command(cfg), b = run_command(cfg);
    CHECK(a.exit_code == 0);
    CHECK(a.table.str() == b.table.str());
    CHECK(a.report == b.report);
    REQUIRE(!a.table.rows().empty());

    auto member = parse_config(
        "[run]\ncommand = membership\n[bindings]\nfunction = heaviside\nweight = power(-1)\n"
        "[params]\nequi = true\n");
    CHECK(run_command(member).exit_code == 1);

    RunConfig bad;
    bad.command = "frobnicate";
    CHECK_THROWS_AS(run_command(bad), UsageError);
    CHECK(exit_code_for(VerdictStatus::SatisfiedOnGrid) == 0);
    CHECK(exit_code_for(VerdictStatus::Inconclusive) == 1);
    CHECK(exit_code_for(VerdictStatus::ViolatedWithWitness) == 1);
}

TEST_CASE("paper suite selections") {
    CHECK(suite_group("all").empty());
    CHECK(suite_group("§4.1-bounds") == "sec41");
    CHECK(suite_group("sec3") == "sec3");
    CHECK_THROWS_AS(suite_group("sec9"), UsageError);
    const auto r = run_paper_suite("sec4");
    CHECK(r.all_match);
    CHECK(r.table.header().back() == "match");
    for (const auto& row : r.rows) CHECK(row.group == "sec4");
}

TEST_CASE("defaults table has unique keys") {
    const auto& d = defaults_table();
    REQUIRE(!d.empty());
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j) CHECK(d[i].key != d[j].key);
}
