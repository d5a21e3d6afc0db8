// wapctl: batch front end over the wap library.
//
//   wapctl <command> [--config PATH] [--out PATH] [--seed N] [--tol X] [--jobs N]
//   wapctl frac caputo --zeta 0.5 --fn "t" --t 1.0
//   wapctl paper-suite all
//
// Exit codes: 0 all satisfied, 1 violation / mismatch / inconclusive,
// 2 usage or configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wap/commands.hpp"
#include "wap/config.hpp"
#include "wap/grid.hpp"
#include "wap/paper_suite.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<int> jobs;
};

struct FracFlags {
    std::string op;
    std::optional<double> zeta;
    std::string fn;
    std::optional<double> t;
};

void add_common(CLI::App* sub, CommonFlags& f) {
    sub->add_option("--config", f.config, "configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "CSV output path (default: stdout after the report)");
    sub->add_option("--seed", f.seed, "seed for randomized parts");
    sub->add_option("--tol", f.tol, "numerical tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--jobs", f.jobs, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
}

void emit(const wap::CommandOutput& out, const std::string& path) {
    std::cout << out.report;
    if (out.table.empty()) return;
    if (path.empty()) {
        std::cout << '\n' << out.table.str();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw wap::UsageError("cannot write '" + path + "'");
    f << out.table.str();
    std::cout << "csv: " << path << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wapctl: variable-exponent norms, Weyl seminorms, vanishing and convolution checks"};
    app.require_subcommand(1);
    CommonFlags common;
    FracFlags frac;
    std::string selection = "all";

    for (const std::string& name : wap::command_names()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " command");
        add_common(sub, common);
        if (name == "frac") {
            sub->add_option("op", frac.op, "caputo, weyl-liouville, kernel, semigroup, mild or mild-line");
            sub->add_option("--zeta", frac.zeta, "fractional order in (0, 1]");
            sub->add_option("--fn", frac.fn, "function of t, e.g. \"t\" or \"sin(t)\"");
            sub->add_option("--t", frac.t, "evaluation point");
        }
        if (name == "paper-suite") sub->add_option("selection", selection, "all, sec2, sec3, sec41, sec4");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        wap::RunConfig cfg;
        if (!common.config.empty()) cfg = wap::load_config(common.config);
        if (!cfg.command.empty() && cfg.command != command)
            throw wap::UsageError("config command '" + cfg.command + "' does not match '" + command + "'");
        cfg.command = command;
        if (common.seed) cfg.seed = *common.seed;
        if (common.tol) cfg.tol = *common.tol;
        if (common.jobs) cfg.jobs = *common.jobs;
        wap::set_default_jobs(cfg.jobs);
        std::string out = common.out;
        if (out.empty() && cfg.out) out = *cfg.out;
        if (command == "paper-suite") cfg.params["selection"] = selection;
        if (command == "frac") {
            if (!frac.op.empty()) cfg.params["op"] = frac.op;
            if (frac.zeta) cfg.params["zeta"] = wap::csv_number(*frac.zeta);
            if (frac.t) cfg.params["t"] = wap::csv_number(*frac.t);
            if (!frac.fn.empty()) {
                if (frac.fn.find('"') != std::string::npos) throw wap::UsageError("--fn must not contain quotes");
                cfg.bindings["u"] = wap::parse_expr("fn(\"" + frac.fn + "\")");
                wap::build_function(cfg.bindings["u"]);
            }
        }
        const wap::CommandOutput result = wap::run_command(cfg);
        emit(result, out);
        return result.exit_code;
    } catch (const wap::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const wap::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
