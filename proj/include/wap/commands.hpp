#pragma once

// Subcommand runners behind wapctl: each turns a RunConfig into a text
// report, a CSV table and an exit code.

#include <stdexcept>
#include <string>
#include <vector>

#include "wap/config.hpp"
#include "wap/verdict.hpp"

namespace wap {

// RFC 4180 style table with a header row.
class CsvTable {
public:
    CsvTable() = default;
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void set_header(std::vector<std::string> header) { header_ = std::move(header); }
    void add_row(std::vector<std::string> cells);
    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }
    bool empty() const { return header_.empty(); }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// %.12g, with inf, -inf and nan spelled out.
std::string csv_number(double v);
std::string csv_quote(const std::string& s);

// Columns are the union of diagnostic field names in first-seen order,
// followed by a note column.
CsvTable diagnostics_table(const std::vector<DiagnosticRow>& rows);

std::string render_verdict(const Verdict& v);

// 0 for satisfied, 1 otherwise.
int exit_code_for(VerdictStatus s);

struct CommandOutput {
    int exit_code = 0;
    std::string report;
    CsvTable table;
};

// Bad command name or option value.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const std::vector<std::string>& command_names();

// Dispatch on cfg.command.
CommandOutput run_command(const RunConfig& cfg);

struct DefaultEntry {
    std::string key;
    std::string value;
    std::string description;
};

// Every default used by the library and the CLI, in one place.
const std::vector<DefaultEntry>& defaults_table();

}  // namespace wap
