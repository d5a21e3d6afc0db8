#pragma once

// Pinned reproduction table of the worked examples: each row recomputes a
// verdict or value and compares it with the stored expectation.

#include <string>
#include <vector>

#include "wap/commands.hpp"

namespace wap {

struct SuiteRow {
    std::string id;
    std::string group;  // sec2, sec3, sec41, sec4
    std::string description;
    std::string expected;
    std::string measured;
    std::string paper_claim;  // agree, or conflict when the stated claim differs from the expectation
    bool match = false;
};

struct SuiteReport {
    std::vector<SuiteRow> rows;
    CsvTable table;
    std::string summary;
    bool all_match = true;
};

// Selections: all, sec2, sec3, sec41, sec4 and the aliases §2-examples,
// §3-examples, §4.1-bounds. Unknown selections throw UsageError.
SuiteReport run_paper_suite(const std::string& selection);

// Canonical group for a selection name; empty for "all".
std::string suite_group(const std::string& selection);

}  // namespace wap
