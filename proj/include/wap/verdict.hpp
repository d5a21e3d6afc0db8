#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wap {

enum class VerdictStatus { SatisfiedOnGrid, ViolatedWithWitness, Inconclusive };

std::string to_string(VerdictStatus s);

// Concrete point that demonstrates a violation. Unused fields stay empty.
struct Witness {
    std::optional<double> eps{};
    std::optional<double> l{};
    std::optional<double> t{};
    std::optional<double> tau{};
    std::optional<double> x{};
    std::optional<double> interval_lo{};
    std::optional<double> interval_hi{};
    double value = 0.0;      // offending quantity
    double threshold = 0.0;  // bound it exceeds
    std::string note;
};

struct DiagnosticRow {
    std::vector<std::pair<std::string, double>> fields;
    std::string note;
};

// Grid evidence, never proof.
struct Verdict {
    VerdictStatus status = VerdictStatus::Inconclusive;
    std::optional<Witness> witness;
    std::vector<DiagnosticRow> diagnostics;
    std::string summary;
    double lhs = 0.0;
    double rhs = 0.0;

    bool satisfied() const { return status == VerdictStatus::SatisfiedOnGrid; }
    bool violated() const { return status == VerdictStatus::ViolatedWithWitness; }
};

}  // namespace wap
