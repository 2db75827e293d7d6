#pragma once

#include <map>
#include <string>
#include <vector>

namespace rbmo {

/// Structured outcome of a numerical check: measured constants, the worst
/// location found, the tolerances applied, and optional per-level or
/// per-height profiles for CSV export. Aggregate checks carry their
/// sub-checks in `stages`.
struct VerificationReport {
    std::string check;
    bool pass = false;
    std::map<std::string, double> constants;
    std::map<std::string, double> worst;
    std::map<std::string, double> tolerances;
    std::vector<std::string> notes;
    std::map<std::string, std::map<double, double>> profiles;
    std::vector<VerificationReport> stages;
};

} // namespace rbmo
