#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rbmo/bmo_weights.hpp"
#include "rbmo/construction.hpp"
#include "rbmo/report.hpp"

namespace rbmo {

nlohmann::ordered_json to_json(const CubeSupremumReport& report);

/// Fixed top-level schema {check, pass, constants, worst, tolerances,
/// notes}; aggregate reports add "stages", profile-bearing ones "profiles".
nlohmann::ordered_json to_json(const VerificationReport& report);

/// Manifest referencing the RFLD files of g1, g2, v plus the scalar
/// metadata of the construction.
nlohmann::ordered_json construction_manifest(const ConstructionResult& result,
                                             const std::string& g1_file,
                                             const std::string& g2_file,
                                             const std::string& v_file);

/// CSV with a "key,value" header; one file per stage for aggregate
/// reports, named <stage>.csv, else <check>.csv. Rows are sorted by key;
/// numbers are written with 17 significant digits.
void emit_profile(const VerificationReport& report,
                  const std::filesystem::path& directory);

/// Per-level profile of a cube scan as CSV.
void emit_profile(const CubeSupremumReport& report,
                  const std::filesystem::path& file);

} // namespace rbmo
