#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "dplqg/calibrate.hpp"
#include "dplqg/simulate.hpp"

namespace dplqg {

/// A scenario plus the optional calibration request attached to it.
struct LoadedScenario {
    Scenario scenario;
    std::optional<CalibrationTarget> apriori_band;
    std::optional<CalibrationTarget> aposteriori_band;
    std::optional<CalibrationTarget> cost_cap;
};

/// Parses and fully validates a JSON scenario file. Diagnostics name the
/// offending section and key. See README for the schema.
LoadedScenario load_scenario(const std::filesystem::path& path);
LoadedScenario parse_scenario(const std::string& json_text, const std::string& origin);

/// Canonical serialization of the parsed scenario (numbers at 17 significant
/// digits, keys sorted); equal scenarios hash equal, any semantic change
/// changes the hash.
std::string canonical_scenario(const Scenario& sc);

/// FNV-1a 64-bit hash of the canonical form, as fixed-width hex.
std::string scenario_hash(const Scenario& sc);

}  // namespace dplqg
