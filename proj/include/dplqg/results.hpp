#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace dplqg {

/// Column-named numeric table; serialized as CSV with one header row and
/// values at 17 significant digits.
struct Table {
    std::string name;  // file stem, e.g. "cost_series"
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
};

/// Everything one CLI invocation produces: tables, human-readable reports,
/// and the manifest identifying the inputs.
struct ResultBundle {
    std::string tool;  // verb or preset name
    std::uint64_t seed = 0;
    std::string scenario_hash;
    std::vector<Table> tables;
    std::vector<std::pair<std::string, std::string>> reports;  // file stem -> text
};

std::string to_csv(const Table& t);

/// Writes <name>.csv per table, <name>.txt per report, and manifest.json.
/// The same bundle written twice produces byte-identical files.
std::vector<std::filesystem::path> write_results(const ResultBundle& bundle,
                                                 const std::filesystem::path& dir);

}  // namespace dplqg
