#include "dplqg/results.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "dplqg/errors.hpp"

namespace dplqg {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("write_results: cannot open " + p.string());
    out << content;
    if (!out) throw IoError("write_results: write failed for " + p.string());
}

}  // namespace

void Table::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw DimensionError("Table::add_row: row width " + std::to_string(row.size()) +
                             " does not match " + std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += t.columns[c];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_number(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::vector<std::filesystem::path> write_results(const ResultBundle& bundle,
                                                 const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("write_results: cannot create directory " + dir.string());

    std::vector<std::filesystem::path> written;
    nlohmann::json manifest;
    manifest["tool"] = bundle.tool;
    manifest["seed"] = bundle.seed;
    manifest["version"] = kVersion;
    manifest["scenario_hash"] = bundle.scenario_hash;
    std::vector<std::string> files;

    for (const Table& t : bundle.tables) {
        const auto p = dir / (t.name + ".csv");
        write_file(p, to_csv(t));
        written.push_back(p);
        files.push_back(t.name + ".csv");
    }
    for (const auto& [stem, text] : bundle.reports) {
        const auto p = dir / (stem + ".txt");
        write_file(p, text);
        written.push_back(p);
        files.push_back(stem + ".txt");
    }
    manifest["files"] = files;
    const auto mp = dir / "manifest.json";
    write_file(mp, manifest.dump(2) + "\n");
    written.push_back(mp);
    return written;
}

}  // namespace dplqg
