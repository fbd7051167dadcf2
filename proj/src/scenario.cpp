#include "dplqg/scenario.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dplqg/errors.hpp"
#include "dplqg/presets.hpp"

namespace dplqg {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& section,
                       const std::string& key, const std::string& reason) {
    throw ParseError(origin + ": section '" + section + "', key '" + key + "': " + reason);
}

double get_number(const json& j, const std::string& origin, const std::string& section,
                  const std::string& key) {
    if (!j.contains(key)) fail(origin, section, key, "missing");
    if (!j[key].is_number()) fail(origin, section, key, "expected a number");
    return j[key].get<double>();
}

Matrix parse_matrix(const json& j, const std::string& origin, const std::string& section,
                    const std::string& key) {
    if (!j.contains(key)) fail(origin, section, key, "missing matrix");
    const json& m = j[key];
    if (!m.is_array() || m.empty()) fail(origin, section, key, "expected a non-empty array of rows");
    const std::size_t rows = m.size();
    if (!m[0].is_array() || m[0].empty())
        fail(origin, section, key, "expected rows to be non-empty arrays");
    const std::size_t cols = m[0].size();
    Matrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!m[i].is_array() || m[i].size() != cols)
            fail(origin, section, key, "row " + std::to_string(i) + " has inconsistent length");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!m[i][c].is_number())
                fail(origin, section, key, "non-numeric entry in row " + std::to_string(i));
            out(i, c) = m[i][c].get<double>();
        }
    }
    return out;
}

Vector parse_vector(const json& j, const std::string& origin, const std::string& section,
                    const std::string& key) {
    if (!j.contains(key)) fail(origin, section, key, "missing vector");
    const json& v = j[key];
    if (!v.is_array()) fail(origin, section, key, "expected an array");
    Vector out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) fail(origin, section, key, "non-numeric entry");
        out.push_back(v[i].get<double>());
    }
    return out;
}

AgentModel parse_agent(const json& j, const std::string& origin, std::size_t index) {
    const std::string section = "agents[" + std::to_string(index) + "]";
    AgentModel ag;
    ag.A = parse_matrix(j, origin, section, "A");
    ag.B = parse_matrix(j, origin, section, "B");
    ag.C = j.contains("C") ? parse_matrix(j, origin, section, "C")
                           : Matrix::identity(ag.A.rows());
    ag.W = j.contains("W") ? parse_matrix(j, origin, section, "W")
                           : Matrix::identity(ag.A.rows());
    if (!j.contains("privacy")) fail(origin, section, "privacy", "missing");
    ag.trajectory_privacy = {get_number(j["privacy"], origin, section + ".privacy", "epsilon"),
                             get_number(j["privacy"], origin, section + ".privacy", "delta")};
    if (j.contains("reference_privacy")) {
        ag.reference_privacy = {
            get_number(j["reference_privacy"], origin, section + ".reference_privacy", "epsilon"),
            get_number(j["reference_privacy"], origin, section + ".reference_privacy", "delta")};
    } else {
        ag.reference_privacy = ag.trajectory_privacy;
    }
    if (j.contains("adjacency")) {
        ag.adjacency = {
            get_number(j["adjacency"], origin, section + ".adjacency", "trajectory_radius"),
            get_number(j["adjacency"], origin, section + ".adjacency", "static_radius")};
    }
    ag.reference_limit = parse_vector(j, origin, section, "reference_limit");
    ag.initial_mean = j.contains("initial_mean") ? parse_vector(j, origin, section, "initial_mean")
                                                 : Vector(ag.A.rows(), 0.0);
    if (j.contains("initial_state")) {
        ag.initial_state = parse_vector(j, origin, section, "initial_state");
        ag.has_initial_state = true;
    }
    try {
        ag.validate(section.c_str());
    } catch (const Error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    return ag;
}

CalibrationTarget parse_target(const json& j, const std::string& origin,
                               const std::string& section, CalibrationTarget::Kind kind) {
    CalibrationTarget t;
    t.kind = kind;
    if (kind == CalibrationTarget::Kind::cost_cap) {
        t.upper = get_number(j, origin, section, "alpha");
    } else {
        t.lower = get_number(j, origin, section, "lower");
        t.upper = get_number(j, origin, section, "upper");
        if (!(t.lower < t.upper)) fail(origin, section, "lower", "band requires lower < upper");
    }
    if (j.contains("delta")) t.delta = get_number(j, origin, section, "delta");
    if (j.contains("sensitivity")) t.sensitivity = get_number(j, origin, section, "sensitivity");
    return t;
}

void append_number(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void append_matrix(std::string& out, const Matrix& m) {
    out += '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i) out += ';';
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            append_number(out, m(i, j));
        }
    }
    out += ']';
}

void append_vector(std::string& out, const Vector& v) {
    out += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        append_number(out, v[i]);
    }
    out += ']';
}

}  // namespace

LoadedScenario parse_scenario(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": invalid JSON: " + e.what());
    }
    if (!root.is_object()) throw ParseError(origin + ": top level must be an object");
    if (!root.contains("agents") || !root["agents"].is_array() || root["agents"].empty())
        fail(origin, "agents", "agents", "expected a non-empty array");

    LoadedScenario out;
    Scenario& sc = out.scenario;
    for (std::size_t i = 0; i < root["agents"].size(); ++i) {
        const json& aj = root["agents"][i];
        AgentModel ag = parse_agent(aj, origin, i);
        std::size_t replicate = 1;
        if (aj.contains("replicate")) {
            if (!aj["replicate"].is_number_unsigned() || aj["replicate"].get<std::size_t>() < 1)
                fail(origin, "agents[" + std::to_string(i) + "]", "replicate",
                     "expected a positive integer");
            replicate = aj["replicate"].get<std::size_t>();
        }
        for (std::size_t r = 0; r < replicate; ++r) sc.agents.push_back(ag);
    }

    std::size_t n = 0, m = 0;
    for (const AgentModel& ag : sc.agents) {
        n += ag.state_dim();
        m += ag.input_dim();
    }
    const std::uint64_t file_seed = root.contains("sim") && root["sim"].contains("seed")
                                        ? root["sim"]["seed"].get<std::uint64_t>()
                                        : 0;
    if (!root.contains("cost")) fail(origin, "cost", "cost", "missing section");
    const json& cost = root["cost"];
    if (cost.contains("Q")) {
        sc.Q = parse_matrix(cost, origin, "cost", "Q");
    } else if (cost.contains("Q_diagonal")) {
        const double diag = get_number(cost, origin, "cost", "Q_diagonal");
        if (cost.contains("Q_offdiagonal_range")) {
            const Vector range = parse_vector(cost, origin, "cost", "Q_offdiagonal_range");
            if (range.size() != 2 || !(range[0] <= range[1]))
                fail(origin, "cost", "Q_offdiagonal_range", "expected [lo, hi] with lo <= hi");
            try {
                sc.Q = random_coupled_q(n, diag, range[0], range[1], file_seed);
            } catch (const Error& e) {
                fail(origin, "cost", "Q_offdiagonal_range", e.what());
            }
        } else {
            sc.Q = Matrix::scaled_identity(n, diag);
        }
    } else {
        fail(origin, "cost", "Q", "provide Q or Q_diagonal");
    }
    if (cost.contains("R")) {
        sc.R = parse_matrix(cost, origin, "cost", "R");
    } else if (cost.contains("R_scaled_identity")) {
        sc.R = Matrix::scaled_identity(m, get_number(cost, origin, "cost", "R_scaled_identity"));
    } else {
        fail(origin, "cost", "R", "provide R or R_scaled_identity");
    }

    if (root.contains("sim")) {
        const json& sim = root["sim"];
        if (sim.contains("steps")) sc.steps = sim["steps"].get<std::size_t>();
        if (sim.contains("seed")) sc.seed = sim["seed"].get<std::uint64_t>();
        if (sim.contains("runs")) sc.runs = sim["runs"].get<std::size_t>();
        if (sim.contains("reference_profile")) {
            const std::string p = sim["reference_profile"].get<std::string>();
            if (p == "tanh")
                sc.reference_profile = ReferenceProfile::tanh_ramp;
            else if (p == "constant")
                sc.reference_profile = ReferenceProfile::constant;
            else
                fail(origin, "sim", "reference_profile", "expected 'tanh' or 'constant'");
        }
        if (sim.contains("privacy_noise")) sc.privacy_noise = sim["privacy_noise"].get<bool>();
        if (sim.contains("process_noise")) sc.process_noise = sim["process_noise"].get<bool>();
    }

    if (root.contains("calibration")) {
        const json& cal = root["calibration"];
        if (cal.contains("apriori_band"))
            out.apriori_band = parse_target(cal["apriori_band"], origin, "calibration.apriori_band",
                                            CalibrationTarget::Kind::apriori_mse);
        if (cal.contains("aposteriori_band"))
            out.aposteriori_band =
                parse_target(cal["aposteriori_band"], origin, "calibration.aposteriori_band",
                             CalibrationTarget::Kind::aposteriori_mse);
        if (cal.contains("cost_cap"))
            out.cost_cap = parse_target(cal["cost_cap"], origin, "calibration.cost_cap",
                                        CalibrationTarget::Kind::cost_cap);
    }

    try {
        sc.validate(origin.c_str());
        // Surface Q/R problems at load time with the file name attached.
        assemble_network(sc.agents, sc.Q, sc.R, sc.seed);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    return out;
}

LoadedScenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_scenario: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path.string());
}

std::string canonical_scenario(const Scenario& sc) {
    std::string out = "dplqg-scenario-v1{";
    out += "agents:[";
    for (std::size_t i = 0; i < sc.agents.size(); ++i) {
        const AgentModel& ag = sc.agents[i];
        if (i) out += '|';
        out += "A=";
        append_matrix(out, ag.A);
        out += ",B=";
        append_matrix(out, ag.B);
        out += ",C=";
        append_matrix(out, ag.C);
        out += ",W=";
        append_matrix(out, ag.W);
        out += ",eps=";
        append_number(out, ag.trajectory_privacy.epsilon);
        out += ",delta=";
        append_number(out, ag.trajectory_privacy.delta);
        out += ",epsbar=";
        append_number(out, ag.reference_privacy.epsilon);
        out += ",deltabar=";
        append_number(out, ag.reference_privacy.delta);
        out += ",b=";
        append_number(out, ag.adjacency.trajectory_radius);
        out += ",beta=";
        append_number(out, ag.adjacency.static_radius);
        out += ",xbar=";
        append_vector(out, ag.reference_limit);
        out += ",x0mean=";
        append_vector(out, ag.initial_mean);
        if (ag.has_initial_state) {
            out += ",x0=";
            append_vector(out, ag.initial_state);
        }
    }
    out += "],Q=";
    append_matrix(out, sc.Q);
    out += ",R=";
    append_matrix(out, sc.R);
    out += ",steps=" + std::to_string(sc.steps);
    out += ",seed=" + std::to_string(sc.seed);
    out += ",runs=" + std::to_string(sc.runs);
    out += ",profile=";
    out += sc.reference_profile == ReferenceProfile::tanh_ramp ? "tanh" : "constant";
    out += ",privacy=" + std::to_string(sc.privacy_noise);
    out += ",process=" + std::to_string(sc.process_noise);
    out += '}';
    return out;
}

std::string scenario_hash(const Scenario& sc) {
    const std::string canon = canonical_scenario(sc);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

}  // namespace dplqg
