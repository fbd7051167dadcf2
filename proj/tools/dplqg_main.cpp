// Command-line front end: one verb per analysis, file outputs under --out.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dplqg/bounds.hpp"
#include "dplqg/calibrate.hpp"
#include "dplqg/cost.hpp"
#include "dplqg/errors.hpp"
#include "dplqg/linalg.hpp"
#include "dplqg/presets.hpp"
#include "dplqg/scenario.hpp"
#include "dplqg/simulate.hpp"

namespace {

using namespace dplqg;

// Exit codes: 0 ok, 2 parse, 3 validation, 4 convergence, 5 infeasibility,
// 1 anything else.
constexpr int kParseExit = 2;
constexpr int kValidationExit = 3;
constexpr int kConvergenceExit = 4;
constexpr int kInfeasibleExit = 5;

struct Options {
    std::string scenario_path;
    std::string out_dir = "out";
    std::uint64_t seed = 20;
    bool seed_set = false;
    bool paper_literal = false;
};

LoadedScenario load(const Options& opt) {
    if (opt.scenario_path.empty()) throw ParseError("missing --scenario <path>");
    LoadedScenario ls = load_scenario(opt.scenario_path);
    if (opt.seed_set) ls.scenario.seed = opt.seed;
    return ls;
}

ResultBundle base_bundle(const char* tool, const Scenario& sc) {
    ResultBundle b;
    b.tool = tool;
    b.seed = sc.seed;
    b.scenario_hash = scenario_hash(sc);
    return b;
}

void emit(const ResultBundle& bundle, const Options& opt) {
    const auto files = write_results(bundle, opt.out_dir);
    for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
}

Table matrix_table(const std::string& name, const Matrix& m) {
    Table t{name, {}, {}};
    t.columns.reserve(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) t.columns.push_back("c" + std::to_string(j));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::vector<double> row(m.cols());
        for (std::size_t j = 0; j < m.cols(); ++j) row[j] = m(i, j);
        t.rows.push_back(std::move(row));
    }
    return t;
}

int cmd_synth(const Options& opt) {
    LoadedScenario ls = load(opt);
    const NetworkModel net = assemble_network(ls.scenario.agents, ls.scenario.Q, ls.scenario.R,
                                              ls.scenario.seed);
    const SynthesisResult synth = synthesize(net);
    ResultBundle bundle = base_bundle("synth", ls.scenario);
    std::ostringstream os;
    os.precision(12);
    os << "agents            " << net.num_agents() << "\n"
       << "state dim         " << net.state_dim() << "\n"
       << "input dim         " << net.input_dim() << "\n"
       << "tr(K)             " << synth.K.trace() << "\n"
       << "tr(Sigma)         " << synth.Sigma.trace() << "\n"
       << "tr(SigmaBar)      " << synth.SigmaBar.trace() << "\n"
       << "closed-loop rho   " << spectral_radius_estimate(net.A + net.B * synth.L) << "\n"
       << "||g||             " << norm2(synth.g) << "\n";
    bundle.reports.emplace_back("synthesis", os.str());
    bundle.tables.push_back(matrix_table("K", synth.K));
    bundle.tables.push_back(matrix_table("L", synth.L));
    bundle.tables.push_back(matrix_table("M", synth.M));
    bundle.tables.push_back(matrix_table("Sigma", synth.Sigma));
    bundle.tables.push_back(matrix_table("SigmaBar", synth.SigmaBar));
    bundle.tables.push_back(matrix_table("g", Matrix::column(synth.g)));
    emit(bundle, opt);
    return 0;
}

int cmd_bounds(const Options& opt) {
    LoadedScenario ls = load(opt);
    const NetworkModel net = assemble_network(ls.scenario.agents, ls.scenario.Q, ls.scenario.R,
                                              ls.scenario.seed);
    const BoundReport rep = compute_bound_report(
        net, opt.paper_literal ? LogDetForm::paper_literal : LogDetForm::proof);
    ResultBundle bundle = base_bundle("bounds", ls.scenario);
    Table t{"bounds", {"lower", "exact", "upper"}, {}};
    t.add_row({rep.trace_sigma.lower, *rep.trace_sigma.exact, rep.trace_sigma.upper});
    t.add_row({rep.trace_sigma_bar.lower, *rep.trace_sigma_bar.exact, rep.trace_sigma_bar.upper});
    t.add_row({rep.logdet_sigma.lower, *rep.logdet_sigma.exact, rep.logdet_sigma.upper});
    t.add_row({rep.logdet_sigma_bar.lower, *rep.logdet_sigma_bar.exact,
               rep.logdet_sigma_bar.upper});
    bundle.tables.push_back(std::move(t));
    std::ostringstream os;
    os << "rows: tr(Sigma), tr(SigmaBar), ln det Sigma, ln det SigmaBar\n"
       << (opt.paper_literal ? "log-det lower bound uses the paper-literal channel sum\n"
                             : "log-det lower bound uses the proof-form channel sum\n");
    bundle.reports.emplace_back("bounds_notes", os.str());
    emit(bundle, opt);
    return 0;
}

int cmd_calibrate(const Options& opt) {
    LoadedScenario ls = load(opt);
    if (!ls.apriori_band && !ls.aposteriori_band && !ls.cost_cap)
        throw ParseError(opt.scenario_path + ": no calibration section (apriori_band, "
                                             "aposteriori_band, or cost_cap)");
    const NetworkModel net = assemble_network(ls.scenario.agents, ls.scenario.Q, ls.scenario.R,
                                              ls.scenario.seed);
    ResultBundle bundle = base_bundle("calibrate", ls.scenario);
    std::ostringstream os;
    os.precision(12);
    const ExtremalChannel ch = extremal_channel(net.C, net.V);
    const auto describe = [&os, &net](const char* label, const EpsilonRange& r,
                                      const CalibrationTarget& t) {
        os << label << ": ";
        if (!r.feasible()) {
            os << "infeasible (" << r.diagnostic << ")\n";
            return;
        }
        os << "epsilon in [" << r.lower << ", " << r.upper << "]\n";
        const double mid = std::isfinite(r.upper) ? 0.5 * (r.lower + r.upper) : 2.0 * r.lower;
        const ValidationReport v = validate_epsilon(mid, t, net);
        os << "  validated at epsilon " << mid << ": " << v.detail << " -> "
           << (v.pass ? "pass" : "FAIL") << "\n";
    };
    if (ls.apriori_band)
        describe("a priori MSE band",
                 epsilon_range_apriori(*ls.apriori_band, net.A, net.W, ch), *ls.apriori_band);
    if (ls.aposteriori_band)
        describe("a posteriori MSE band",
                 epsilon_range_aposteriori(*ls.aposteriori_band, net.state_dim(), net.W, ch),
                 *ls.aposteriori_band);
    if (ls.cost_cap) {
        const SynthesisResult synth = synthesize(net);
        describe("cost cap",
                 epsilon_for_cost(ls.cost_cap->upper, net, synth, ls.cost_cap->delta,
                                  ls.cost_cap->sensitivity),
                 *ls.cost_cap);
    }
    bundle.reports.emplace_back("calibration", os.str());
    emit(bundle, opt);
    return 0;
}

int cmd_cost(const Options& opt) {
    LoadedScenario ls = load(opt);
    const NetworkModel net = assemble_network(ls.scenario.agents, ls.scenario.Q, ls.scenario.R,
                                              ls.scenario.seed);
    const SynthesisResult synth = synthesize(net);
    const CostReport rep = total_private_cost(net, synth);
    ResultBundle bundle = base_bundle("cost", ls.scenario);
    std::ostringstream os;
    os.precision(12);
    os << "total cost J~            " << rep.total << "\n"
       << "non-private baseline J0  " << rep.nonprivate << "\n"
       << "privacy overhead dJ      " << rep.overhead << "\n"
       << "  noise term             " << rep.noise_term << "\n"
       << "  reference term         " << rep.reference_term << "\n"
       << "  offset term            " << rep.offset_term << "\n"
       << "  reference penalty      " << rep.reference_penalty << "\n"
       << "corollary overhead       " << privacy_overhead(net, synth) << "\n";
    bundle.reports.emplace_back("cost_report", os.str());
    emit(bundle, opt);
    return 0;
}

int cmd_simulate(const Options& opt) {
    LoadedScenario ls = load(opt);
    const SimulationResult res = run_simulation(ls.scenario);
    ResultBundle bundle = base_bundle("simulate", ls.scenario);
    for (std::size_t r = 0; r < res.traces.size(); ++r) {
        const SimTrace& tr = res.traces[r];
        char name[32];
        std::snprintf(name, sizeof(name), "trace_%03zu", r);
        Table t{name, {"k"}, {}};
        const std::size_t n = res.net.state_dim();
        const std::size_t q = res.net.output_dim();
        const std::size_t m = res.net.input_dim();
        for (std::size_t i = 0; i < n; ++i) t.columns.push_back("x" + std::to_string(i));
        for (std::size_t i = 0; i < n; ++i) t.columns.push_back("xhat" + std::to_string(i));
        for (std::size_t i = 0; i < q; ++i) t.columns.push_back("ytilde" + std::to_string(i));
        for (std::size_t i = 0; i < m; ++i) t.columns.push_back("u" + std::to_string(i));
        t.columns.push_back("cost_instant");
        t.columns.push_back("cost_running");
        for (std::size_t k = 0; k < tr.u.size(); ++k) {
            std::vector<double> row;
            row.reserve(t.columns.size());
            row.push_back(static_cast<double>(k));
            for (std::size_t i = 0; i < n; ++i) row.push_back(tr.x[k][i]);
            for (std::size_t i = 0; i < n; ++i) row.push_back(tr.xhat[k][i]);
            for (std::size_t i = 0; i < q; ++i) row.push_back(tr.ytilde[k][i]);
            for (std::size_t i = 0; i < m; ++i) row.push_back(tr.u[k][i]);
            row.push_back(tr.cost_instant[k]);
            row.push_back(tr.cost_running[k]);
            t.add_row(std::move(row));
        }
        bundle.tables.push_back(std::move(t));
    }
    auto [pred, est] = empirical_mse(res.traces);
    Table mse{"mse", {"k", "prediction_sq_error", "estimation_sq_error"}, {}};
    for (std::size_t k = 0; k < pred.size(); ++k)
        mse.add_row({static_cast<double>(k), pred[k], est[k]});
    bundle.tables.push_back(std::move(mse));
    emit(bundle, opt);
    return 0;
}

int cmd_preset(const Options& opt, const std::string& name) {
    ResultBundle bundle = run_preset(name, opt.seed);
    emit(bundle, opt);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Differentially private multi-agent LQG tracking: synthesis, leakage bounds, "
                 "privacy calibration, cost analysis, and simulation"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--scenario", opt.scenario_path, "Scenario JSON file");
    app.add_option("--out", opt.out_dir, "Output directory");
    auto* seed_opt = app.add_option("--seed", opt.seed, "Master seed override");
    app.add_flag("--paper-literal", opt.paper_literal,
                 "Use the paper-literal channel sum in the log-det lower bound");

    auto* synth = app.add_subcommand("synth", "Synthesize gains, offset, and filter covariances");
    auto* bounds = app.add_subcommand("bounds", "Privacy-leakage bounds with exact values");
    auto* calibrate = app.add_subcommand("calibrate", "Feasible epsilon ranges for the targets");
    auto* cost = app.add_subcommand("cost", "Total private cost and privacy overhead");
    auto* simulate = app.add_subcommand("simulate", "Run the private control loop");
    auto* preset = app.add_subcommand("preset", "Run a named experiment preset");
    std::string preset_name;
    preset->add_option("name", preset_name, "case-study | table1 | cost-rate-sweep | mse-bounds")
        ->required();
    for (CLI::App* sub : {synth, bounds, calibrate, cost, simulate, preset}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    opt.seed_set = seed_opt->count() > 0;

    try {
        if (synth->parsed()) return cmd_synth(opt);
        if (bounds->parsed()) return cmd_bounds(opt);
        if (calibrate->parsed()) return cmd_calibrate(opt);
        if (cost->parsed()) return cmd_cost(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
        if (preset->parsed()) return cmd_preset(opt, preset_name);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParseExit;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kParseExit;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return kConvergenceExit;
    } catch (const InfeasibilityError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kInfeasibleExit;
    } catch (const DimensionError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidationExit;
    } catch (const DomainError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidationExit;
    } catch (const DefinitenessError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidationExit;
    } catch (const SingularityError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidationExit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
