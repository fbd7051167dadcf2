#include "dplqg/presets.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "dplqg/bounds.hpp"
#include "dplqg/cost.hpp"
#include "dplqg/errors.hpp"
#include "dplqg/linalg.hpp"
#include "dplqg/mechanism.hpp"
#include "dplqg/scenario.hpp"

namespace dplqg {

namespace {

std::string cost_report_text(const CostReport& rep) {
    std::ostringstream os;
    os.precision(12);
    os << "total cost J~            " << rep.total << "\n"
       << "non-private baseline J0  " << rep.nonprivate << "\n"
       << "privacy overhead dJ      " << rep.overhead << "\n"
       << "  noise term             " << rep.noise_term << "\n"
       << "  reference term         " << rep.reference_term << "\n"
       << "  offset term            " << rep.offset_term << "\n"
       << "  reference penalty      " << rep.reference_penalty << "\n";
    return os.str();
}

std::string bound_report_text(const BoundReport& rep) {
    std::ostringstream os;
    os.precision(12);
    const auto line = [&os](const char* label, const BoundPair& p) {
        os << label << "  lower " << p.lower << "  upper " << p.upper;
        if (p.exact) os << "  exact " << *p.exact;
        os << "\n";
    };
    line("tr(Sigma)       ", rep.trace_sigma);
    line("tr(SigmaBar)    ", rep.trace_sigma_bar);
    line("ln det Sigma    ", rep.logdet_sigma);
    line("ln det SigmaBar ", rep.logdet_sigma_bar);
    os << "channels: l -> sigma " << rep.channel.sigma_l << " C " << rep.channel.C_l
       << ", u -> sigma " << rep.channel.sigma_u << " C " << rep.channel.C_u << "\n";
    return os.str();
}

// Stable anisotropic demo system for the rate sweep (the rate bounds require
// spectral radius of A strictly below one, which the case-study dynamics do
// not satisfy).
NetworkModel rate_sweep_network() {
    const Matrix A = Matrix::from_rows({{0.8, 0.3, 0.0}, {0.0, 0.2, 0.1}, {0.0, 0.0, -0.5}});
    const Matrix B = Matrix::from_rows({{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.2}});
    const Matrix C = Matrix::diagonal({1.0, 2.0, 0.5});
    const Matrix W = Matrix::diagonal({2.0, 0.5, 1.0});
    const Matrix Q = Matrix::from_rows({{3.2, 0.2, 0.0}, {0.2, 1.2, 0.1}, {0.0, 0.1, 2.2}});
    const Matrix R = Matrix::scaled_identity(2, 0.5);
    const Matrix V = Matrix::identity(3);      // placeholder; rebuilt per epsilon
    const Matrix Wbar = Matrix::identity(3);   // placeholder; rebuilt per epsilon
    return NetworkModel::from_single_block(A, B, C, W, V, Wbar, Q, R, Vector{1.0, 0.5, -0.5});
}

ResultBundle preset_case_study(std::uint64_t seed) {
    ResultBundle bundle;
    bundle.tool = "case-study";
    bundle.seed = seed;

    Scenario sc = case_study_scenario(seed);
    bundle.scenario_hash = scenario_hash(sc);
    SimulationResult priv = run_simulation(sc);

    Scenario sc0 = sc;
    sc0.privacy_noise = false;
    SimulationResult nonpriv = run_simulation(sc0);

    const SimTrace& tp = priv.traces.front();
    const SimTrace& tn = nonpriv.traces.front();
    Table cost{"cost_series",
               {"k", "private_instant", "private_running", "nonprivate_instant",
                "nonprivate_running"},
               {}};
    for (std::size_t k = 0; k < sc.steps; ++k)
        cost.add_row({static_cast<double>(k), tp.cost_instant[k], tp.cost_running[k],
                      tn.cost_instant[k], tn.cost_running[k]});
    bundle.tables.push_back(std::move(cost));

    Table agent1{"agent1_trace",
                 {"k", "x1", "x2", "ytilde1", "ytilde2", "xhat1", "xhat2", "ref1", "ref2"},
                 {}};
    for (std::size_t k = 0; k < sc.steps; ++k)
        agent1.add_row({static_cast<double>(k), tp.x[k][0], tp.x[k][1], tp.ytilde[k][0],
                        tp.ytilde[k][1], tp.xhat[k][0], tp.xhat[k][1], tp.reference[k][0],
                        tp.reference[k][1]});
    bundle.tables.push_back(std::move(agent1));

    const ExtremalChannel ch = extremal_channel(priv.net.C, priv.net.V);
    const auto [lb, ub] = apriori_trace_bounds(priv.net.A, priv.net.W, ch);
    auto [pred, est] = empirical_mse(priv.traces);
    Table mse{"mse_series",
              {"k", "prediction_sq_error", "estimation_sq_error", "bound_lower", "bound_upper"},
              {}};
    for (std::size_t k = 0; k < pred.size(); ++k)
        mse.add_row({static_cast<double>(k), pred[k], est[k], lb, ub});
    bundle.tables.push_back(std::move(mse));

    bundle.reports.emplace_back("cost_report",
                                cost_report_text(total_private_cost(priv.net, priv.synth)));
    bundle.reports.emplace_back("bounds_report",
                                bound_report_text(compute_bound_report(priv.net)));
    return bundle;
}

ResultBundle preset_table1(std::uint64_t seed) {
    ResultBundle bundle;
    bundle.tool = "table1";
    bundle.seed = seed;
    bundle.scenario_hash = "";
    Table t{"table1", {"epsilon", "trace_sigma_bar", "thm_ub", "thm_lb"}, {}};
    for (double eps : {0.1, 0.2, 0.4, 0.6, 0.8, 1.0}) {
        const NetworkModel net = case_study_agent_block(eps, 0.05);
        const ExtremalChannel ch = extremal_channel(net.C, net.V);
        const auto [lb, ub] = aposteriori_trace_bounds(net.state_dim(), net.W, ch);
        const auto [Sigma, SigmaBar] = filter_covariances(net);
        t.add_row({eps, SigmaBar.trace(), ub, lb});
    }
    bundle.tables.push_back(std::move(t));
    return bundle;
}

ResultBundle preset_cost_rate_sweep(std::uint64_t seed) {
    ResultBundle bundle;
    bundle.tool = "cost-rate-sweep";
    bundle.seed = seed;
    bundle.scenario_hash = "";
    const NetworkModel net = rate_sweep_network();
    const SynthesisResult synth = [&] {
        NetworkModel tmp = net;
        tmp.V = Matrix::identity(net.output_dim());
        return synthesize(tmp);
    }();
    const double delta = 0.001, sensitivity = 1.0;
    Table t{"cost_rate", {"epsilon", "lower", "stencil", "upper"}, {}};
    for (int i = 0; i < 20; ++i) {
        const double eps = 0.2 + (3.0 - 0.2) * i / 19.0;
        const RateBounds rb = cost_rate_bounds(eps, delta, sensitivity, net, synth);
        const double stencil = cost_rate_numeric(eps, delta, sensitivity, net);
        t.add_row({eps, rb.lower, stencil, rb.upper});
    }
    bundle.tables.push_back(std::move(t));
    return bundle;
}

ResultBundle preset_mse_bounds(std::uint64_t seed) {
    ResultBundle bundle;
    bundle.tool = "mse-bounds";
    bundle.seed = seed;
    Scenario sc = case_study_scenario(seed);
    bundle.scenario_hash = scenario_hash(sc);
    SimulationResult priv = run_simulation(sc);
    const ExtremalChannel ch = extremal_channel(priv.net.C, priv.net.V);
    const auto [lb, ub] = apriori_trace_bounds(priv.net.A, priv.net.W, ch);
    auto [pred, est] = empirical_mse(priv.traces);
    Table t{"mse_bounds",
            {"k", "prediction_sq_error", "estimation_sq_error", "bound_lower", "bound_upper"},
            {}};
    double mean = 0.0;
    for (std::size_t k = 0; k < pred.size(); ++k) {
        t.add_row({static_cast<double>(k), pred[k], est[k], lb, ub});
        mean += pred[k];
    }
    bundle.tables.push_back(std::move(t));
    std::ostringstream os;
    os.precision(12);
    os << "prediction MSE time-average " << mean / pred.size() << "\n"
       << "a priori trace bounds [" << lb << ", " << ub << "]\n"
       << "exact tr(Sigma) " << priv.synth.Sigma.trace() << "\n";
    bundle.reports.emplace_back("mse_summary", os.str());
    return bundle;
}

}  // namespace

Matrix random_coupled_q(std::size_t n, double diagonal, double lo, double hi,
                        std::uint64_t seed) {
    if (!(lo <= hi)) throw DomainError("random_coupled_q: requires lo <= hi");
    std::mt19937_64 eng(derive_agent_seed(seed, 0, StreamRole::cost_coupling));
    const auto uniform = [&eng] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    Matrix off(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = lo + (hi - lo) * uniform();
            off(i, j) = d;
            off(j, i) = d;
        }
    const Matrix base = Matrix::scaled_identity(n, diagonal);
    double scale = 1.0;
    for (int attempt = 0; attempt < 10; ++attempt) {
        const Matrix q = base + scale * off;
        try {
            cholesky(q);
            return q;
        } catch (const DefinitenessError&) {
            scale *= 0.5;
        }
    }
    throw DefinitenessError("random_coupled_q: could not keep Q positive definite");
}

Scenario case_study_scenario(std::uint64_t seed, std::size_t num_agents, std::size_t steps) {
    AgentModel ag;
    // sampling period 0.1: A = [[1, Ts], [0, 1]], B = [Ts^2/2, Ts]'
    ag.A = Matrix::from_rows({{1.0, 0.1}, {0.0, 1.0}});
    ag.B = Matrix::from_rows({{0.005}, {0.1}});
    ag.C = Matrix::identity(2);
    ag.W = Matrix::identity(2);
    ag.trajectory_privacy = {std::log(3.0), 0.001};
    ag.reference_privacy = {std::log(3.0), 0.2};
    ag.adjacency = {1.0, 1.0};
    ag.reference_limit = {1.0, 1.0};
    ag.initial_mean = {0.0, 0.0};

    Scenario sc;
    sc.agents.assign(num_agents, ag);
    sc.Q = random_coupled_q(2 * num_agents, 500.0, -2.0, 2.0, seed);
    sc.R = Matrix::scaled_identity(num_agents, 0.1);
    sc.steps = steps;
    sc.seed = seed;
    sc.runs = 1;
    sc.reference_profile = ReferenceProfile::tanh_ramp;
    return sc;
}

NetworkModel case_study_agent_block(double epsilon, double delta) {
    const Matrix A = Matrix::from_rows({{1.0, 0.1}, {0.0, 1.0}});
    const Matrix B = Matrix::from_rows({{0.005}, {0.1}});
    const Matrix C = Matrix::identity(2);
    const Matrix W = Matrix::identity(2);
    const double sigma = noise_scale({epsilon, delta}, 1.0).sigma;
    const Matrix V = Matrix::scaled_identity(2, sigma * sigma);
    return NetworkModel::from_single_block(A, B, C, W, V, Matrix(2, 2), Matrix::identity(2),
                                           Matrix::scaled_identity(1, 0.1), Vector{1.0, 1.0});
}

ResultBundle run_preset(const std::string& name, std::uint64_t seed) {
    if (name == "case-study") return preset_case_study(seed);
    if (name == "table1") return preset_table1(seed);
    if (name == "cost-rate-sweep") return preset_cost_rate_sweep(seed);
    if (name == "mse-bounds") return preset_mse_bounds(seed);
    throw DomainError("run_preset: unknown preset '" + name +
                      "' (expected case-study, table1, cost-rate-sweep, or mse-bounds)");
}

}  // namespace dplqg
