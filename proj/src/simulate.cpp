#include "dplqg/simulate.hpp"

#include <cmath>
#include <string>

#include "dplqg/errors.hpp"
#include "dplqg/linalg.hpp"
#include "dplqg/mechanism.hpp"

namespace dplqg {

namespace {

constexpr double kNonPrivateTau = 1e-12;

struct AgentStreams {
    GaussianSampler output;
    GaussianSampler process;
    GaussianSampler initial;
};

}  // namespace

void Scenario::validate(const char* where) const {
    const std::string w = where;
    if (agents.empty()) throw DimensionError(w + ": scenario needs at least one agent");
    if (steps < 1) throw DomainError(w + ": steps must be >= 1");
    if (runs < 1) throw DomainError(w + ": runs must be >= 1");
    for (std::size_t i = 0; i < agents.size(); ++i)
        agents[i].validate((w + ": agent " + std::to_string(i)).c_str());
}

Vector reference_at(const NetworkModel& net, ReferenceProfile profile, std::size_t k) {
    if (profile == ReferenceProfile::constant) return net.reference_limit;
    const double scale = std::tanh(static_cast<double>(k));
    Vector r(net.state_dim());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = scale * net.reference_limit[i];
    return r;
}

SimTrace run_single(const NetworkModel& net, const SynthesisResult& synth, const Scenario& sc,
                    std::size_t run_index) {
    const std::size_t n = net.state_dim();
    const std::size_t num_agents = net.num_agents();

    std::vector<AgentStreams> streams;
    streams.reserve(num_agents);
    for (std::size_t i = 0; i < num_agents; ++i) {
        streams.push_back(AgentStreams{
            GaussianSampler(derive_run_seed(sc.seed, run_index, i, StreamRole::output_noise)),
            GaussianSampler(derive_run_seed(sc.seed, run_index, i, StreamRole::process_noise)),
            GaussianSampler(derive_run_seed(sc.seed, run_index, i, StreamRole::initial_state))});
    }

    // x(0): the scenario's pinned initial state, or N(xhat(0), I) per agent.
    Vector x = net.initial_mean;
    for (std::size_t i = 0; i < num_agents; ++i) {
        const std::size_t so = net.state_offsets[i], ni = net.state_dims[i];
        if (i < sc.agents.size() && sc.agents[i].has_initial_state) {
            for (std::size_t k = 0; k < ni; ++k) x[so + k] = sc.agents[i].initial_state[k];
        } else if (sc.process_noise) {
            for (std::size_t k = 0; k < ni; ++k) x[so + k] += streams[i].initial.sample();
        }
    }

    SimTrace tr;
    tr.x.reserve(sc.steps + 1);
    tr.x.push_back(x);

    FilterState state;
    state.prior = net.initial_mean;
    state.posterior = net.initial_mean;

    double cost_sum = 0.0;
    for (std::size_t k = 0; k < sc.steps; ++k) {
        // Agents ascending, v before w within each step; v_i ~ N(0, V_i)
        // with V_i the agent's block of the privacy-noise covariance.
        Vector v(net.output_dim(), 0.0);
        if (sc.privacy_noise) {
            for (std::size_t i = 0; i < num_agents; ++i) {
                const std::size_t oo = net.output_offsets[i], qi = net.output_dims[i];
                const Matrix Vi = net.V.block(oo, oo, qi, qi);
                bool diag = true;
                for (std::size_t a = 0; a < qi && diag; ++a)
                    for (std::size_t b = 0; b < qi; ++b)
                        if (a != b && Vi(a, b) != 0.0) {
                            diag = false;
                            break;
                        }
                if (diag) {
                    for (std::size_t j = 0; j < qi; ++j)
                        v[oo + j] = std::sqrt(Vi(j, j)) * streams[i].output.sample();
                } else {
                    const Matrix Li = cholesky(Vi);
                    Vector z(qi);
                    for (std::size_t j = 0; j < qi; ++j) z[j] = streams[i].output.sample();
                    const Vector vi = Li * z;
                    for (std::size_t j = 0; j < qi; ++j) v[oo + j] = vi[j];
                }
            }
        }
        const Vector ytilde = net.C * x + v;

        if (k == 0) {
            state = filter_init(synth, net, net.initial_mean, ytilde);
        } else {
            state = filter_step(state, synth, net, tr.u.back(), ytilde);
        }

        const Vector uk = control_input(synth, state.posterior);
        const Vector ref = reference_at(net, sc.reference_profile, k);
        const Vector err = x - ref;
        const double inst = quadratic_form(err, net.Q, err) + quadratic_form(uk, net.R, uk);
        cost_sum += inst;

        tr.ytilde.push_back(ytilde);
        tr.v.push_back(v);
        tr.xhat.push_back(state.posterior);
        tr.xhat_prior.push_back(state.prior);
        tr.u.push_back(uk);
        tr.reference.push_back(ref);
        tr.cost_instant.push_back(inst);
        tr.cost_running.push_back(cost_sum / static_cast<double>(k + 1));

        Vector w(n, 0.0);
        if (sc.process_noise) {
            for (std::size_t i = 0; i < num_agents; ++i) {
                const std::size_t so = net.state_offsets[i], ni = net.state_dims[i];
                // W_i is PD; draw through its Cholesky factor block.
                const Matrix Wi = net.W.block(so, so, ni, ni);
                if (Wi == Matrix::identity(ni)) {
                    for (std::size_t j = 0; j < ni; ++j) w[so + j] = streams[i].process.sample();
                } else {
                    const Matrix Li = cholesky(Wi);
                    Vector z(ni);
                    for (std::size_t j = 0; j < ni; ++j) z[j] = streams[i].process.sample();
                    const Vector wi = Li * z;
                    for (std::size_t j = 0; j < ni; ++j) w[so + j] = wi[j];
                }
            }
        }
        tr.w.push_back(w);
        x = net.A * x + net.B * uk + w;
        tr.x.push_back(x);
    }
    return tr;
}

SimulationResult run_simulation(const Scenario& sc) {
    sc.validate("run_simulation");
    SimulationResult out;
    out.net = assemble_network(sc.agents, sc.Q, sc.R, sc.seed);
    if (!sc.privacy_noise) {
        // Non-private baseline: v = wbar = 0; the filter runs at V -> 0.
        out.net.V = Matrix::scaled_identity(out.net.output_dim(), kNonPrivateTau);
        out.net.Wbar = Matrix(out.net.state_dim(), out.net.state_dim());
        out.net.xtilde = out.net.reference_limit;
        for (auto& s : out.net.output_noise_sigma) s = 0.0;
        for (auto& s : out.net.reference_noise_sigma) s = 0.0;
    }
    out.synth = synthesize(out.net);
    out.traces.reserve(sc.runs);
    for (std::size_t r = 0; r < sc.runs; ++r) out.traces.push_back(run_single(out.net, out.synth, sc, r));
    return out;
}

std::vector<double> empirical_cost(const SimTrace& trace, const NetworkModel& net) {
    std::vector<double> running;
    running.reserve(trace.u.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < trace.u.size(); ++k) {
        const Vector err = trace.x[k] - trace.reference[k];
        sum += quadratic_form(err, net.Q, err) + quadratic_form(trace.u[k], net.R, trace.u[k]);
        running.push_back(sum / static_cast<double>(k + 1));
    }
    return running;
}

std::vector<double> empirical_cost(const SimTrace& trace, const NetworkModel& net,
                                   const Vector& fixed_reference) {
    std::vector<double> running;
    running.reserve(trace.u.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < trace.u.size(); ++k) {
        const Vector err = trace.x[k] - fixed_reference;
        sum += quadratic_form(err, net.Q, err) + quadratic_form(trace.u[k], net.R, trace.u[k]);
        running.push_back(sum / static_cast<double>(k + 1));
    }
    return running;
}

std::pair<std::vector<double>, std::vector<double>> empirical_mse(
    const std::vector<SimTrace>& traces) {
    if (traces.empty()) throw DimensionError("empirical_mse: needs at least one trace");
    const std::size_t steps = traces.front().xhat.size();
    std::vector<double> pred(steps, 0.0), est(steps, 0.0);
    for (const SimTrace& tr : traces) {
        if (tr.xhat.size() != steps)
            throw DimensionError("empirical_mse: traces have unequal lengths");
        for (std::size_t k = 0; k < steps; ++k) {
            const Vector ep = tr.x[k] - tr.xhat_prior[k];
            const Vector ee = tr.x[k] - tr.xhat[k];
            pred[k] += dot(ep, ep);
            est[k] += dot(ee, ee);
        }
    }
    const double inv = 1.0 / static_cast<double>(traces.size());
    for (std::size_t k = 0; k < steps; ++k) {
        pred[k] *= inv;
        est[k] *= inv;
    }
    return {pred, est};
}

}  // namespace dplqg
