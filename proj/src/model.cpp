#include "dplqg/model.hpp"

#include <string>

#include "dplqg/errors.hpp"
#include "dplqg/linalg.hpp"
#include "dplqg/mechanism.hpp"

namespace dplqg {

void AgentModel::validate(const char* where) const {
    const std::string w = where;
    if (!A.is_square() || A.rows() == 0) throw DimensionError(w + ": A must be square and nonempty");
    const std::size_t n = A.rows();
    if (B.rows() != n || B.cols() == 0) throw DimensionError(w + ": B must be n x m with m >= 1");
    if (C.cols() != n || C.rows() == 0) throw DimensionError(w + ": C must be q x n with q >= 1");
    if (W.rows() != n || W.cols() != n) throw DimensionError(w + ": W must be n x n");
    require_symmetric(W, (w + ": W").c_str());
    try {
        cholesky(W);
    } catch (const DefinitenessError&) {
        throw DefinitenessError(w + ": W must be positive definite");
    }
    trajectory_privacy.validate((w + ": trajectory privacy").c_str());
    reference_privacy.validate((w + ": reference privacy").c_str());
    adjacency.validate((w + ": adjacency").c_str());
    if (reference_limit.size() != n) throw DimensionError(w + ": reference_limit must have length n");
    if (initial_mean.size() != n) throw DimensionError(w + ": initial_mean must have length n");
    if (has_initial_state && initial_state.size() != n)
        throw DimensionError(w + ": initial_state must have length n");
}

void NetworkModel::validate(const char* where) const {
    const std::string w = where;
    const std::size_t n = state_dim(), m = input_dim(), q = output_dim();
    if (!A.is_square()) throw DimensionError(w + ": A must be square");
    if (B.rows() != n) throw DimensionError(w + ": B row mismatch");
    if (C.cols() != n) throw DimensionError(w + ": C column mismatch");
    if (W.rows() != n || W.cols() != n) throw DimensionError(w + ": W must be n x n");
    if (V.rows() != q || V.cols() != q) throw DimensionError(w + ": V must be q x q");
    if (Wbar.rows() != n || Wbar.cols() != n) throw DimensionError(w + ": Wbar must be n x n");
    if (Q.rows() != n || Q.cols() != n) throw DimensionError(w + ": Q must be n x n");
    if (R.rows() != m || R.cols() != m) throw DimensionError(w + ": R must be m x m");
    if (xtilde.size() != n) throw DimensionError(w + ": xtilde must have length n");
    require_symmetric(Q, (w + ": Q").c_str());
    require_symmetric(R, (w + ": R").c_str());
    try {
        cholesky(Q);
    } catch (const DefinitenessError&) {
        throw DefinitenessError(w + ": Q must be positive definite");
    }
    try {
        cholesky(R);
    } catch (const DefinitenessError&) {
        throw DefinitenessError(w + ": R must be positive definite");
    }
}

NetworkModel NetworkModel::from_single_block(Matrix A, Matrix B, Matrix C, Matrix W, Matrix V,
                                             Matrix Wbar, Matrix Q, Matrix R, Vector xtilde) {
    NetworkModel net;
    net.state_dims = {A.rows()};
    net.input_dims = {B.cols()};
    net.output_dims = {C.rows()};
    net.state_offsets = {0};
    net.input_offsets = {0};
    net.output_offsets = {0};
    net.A = std::move(A);
    net.B = std::move(B);
    net.C = std::move(C);
    net.W = std::move(W);
    net.V = std::move(V);
    net.Wbar = std::move(Wbar);
    net.Q = std::move(Q);
    net.R = std::move(R);
    net.xtilde = std::move(xtilde);
    net.reference_limit = net.xtilde;
    net.initial_mean = Vector(net.state_dim(), 0.0);
    net.output_noise_sigma = {0.0};
    net.reference_noise_sigma = {0.0};
    net.validate("NetworkModel::from_single_block");
    return net;
}

NetworkModel assemble_network(const std::vector<AgentModel>& agents, Matrix Q, Matrix R,
                              std::uint64_t seed) {
    if (agents.empty()) throw DimensionError("assemble_network: no agents");
    NetworkModel net;
    std::size_t n = 0, m = 0, q = 0;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        agents[i].validate(("assemble_network: agent " + std::to_string(i)).c_str());
        net.state_offsets.push_back(n);
        net.input_offsets.push_back(m);
        net.output_offsets.push_back(q);
        net.state_dims.push_back(agents[i].state_dim());
        net.input_dims.push_back(agents[i].input_dim());
        net.output_dims.push_back(agents[i].output_dim());
        n += agents[i].state_dim();
        m += agents[i].input_dim();
        q += agents[i].output_dim();
    }
    net.A = Matrix(n, n);
    net.B = Matrix(n, m);
    net.C = Matrix(q, n);
    net.W = Matrix(n, n);
    net.V = Matrix(q, q);
    net.Wbar = Matrix(n, n);
    net.xtilde = Vector(n, 0.0);
    net.reference_limit = Vector(n, 0.0);
    net.initial_mean = Vector(n, 0.0);

    for (std::size_t i = 0; i < agents.size(); ++i) {
        const AgentModel& ag = agents[i];
        const std::size_t so = net.state_offsets[i], io = net.input_offsets[i],
                          oo = net.output_offsets[i];
        net.A.set_block(so, so, ag.A);
        net.B.set_block(so, io, ag.B);
        net.C.set_block(oo, so, ag.C);
        net.W.set_block(so, so, ag.W);

        const double sens = output_sensitivity(ag.C, ag.adjacency.trajectory_radius);
        const double sigma = noise_scale(ag.trajectory_privacy, sens).sigma;
        net.output_noise_sigma.push_back(sigma);
        net.V.set_block(oo, oo, Matrix::scaled_identity(ag.output_dim(), sigma * sigma));

        const NoiseScale ref_scale =
            noise_scale(ag.reference_privacy, ag.adjacency.static_radius);
        net.reference_noise_sigma.push_back(ref_scale.sigma);
        net.Wbar.set_block(so, so,
                           Matrix::scaled_identity(ag.state_dim(), ref_scale.sigma * ref_scale.sigma));

        GaussianSampler ref_rng(derive_agent_seed(seed, i, StreamRole::reference_noise));
        const Vector xt_i = privatize_static(ag.reference_limit, ref_scale, ref_rng);
        for (std::size_t k = 0; k < ag.state_dim(); ++k) {
            net.xtilde[so + k] = xt_i[k];
            net.reference_limit[so + k] = ag.reference_limit[k];
            net.initial_mean[so + k] = ag.initial_mean[k];
        }
    }
    net.Q = std::move(Q);
    net.R = std::move(R);
    net.validate("assemble_network");
    return net;
}

}  // namespace dplqg
