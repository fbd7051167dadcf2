#include "dplqg/synthesis.hpp"

#include <cmath>
#include <string>

#include "dplqg/dare.hpp"
#include "dplqg/errors.hpp"
#include "dplqg/linalg.hpp"

namespace dplqg {

bool is_controllable(const Matrix& A, const Matrix& B, double threshold_ratio) {
    const std::size_t n = A.rows();
    // Gram matrix of the controllability matrix: G = sum_k A^k B B'(A')^k.
    Matrix G(n, n);
    Matrix AkB = B;
    for (std::size_t k = 0; k < n; ++k) {
        G += AkB * AkB.transpose();
        if (k + 1 < n) AkB = A * AkB;
    }
    const Spectrum s = sym_eig(G.symmetrized());
    const double s1 = std::sqrt(std::max(0.0, s.max()));
    if (s1 == 0.0) return false;
    const double sn = std::sqrt(std::max(0.0, s.min()));
    return sn > threshold_ratio * s1;
}

GainSet synthesize_gains(const NetworkModel& net) {
    net.validate("synthesize_gains");
    // Controllability decouples over the block-diagonal agent structure.
    for (std::size_t i = 0; i < net.num_agents(); ++i) {
        const std::size_t so = net.state_offsets[i], io = net.input_offsets[i];
        const Matrix Ai = net.A.block(so, so, net.state_dims[i], net.state_dims[i]);
        const Matrix Bi = net.B.block(so, io, net.state_dims[i], net.input_dims[i]);
        if (!is_controllable(Ai, Bi))
            throw DefinitenessError("synthesize_gains: agent " + std::to_string(i) +
                                    " has an uncontrollable (A, B) pair (Assumption 1)");
    }
    GainSet gains;
    gains.K = solve_control_dare(net.A, net.B, net.Q, net.R);
    const Matrix BtK = net.B.transpose() * gains.K;
    const Matrix S = net.R + BtK * net.B;
    gains.L = -solve_linear(S, BtK * net.A);
    gains.M = -solve_linear(S, net.B.transpose());
    return gains;
}

Vector solve_reference_offset(const NetworkModel& net, const Matrix& K) {
    const std::size_t n = net.state_dim();
    const Matrix S = net.R + net.B.transpose() * K * net.B;
    const Matrix T =
        net.A.transpose() * (Matrix::identity(n) - K * net.B * solve_linear(S, net.B.transpose()));
    const Matrix lhs = Matrix::identity(n) - T;
    Vector rhs(n);
    const Vector qx = net.Q * net.xtilde;
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -qx[i];
    try {
        return solve_linear(lhs, rhs);
    } catch (const SingularityError& e) {
        throw SingularityError("solve_reference_offset: I - A'[I - KB(R+B'KB)^-1 B'] is singular; "
                               "spectral radius of the iteration matrix is " +
                                   std::to_string(spectral_radius_estimate(T)),
                               e.condition_estimate);
    }
}

std::pair<Matrix, Matrix> filter_covariances(const NetworkModel& net) {
    const Matrix Sigma = solve_filter_dare(net.A, net.C, net.V, net.W);
    const Matrix info = net.C.transpose() * spd_inverse(net.V) * net.C + spd_inverse(Sigma);
    const Matrix SigmaBar = spd_inverse(info.symmetrized()).symmetrized();
    return {Sigma, SigmaBar};
}

SynthesisResult synthesize(const NetworkModel& net) {
    SynthesisResult out;
    GainSet gains = synthesize_gains(net);
    out.K = std::move(gains.K);
    out.L = std::move(gains.L);
    out.M = std::move(gains.M);
    out.g = solve_reference_offset(net, out.K);
    auto [Sigma, SigmaBar] = filter_covariances(net);
    out.Sigma = std::move(Sigma);
    out.SigmaBar = std::move(SigmaBar);
    out.kalman_gain = out.SigmaBar * net.C.transpose() * spd_inverse(net.V);
    return out;
}

FilterState filter_init(const SynthesisResult& synth, const NetworkModel& net,
                        const Vector& xhat0, const Vector& ytilde0) {
    FilterState st;
    st.prior = xhat0;
    st.posterior = xhat0 + synth.kalman_gain * (ytilde0 - net.C * xhat0);
    return st;
}

FilterState filter_step(const FilterState& state, const SynthesisResult& synth,
                        const NetworkModel& net, const Vector& u, const Vector& ytilde_next) {
    FilterState next;
    next.prior = net.A * state.posterior + net.B * u;
    next.posterior = next.prior + synth.kalman_gain * (ytilde_next - net.C * next.prior);
    return next;
}

Vector control_input(const SynthesisResult& synth, const Vector& xhat) {
    return synth.L * xhat + synth.M * synth.g;
}

}  // namespace dplqg
