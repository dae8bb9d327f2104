#pragma once

#include "helpers.hpp"
#include "qdmft/ramsey.hpp"

namespace qdmft::testing {

// F via the algebraic formula <psi| U(0,n)^dag sigma_second U(m,n) sigma_first U(0,m) |psi>
// with dense per-step unitaries of the compiled programs.
inline cplx trace_formula(const RamseyContext& ctx, int system, int n, int m,
                          const ContributionSpec& spec) {
    const int nq = ctx.params.n_modes(); // system register only
    std::vector<int> occ(nq, 0);
    occ[SiamParams::mode(0, system == 0 ? 1 : 0)] = 1;
    for (int b = 0; b < ctx.params.n_bath; ++b)
        if (b % 2 == 0) {
            occ[SiamParams::mode(b + 1, 0)] = 1;
            occ[SiamParams::mode(b + 1, 1)] = 1;
        }
    long bits = 0;
    for (int j = 0; j < nq; ++j)
        if (occ[j])
            bits |= 1L << j;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(1L << nq);
    psi(bits) = 1.0;

    // shift the qubit-register strings down by one (drop the probe)
    auto shift = [](const PauliString& s) {
        PauliString out;
        for (const auto& t : s)
            out.push_back({t.qubit - 1, t.axis});
        return out;
    };
    auto step_matrix = [&](int l) {
        std::vector<GateSpec> gates;
        for (const auto& g : ctx.steps[l].flatten()) {
            GateSpec moved = g;
            if (g.kind == GateKind::rotation || g.kind == GateKind::hadamard)
                moved.qubit -= 1;
            if (g.kind == GateKind::ms) {
                moved.ms_first -= 1;
                moved.ms_last -= 1;
            }
            gates.push_back(moved);
        }
        return dense_program(gates, nq);
    };
    Eigen::MatrixXcd u0m = Eigen::MatrixXcd::Identity(psi.size(), psi.size());
    for (int l = 0; l < m; ++l)
        u0m = step_matrix(l) * u0m;
    Eigen::MatrixXcd umn = Eigen::MatrixXcd::Identity(psi.size(), psi.size());
    for (int l = m; l < n; ++l)
        umn = step_matrix(l) * umn;
    Eigen::MatrixXcd s1 = dense_pauli_string(shift(spec.sigma_first), nq);
    Eigen::MatrixXcd s2 = dense_pauli_string(shift(spec.sigma_second), nq);
    Eigen::VectorXcd branch0 = umn * (s1 * (u0m * psi));
    Eigen::VectorXcd branch1 = s2 * (umn * (u0m * psi));
    return branch1.dot(branch0);
}

} // namespace qdmft::testing
