#include "qdmft/siam.hpp"

#include <stdexcept>

#include "qdmft/jw.hpp"

namespace qdmft {

Eigen::MatrixXcd build_siam_hamiltonian(const SiamParams& params, int t_index) {
    const int nm = params.n_modes();
    if (params.n_bath > 0 && params.hyb.pairs() != (params.n_bath + 1) / 2)
        throw std::invalid_argument("build_siam_hamiltonian: bath count does not match hybridizations");
    const long dim = params.fock_dim();
    auto cdag = jw_creation_ops(nm);

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);

    // U (n_up - 1/2)(n_dn - 1/2), diagonal in the occupation basis
    for (long s = 0; s < dim; ++s) {
        double ndn = static_cast<double>(s & 1L);
        double nup = static_cast<double>((s >> 1) & 1L);
        h(s, s) += params.u * (nup - 0.5) * (ndn - 0.5);
    }

    for (int b = 0; b < params.n_bath; ++b) {
        cplx v = params.hyb.bath_coupling(b, t_index);
        if (v == cplx(0.0, 0.0))
            continue;
        for (int spin = 0; spin < 2; ++spin) {
            const auto& cd_imp = cdag[SiamParams::mode(0, spin)];
            const auto& cd_bath = cdag[SiamParams::mode(b + 1, spin)];
            Eigen::MatrixXcd hop = v * cd_imp * cd_bath.adjoint();
            h += hop + hop.adjoint();
        }
    }
    return h;
}

StepPropagators exact_step_propagators(const SiamParams& params, const TimeGrid& grid) {
    StepPropagators props;
    props.u.reserve(grid.n_steps);
    for (int n = 0; n < grid.n_steps; ++n) {
        Eigen::MatrixXcd h = build_siam_hamiltonian(params, n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        Eigen::VectorXcd phases = (-cplx(0.0, 1.0) * grid.dt * es.eigenvalues().cast<cplx>()).array().exp();
        props.u.push_back(es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint());
    }
    return props;
}

Eigen::VectorXcd initial_state(const SiamParams& params, int system) {
    long idx = 0;
    // impurity: alpha carries the up electron, beta the down one
    idx |= (system == 0) ? (1L << SiamParams::mode(0, 1)) : (1L << SiamParams::mode(0, 0));
    for (int b = 0; b < params.n_bath; ++b) {
        if (b % 2 == 0) {
            idx |= 1L << SiamParams::mode(b + 1, 0);
            idx |= 1L << SiamParams::mode(b + 1, 1);
        }
    }
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(params.fock_dim());
    psi(idx) = 1.0;
    return psi;
}

Eigen::VectorXcd propagate_exact(Eigen::VectorXcd state, int n_from, int n_to,
                                 const StepPropagators& props) {
    if (n_from > n_to)
        throw std::invalid_argument("propagate_exact: n_from > n_to");
    if (n_to > static_cast<int>(props.u.size()))
        throw std::out_of_range("propagate_exact: step index out of range");
    for (int n = n_from; n < n_to; ++n)
        state = props.u[n] * state;
    return state;
}

namespace {

// Annihilator acting in place: (c_j psi).
Eigen::VectorXcd apply_annihilation(const Eigen::VectorXcd& psi, int j) {
    const long dim = psi.size();
    const long bit = 1L << j;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
    for (long s = 0; s < dim; ++s) {
        if (!(s & bit))
            continue;
        int parity = 0;
        for (int k = 0; k < j; ++k)
            parity ^= static_cast<int>((s >> k) & 1L);
        out(s & ~bit) = parity ? -psi(s) : psi(s);
    }
    return out;
}

Eigen::VectorXcd apply_creation(const Eigen::VectorXcd& psi, int j) {
    const long dim = psi.size();
    const long bit = 1L << j;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
    for (long s = 0; s < dim; ++s) {
        if (s & bit)
            continue;
        int parity = 0;
        for (int k = 0; k < j; ++k)
            parity ^= static_cast<int>((s >> k) & 1L);
        out(s | bit) = parity ? -psi(s) : psi(s);
    }
    return out;
}

} // namespace

GreenSet greens_ed(const SiamParams& params, const TimeGrid& grid) {
    const int np = grid.n_points();
    const cplx I(0.0, 1.0);
    StepPropagators props = exact_step_propagators(params, grid);

    GreenSet g;
    g.resize(np);

    for (int system = 0; system < 2; ++system) {
        std::vector<Eigen::VectorXcd> psi(np);
        psi[0] = initial_state(params, system);
        for (int n = 1; n < np; ++n)
            psi[n] = props.u[n - 1] * psi[n - 1];

        for (int spin = 0; spin < 2; ++spin) {
            const int j = SiamParams::mode(0, spin);
            for (int m = 0; m < np; ++m) {
                // greater: -i <psi(t_n)| c U(t_n,t_m) c^dag |psi(t_m)>
                Eigen::VectorXcd phi = apply_creation(psi[m], j);
                // lesser: i <U(t_n,t_m) c psi(t_m) | c psi(t_n)>
                Eigen::VectorXcd chi = apply_annihilation(psi[m], j);
                for (int n = m; n < np; ++n) {
                    cplx greater = -I * psi[n].dot(apply_annihilation(phi, j));
                    cplx lesser = I * chi.dot(apply_annihilation(psi[n], j));
                    g.greater[spin].values(n, m) += 0.5 * greater;
                    g.lesser[spin].values(n, m) += 0.5 * lesser;
                    if (n < np - 1) {
                        phi = props.u[n] * phi;
                        chi = props.u[n] * chi;
                    }
                }
            }
        }
    }
    for (int spin = 0; spin < 2; ++spin) {
        for (int m = 0; m < np; ++m)
            for (int n = m + 1; n < np; ++n) {
                g.greater[spin].values(m, n) = -std::conj(g.greater[spin].values(n, m));
                g.lesser[spin].values(m, n) = -std::conj(g.lesser[spin].values(n, m));
            }
    }
    return g;
}

Eigen::VectorXd double_occupancy_ed(const SiamParams& params, const TimeGrid& grid) {
    const int np = grid.n_points();
    StepPropagators props = exact_step_propagators(params, grid);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(np);
    for (int system = 0; system < 2; ++system) {
        Eigen::VectorXcd psi = initial_state(params, system);
        for (int n = 0; n < np; ++n) {
            if (n > 0)
                psi = props.u[n - 1] * psi;
            double val = 0.0;
            for (long s = 0; s < psi.size(); ++s)
                if ((s & 1L) && (s & 2L))
                    val += std::norm(psi(s));
            d(n) += 0.5 * val;
        }
    }
    return d;
}

} // namespace qdmft
