#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qdmft/time_grid.hpp"

namespace qdmft {

// Anderson impurity with n_bath non-interacting bath sites; mu = 0 and all
// bath energies vanish for t > 0, so the Hamiltonian is fixed by u and the
// hybridizations alone. Mode order: impurity down, impurity up, then
// (down, up) per bath site.
struct SiamParams {
    double u = 0.0;
    int n_bath = 0;
    HybridizationSet hyb;

    int n_modes() const { return 2 * (n_bath + 1); }
    long fock_dim() const { return 1L << n_modes(); }
    static int mode(int site, int spin) { return 2 * site + spin; } // site 0 = impurity
};

Eigen::MatrixXcd build_siam_hamiltonian(const SiamParams& params, int t_index);

// One unitary per Trotter interval, exp(-i dt H(t_n)).
struct StepPropagators {
    std::vector<Eigen::MatrixXcd> u;
};

StepPropagators exact_step_propagators(const SiamParams& params, const TimeGrid& grid);

// system 0 = alpha (impurity up), 1 = beta (impurity down); even-index bath
// sites start doubly occupied, odd-index ones empty.
Eigen::VectorXcd initial_state(const SiamParams& params, int system);

Eigen::VectorXcd propagate_exact(Eigen::VectorXcd state, int n_from, int n_to,
                                 const StepPropagators& props);

// Lattice-averaged G_loc = (G_alpha + G_beta)/2, filled on the full grid.
GreenSet greens_ed(const SiamParams& params, const TimeGrid& grid);

Eigen::VectorXd double_occupancy_ed(const SiamParams& params, const TimeGrid& grid);

} // namespace qdmft
