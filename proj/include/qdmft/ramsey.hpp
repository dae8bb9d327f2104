#pragma once

#include <vector>

#include "qdmft/compiler.hpp"
#include "qdmft/siam.hpp"
#include "qdmft/statevector.hpp"

namespace qdmft {

struct MeasurementMode {
    bool sampled = false;
    long shots = 0; // per expectation value, sampled mode only
};

// One summand of a Green-function component: controlled sigma_first is
// inserted at t' (control value 0), sigma_second at t (control value 1).
// The component value is sum_i weight_i * F_i, conjugating F first when
// flagged.
struct ContributionSpec {
    PauliString sigma_first;
    PauliString sigma_second;
    cplx weight;
    bool conjugate = false;
    Component component = Component::greater;
    int spin = 0;
};

// The four contributions for a (component, spin) channel.
std::vector<ContributionSpec> green_contributions(Component component, int spin);

// Measurements per time step for target standard error eps.
long shot_budget(double eps, bool spin_symmetric);

// Circuit-level impurity solver state: compiled (noiseless) step programs
// plus run parameters. Programs are recompiled whenever hybridizations
// change.
struct RamseyContext {
    SiamParams params;
    TimeGrid grid;
    NoiseModel noise;
    MeasurementMode mode;
    std::vector<TrotterStepProgram> steps;

    int n_qubits() const { return 1 + params.n_modes(); }
};

RamseyContext make_ramsey_context(const SiamParams& params, const TimeGrid& grid,
                                  const NoiseModel& noise, const MeasurementMode& mode);

// Single circuit execution with fresh noise draws; returns F(t_n, t_m).
cplx ramsey_contribution(const RamseyContext& ctx, int system, int n, int m,
                         const ContributionSpec& spec, RngStream& rng);

// Fill grid rows [row_lo..row_hi] (columns m <= n, mirror by symmetry) of the
// lattice-averaged Green functions; every grid point, contribution and
// realization runs as an independent circuit with a seed derived from
// (seed, epoch, point ids).
void measure_impurity_green(const RamseyContext& ctx, int realizations, uint64_t seed,
                            uint64_t epoch, int row_lo, int row_hi, int workers, GreenSet& out);

// <n_dn n_up>(t_n) from fresh noisy evolutions, averaged over both initial
// systems and realizations.
Eigen::VectorXd measure_double_occupancy(const RamseyContext& ctx, int realizations,
                                         uint64_t seed, uint64_t epoch, int workers);

} // namespace qdmft
