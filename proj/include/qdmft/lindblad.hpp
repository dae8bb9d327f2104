#pragma once

#include <Eigen/Dense>

#include "qdmft/siam.hpp"
#include "qdmft/time_grid.hpp"

namespace qdmft {

struct LindbladBathParams {
    double gamma_minus = 0.0; // ejection
    double gamma_plus = 0.0;  // injection

    double total() const { return gamma_minus + gamma_plus; }
    double steady_occupation() const {
        return gamma_plus / (gamma_minus + gamma_plus);
    }
};

// Reduced two-time functions of an isolated bath site exchanging particles
// with a reservoir: h_lesser(n, m) = <c^dag(t_m) c(t_n)>, h_greater(n, m) =
// <c(t_n) c^dag(t_m)>. Both equal -i g^< and +i g^> for the site.
struct DissipativeBathGreen {
    Eigen::MatrixXcd h_lesser;
    Eigen::MatrixXcd h_greater;
};

DissipativeBathGreen bath_green_dissipative(const LindbladBathParams& bath,
                                            bool initially_occupied, const TimeGrid& grid);

// Impurity Green functions of the U=0 SIAM with every bath site damped at
// the given rates, from the quadratic equations of motion plus quantum
// regression (lattice-averaged over the alpha/beta initial states).
GreenSet solve_noninteracting_lindblad(const SiamParams& params, const LindbladBathParams& bath,
                                       const TimeGrid& grid);

// <n_dn n_up>(t) for the same model; spin sectors stay uncorrelated at U=0.
Eigen::VectorXd lindblad_double_occupancy(const SiamParams& params,
                                          const LindbladBathParams& bath, const TimeGrid& grid);

struct FitResult {
    HybridizationSet v;
    double residual = 0.0;
    int sweeps = 0;
};

// Block-coordinate least squares for target(n, m) = -i Lambda^<(t_n, t_m)
// against the damped-bath model
//   sum_p [ V_p(n) h_occ(n,m) V_p(m)^* + V_p(n)^* h_emp(n,m) V_p(m) ],
// weighted by exp(-2 mu_fit |t_n - t_m|). Sweeps over time columns with a
// backtracking step so the residual never increases.
FitResult fit_hybridizations_noisy(const Eigen::MatrixXcd& target, const Eigen::MatrixXcd& h_occ,
                                   const Eigen::MatrixXcd& h_emp, double mu_fit,
                                   const TimeGrid& grid, const HybridizationSet& v_init);

// Single-column variant used by the time-slicing loop: solves column `slice`
// against rows m < slice with earlier columns fixed.
Eigen::VectorXcd fit_slice_column(const Eigen::MatrixXcd& target, const Eigen::MatrixXcd& h_occ,
                                  const Eigen::MatrixXcd& h_emp, double mu_fit,
                                  const TimeGrid& grid, const HybridizationSet& v, int slice);

struct DecayFit {
    double eta = 0.0;
    double r_squared = 0.0;
    long points = 0;
};

// Least-squares slope of -log|Im noisy / Im ideal| against |t - t'| over
// off-diagonal entries where |Im ideal| clears the floor.
DecayFit estimate_decay_rate(const Eigen::MatrixXcd& noisy_lesser,
                             const Eigen::MatrixXcd& ideal_lesser, const TimeGrid& grid,
                             double floor_frac = 1e-3);

} // namespace qdmft
