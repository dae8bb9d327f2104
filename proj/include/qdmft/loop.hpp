#pragma once

#include <memory>
#include <vector>

#include "qdmft/ramsey.hpp"
#include "qdmft/siam.hpp"
#include "qdmft/time_grid.hpp"

namespace qdmft {

enum class SolverMode { ed, circuit, lindblad };
enum class Correction { none, dissipative_fit };

struct DmftConfig {
    TimeGrid grid;
    double u = 2.0;
    QuenchProfile quench;
    int bath_pairs = 1; // L; bath count is 2L
    NoiseModel noise;
    int realizations = 128;
    SolverMode solver = SolverMode::ed;
    MeasurementMode meas;
    double delta_conv = 1e-5;
    int max_iters = 100;
    Correction correction = Correction::none;
    double gamma = 0.0;  // Lindblad exchange rate, lindblad solver only
    double mu_fit = 0.0; // weight exponent in the dissipative fit
    double mixing = 0.0;
    uint64_t seed = 1;
    int workers = 1;
};

struct ConvergenceReport {
    struct Row {
        int slice; // highest grid row updated in this phase
        int iter;
        double metric;
    };
    std::vector<Row> rows;
    bool converged = false;
    int iterations = 0;
};

struct DmftResult {
    HybridizationSet v;
    GreenSet g;
    GreenSet lambda;
    Eigen::VectorXd docc;
    ConvergenceReport report;
};

// Bethe-lattice map Lambda(n, m) = v(t_n) G(n, m) v(t_m).
TwoTimeFunction bethe_map(const TwoTimeFunction& g, const QuenchProfile& quench,
                          const TimeGrid& grid);
GreenSet bethe_map(const GreenSet& g, const QuenchProfile& quench, const TimeGrid& grid);

// Extract couplings from grid points 1..L of -i Lambda^< (row/column 0
// vanishes with the quench). Small negative eigenvalues of noisy input are
// clipped to zero before factorizing; the factor is taken with nonnegative
// real diagonal.
HybridizationSet cholesky_hybridizations(const TwoTimeFunction& lambda_lesser, int pairs,
                                         const TimeGrid& grid);

// Minimum-norm least-squares update of column M against rows m < M of
// -i Lambda^<; earlier columns are untouched. Returns the squared residual
// over the updated row.
double time_slice_extend(HybridizationSet& v, const TwoTimeFunction& lambda_lesser, int slice);

// Atomic-limit Green function of the interacting impurity alone.
GreenSet initial_green_guess(const TimeGrid& grid, double u);

struct ImpuritySolver {
    virtual ~ImpuritySolver() = default;
    // Recompute rows row_lo..row_hi (columns m <= n plus mirrors) of g for
    // the given couplings; epoch feeds the per-measurement noise seeds.
    virtual void solve_rows(const HybridizationSet& v, int row_lo, int row_hi, uint64_t epoch,
                            GreenSet& g) = 0;
    virtual Eigen::VectorXd double_occupancy(const HybridizationSet& v, uint64_t epoch) = 0;
};

std::unique_ptr<ImpuritySolver> make_impurity_solver(const DmftConfig& config);

DmftResult run_self_consistency(const DmftConfig& config, ImpuritySolver& solver);
DmftResult run_self_consistency(const DmftConfig& config);

} // namespace qdmft
