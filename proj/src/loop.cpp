#include "qdmft/loop.hpp"

#include <algorithm>
#include <stdexcept>

#include "qdmft/lindblad.hpp"

namespace qdmft {

namespace {

const cplx I(0.0, 1.0);

void bethe_rows(const GreenSet& g, const QuenchProfile& quench, const TimeGrid& grid,
                int row_lo, int row_hi, GreenSet& lambda) {
    for (int s = 0; s < 2; ++s) {
        for (int n = row_lo; n <= row_hi; ++n) {
            double vn = quench_v(grid.time(n), quench);
            for (int m = 0; m <= n; ++m) {
                double vm = quench_v(grid.time(m), quench);
                lambda.lesser[s].values(n, m) = vn * g.lesser[s].values(n, m) * vm;
                lambda.greater[s].values(n, m) = vn * g.greater[s].values(n, m) * vm;
                if (m != n) {
                    lambda.lesser[s].values(m, n) = vm * g.lesser[s].values(m, n) * vn;
                    lambda.greater[s].values(m, n) = vm * g.greater[s].values(m, n) * vn;
                }
            }
        }
    }
}

SiamParams solver_params(const DmftConfig& config, const HybridizationSet& v) {
    SiamParams p;
    p.u = config.u;
    p.n_bath = 2 * config.bath_pairs;
    p.hyb = v;
    return p;
}

class EdSolver : public ImpuritySolver {
public:
    explicit EdSolver(const DmftConfig& config) : config_(config) {}

    void solve_rows(const HybridizationSet& v, int row_lo, int row_hi, uint64_t,
                    GreenSet& g) override {
        TimeGrid sub{config_.grid.dt, row_hi};
        GreenSet full = greens_ed(solver_params(config_, v), sub);
        for (int s = 0; s < 2; ++s)
            for (int n = row_lo; n <= row_hi; ++n)
                for (int m = 0; m <= n; ++m) {
                    g.lesser[s].values(n, m) = full.lesser[s].values(n, m);
                    g.greater[s].values(n, m) = full.greater[s].values(n, m);
                    if (m != n) {
                        g.lesser[s].values(m, n) = full.lesser[s].values(m, n);
                        g.greater[s].values(m, n) = full.greater[s].values(m, n);
                    }
                }
    }

    Eigen::VectorXd double_occupancy(const HybridizationSet& v, uint64_t) override {
        return double_occupancy_ed(solver_params(config_, v), config_.grid);
    }

private:
    DmftConfig config_;
};

class CircuitSolver : public ImpuritySolver {
public:
    explicit CircuitSolver(const DmftConfig& config) : config_(config) {}

    void solve_rows(const HybridizationSet& v, int row_lo, int row_hi, uint64_t epoch,
                    GreenSet& g) override {
        RamseyContext ctx = make_ramsey_context(solver_params(config_, v), config_.grid,
                                                config_.noise, config_.meas);
        measure_impurity_green(ctx, config_.realizations, config_.seed, epoch, row_lo, row_hi,
                               config_.workers, g);
    }

    Eigen::VectorXd double_occupancy(const HybridizationSet& v, uint64_t epoch) override {
        RamseyContext ctx = make_ramsey_context(solver_params(config_, v), config_.grid,
                                                config_.noise, config_.meas);
        return measure_double_occupancy(ctx, config_.realizations, config_.seed, epoch,
                                        config_.workers);
    }

private:
    DmftConfig config_;
};

class LindbladSolver : public ImpuritySolver {
public:
    explicit LindbladSolver(const DmftConfig& config) : config_(config) {
        if (config.u != 0.0)
            throw std::invalid_argument("lindblad solver requires u = 0");
        bath_.gamma_minus = config.gamma;
        bath_.gamma_plus = config.gamma;
    }

    void solve_rows(const HybridizationSet& v, int row_lo, int row_hi, uint64_t,
                    GreenSet& g) override {
        TimeGrid sub{config_.grid.dt, row_hi};
        GreenSet full = solve_noninteracting_lindblad(solver_params(config_, v), bath_, sub);
        for (int s = 0; s < 2; ++s)
            for (int n = row_lo; n <= row_hi; ++n)
                for (int m = 0; m <= n; ++m) {
                    g.lesser[s].values(n, m) = full.lesser[s].values(n, m);
                    g.greater[s].values(n, m) = full.greater[s].values(n, m);
                    if (m != n) {
                        g.lesser[s].values(m, n) = full.lesser[s].values(m, n);
                        g.greater[s].values(m, n) = full.greater[s].values(m, n);
                    }
                }
    }

    Eigen::VectorXd double_occupancy(const HybridizationSet& v, uint64_t) override {
        return lindblad_double_occupancy(solver_params(config_, v), bath_, config_.grid);
    }

private:
    DmftConfig config_;
    LindbladBathParams bath_;
};

} // namespace

TwoTimeFunction bethe_map(const TwoTimeFunction& g, const QuenchProfile& quench,
                          const TimeGrid& grid) {
    TwoTimeFunction lambda = g;
    const int np = static_cast<int>(g.values.rows());
    for (int n = 0; n < np; ++n) {
        double vn = quench_v(grid.time(n), quench);
        for (int m = 0; m < np; ++m)
            lambda.values(n, m) = vn * g.values(n, m) * quench_v(grid.time(m), quench);
    }
    return lambda;
}

GreenSet bethe_map(const GreenSet& g, const QuenchProfile& quench, const TimeGrid& grid) {
    GreenSet lambda;
    for (int s = 0; s < 2; ++s) {
        lambda.lesser[s] = bethe_map(g.lesser[s], quench, grid);
        lambda.greater[s] = bethe_map(g.greater[s], quench, grid);
    }
    return lambda;
}

HybridizationSet cholesky_hybridizations(const TwoTimeFunction& lambda_lesser, int pairs,
                                         const TimeGrid& grid) {
    const int np = static_cast<int>(lambda_lesser.values.rows());
    const int p_max = std::min(pairs, np - 1); // grid points 1..p_max
    HybridizationSet v = HybridizationSet::zero(pairs, np);
    if (p_max <= 0)
        return v;

    Eigen::MatrixXcd m = -I * lambda_lesser.values.block(1, 1, p_max, p_max);
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-6 * scale)
        throw std::runtime_error("cholesky_hybridizations: input is not Hermitian");
    m = 0.5 * (m + m.adjoint().eval());

    // project onto the PSD cone
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    m = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();

    Eigen::MatrixXcd lo = Eigen::MatrixXcd::Zero(p_max, p_max);
    const double floor = 1e-14 * std::max(1.0, m.diagonal().real().maxCoeff());
    for (int j = 0; j < p_max; ++j) {
        double d = m(j, j).real() - lo.row(j).head(j).squaredNorm();
        if (d <= floor) {
            continue; // rank-deficient column, couplings stay zero
        }
        lo(j, j) = std::sqrt(d);
        for (int i = j + 1; i < p_max; ++i) {
            cplx off = m(i, j);
            for (int k = 0; k < j; ++k)
                off -= lo(i, k) * std::conj(lo(j, k));
            lo(i, j) = off / lo(j, j).real();
        }
    }
    (void)grid;
    for (int p = 0; p < std::min(pairs, p_max); ++p)
        for (int n = 1; n <= p_max; ++n)
            v.v(p, n) = lo(n - 1, p);
    return v;
}

double time_slice_extend(HybridizationSet& v, const TwoTimeFunction& lambda_lesser, int slice) {
    const int pairs = v.pairs();
    if (slice <= pairs)
        throw std::invalid_argument("time_slice_extend: slice must exceed the joint block");
    // rows m = 1..slice-1 of -i Lambda^<: target x_m against
    // sum_p V_p(t_slice) conj(V_p(t_m))
    const int rows = slice - 1;
    Eigen::MatrixXcd a(rows, pairs);
    Eigen::VectorXcd b(rows);
    for (int m = 1; m < slice; ++m) {
        for (int p = 0; p < pairs; ++p)
            a(m - 1, p) = std::conj(v.v(p, m));
        b(m - 1) = -I * lambda_lesser.values(slice, m);
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(a);
    Eigen::VectorXcd x = cod.solve(b);
    v.v.col(slice) = x;
    double res = (a * x - b).squaredNorm();
    // diagonal mismatch reported as part of the residual
    cplx diag = -I * lambda_lesser.values(slice, slice);
    res += std::norm(diag - cplx(x.squaredNorm(), 0.0));
    return res;
}

GreenSet initial_green_guess(const TimeGrid& grid, double u) {
    SiamParams atomic;
    atomic.u = u;
    atomic.n_bath = 0;
    atomic.hyb = HybridizationSet::zero(0, grid.n_points());
    return greens_ed(atomic, grid);
}

std::unique_ptr<ImpuritySolver> make_impurity_solver(const DmftConfig& config) {
    switch (config.solver) {
    case SolverMode::ed:
        return std::make_unique<EdSolver>(config);
    case SolverMode::circuit:
        return std::make_unique<CircuitSolver>(config);
    case SolverMode::lindblad:
        return std::make_unique<LindbladSolver>(config);
    }
    throw std::logic_error("make_impurity_solver: unknown mode");
}

DmftResult run_self_consistency(const DmftConfig& config, ImpuritySolver& solver) {
    const int np = config.grid.n_points();
    const int pairs = config.bath_pairs;
    const int joint = std::min(pairs, config.grid.n_steps);

    DmftResult res;
    res.g = initial_green_guess(config.grid, config.u);
    res.lambda = bethe_map(res.g, config.quench, config.grid);
    res.v = HybridizationSet::zero(pairs, np);

    Eigen::MatrixXcd h_occ, h_emp;
    const bool fitting = config.correction == Correction::dissipative_fit;
    if (fitting) {
        LindbladBathParams bath{config.gamma, config.gamma};
        h_occ = bath_green_dissipative(bath, true, config.grid).h_lesser;
        h_emp = bath_green_dissipative(bath, false, config.grid).h_lesser;
    }

    uint64_t epoch = 0;
    bool all_converged = true;

    // joint block over grid points 1..joint
    bool phase_ok = false;
    for (int iter = 1; iter <= config.max_iters; ++iter) {
        HybridizationSet v_new;
        if (!fitting) {
            v_new = cholesky_hybridizations(res.lambda.lesser[0], pairs, config.grid);
        } else {
            TimeGrid sub{config.grid.dt, joint};
            HybridizationSet v0 = HybridizationSet::zero(pairs, joint + 1);
            v0.v = res.v.v.leftCols(joint + 1);
            if (v0.v.cwiseAbs().maxCoeff() == 0.0) {
                // all-zero couplings are a stationary point of the bilinear
                // fit; seed it from the plain extraction instead
                HybridizationSet seed =
                    cholesky_hybridizations(res.lambda.lesser[0], pairs, config.grid);
                v0.v = seed.v.leftCols(joint + 1);
            }
            FitResult fit = fit_hybridizations_noisy(
                (-I * res.lambda.lesser[0].values.topLeftCorner(joint + 1, joint + 1)).eval(),
                h_occ.topLeftCorner(joint + 1, joint + 1),
                h_emp.topLeftCorner(joint + 1, joint + 1), config.mu_fit, sub, v0);
            v_new = HybridizationSet::zero(pairs, np);
            v_new.v.leftCols(joint + 1) = fit.v.v;
        }
        double metric = (v_new.v.leftCols(joint + 1) - res.v.v.leftCols(joint + 1))
                            .cwiseAbs()
                            .maxCoeff();
        if (config.mixing > 0.0 && iter > 1)
            v_new.v = (1.0 - config.mixing) * v_new.v + config.mixing * res.v.v;
        res.v.v.leftCols(joint + 1) = v_new.v.leftCols(joint + 1);
        res.report.rows.push_back({joint, iter, metric});
        ++res.report.iterations;
        if (metric < config.delta_conv) {
            phase_ok = true;
            break;
        }
        solver.solve_rows(res.v, 0, joint, epoch++, res.g);
        bethe_rows(res.g, config.quench, config.grid, 0, joint, res.lambda);
    }
    all_converged = all_converged && phase_ok;

    // time slicing: one new grid row at a time
    for (int slice = joint + 1; slice <= config.grid.n_steps; ++slice) {
        Eigen::VectorXcd x_prev = res.v.v.col(slice);
        bool slice_ok = false;
        for (int iter = 1; iter <= config.max_iters; ++iter) {
            solver.solve_rows(res.v, slice, slice, epoch++, res.g);
            bethe_rows(res.g, config.quench, config.grid, slice, slice, res.lambda);
            Eigen::VectorXcd x;
            if (!fitting) {
                time_slice_extend(res.v, res.lambda.lesser[0], slice);
                x = res.v.v.col(slice);
            } else {
                x = fit_slice_column((-I * res.lambda.lesser[0].values).eval(), h_occ, h_emp,
                                     config.mu_fit, config.grid, res.v, slice);
            }
            double metric = (x - x_prev).cwiseAbs().maxCoeff();
            if (config.mixing > 0.0 && iter > 1)
                x = (1.0 - config.mixing) * x + config.mixing * x_prev;
            res.v.v.col(slice) = x;
            x_prev = x;
            res.report.rows.push_back({slice, iter, metric});
            ++res.report.iterations;
            if (metric < config.delta_conv) {
                slice_ok = true;
                break;
            }
        }
        all_converged = all_converged && slice_ok;
    }

    res.report.converged = all_converged;
    res.lambda = bethe_map(res.g, config.quench, config.grid);
    res.docc = solver.double_occupancy(res.v, epoch++);
    return res;
}

DmftResult run_self_consistency(const DmftConfig& config) {
    auto solver = make_impurity_solver(config);
    return run_self_consistency(config, *solver);
}

} // namespace qdmft
