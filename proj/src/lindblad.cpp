#include "qdmft/lindblad.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace qdmft {

namespace {

const cplx I(0.0, 1.0);

// Single-particle Hamiltonian of one spin sector: mode 0 is the impurity,
// modes 1..n_bath the bath sites, all levels at zero energy.
Eigen::MatrixXcd sector_hamiltonian(const SiamParams& params, int t_index) {
    const int dim = params.n_bath + 1;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (int b = 0; b < params.n_bath; ++b) {
        cplx v = params.hyb.bath_coupling(b, t_index);
        h(0, b + 1) = v;
        h(b + 1, 0) = std::conj(v);
    }
    return h;
}

Eigen::VectorXd sector_damping(const SiamParams& params, const LindbladBathParams& bath) {
    Eigen::VectorXd g = Eigen::VectorXd::Constant(params.n_bath + 1, bath.total());
    g(0) = 0.0;
    return g;
}

Eigen::VectorXd initial_sector_occupation(const SiamParams& params, int system, int spin) {
    Eigen::VectorXd n = Eigen::VectorXd::Zero(params.n_bath + 1);
    int occupied_spin = system == 0 ? 1 : 0;
    if (spin == occupied_spin)
        n(0) = 1.0;
    for (int b = 0; b < params.n_bath; ++b)
        if (b % 2 == 0)
            n(b + 1) = 1.0;
    return n;
}

// One exact step of dC/dt = B C + C B^dag + Q via the eigenbasis of B.
Eigen::MatrixXcd lyapunov_step(const Eigen::MatrixXcd& b_mat, const Eigen::MatrixXcd& q,
                               const Eigen::MatrixXcd& c0, double dt) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(b_mat);
    const Eigen::MatrixXcd& s = es.eigenvectors();
    Eigen::MatrixXcd s_inv = s.inverse();
    Eigen::VectorXcd lam = es.eigenvalues();
    const int dim = static_cast<int>(lam.size());
    Eigen::MatrixXcd ct = s_inv * c0 * s_inv.adjoint();
    Eigen::MatrixXcd qt = s_inv * q * s_inv.adjoint();
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            cplx mu = lam(i) + std::conj(lam(j));
            cplx grow = std::exp(mu * dt);
            cplx phi = std::abs(mu) < 1e-12 ? cplx(dt, 0.0) : (grow - 1.0) / mu;
            ct(i, j) = grow * ct(i, j) + qt(i, j) * phi;
        }
    return s * ct * s.adjoint();
}

// Equal-time correlation matrices C(t_n)_{ij} = <c_i^dag c_j> for one
// system and spin, plus the per-step propagators exp((-i h - Gamma) dt)
// used by the regression formula for the two-time functions.
struct SectorEvolution {
    std::vector<Eigen::MatrixXcd> c;     // n_points matrices
    std::vector<Eigen::MatrixXcd> estep; // n_steps matrices
};

SectorEvolution evolve_sector(const SiamParams& params, const LindbladBathParams& bath,
                              const TimeGrid& grid, int system, int spin) {
    const int dim = params.n_bath + 1;
    Eigen::VectorXd damp = sector_damping(params, bath);
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(dim, dim);
    for (int j = 1; j < dim; ++j)
        q(j, j) = 2.0 * bath.gamma_plus;

    SectorEvolution ev;
    ev.c.reserve(grid.n_points());
    ev.estep.reserve(grid.n_steps);
    ev.c.push_back(initial_sector_occupation(params, system, spin).cast<cplx>().asDiagonal());
    for (int n = 0; n < grid.n_steps; ++n) {
        Eigen::MatrixXcd h = sector_hamiltonian(params, n);
        Eigen::MatrixXcd b_mat = I * h.transpose();
        Eigen::MatrixXcd a_mat = -I * h;
        for (int j = 0; j < dim; ++j) {
            b_mat(j, j) -= damp(j);
            a_mat(j, j) -= damp(j);
        }
        ev.c.push_back(lyapunov_step(b_mat, q, ev.c.back(), grid.dt));
        ev.estep.push_back((a_mat * grid.dt).exp());
    }
    return ev;
}

} // namespace

DissipativeBathGreen bath_green_dissipative(const LindbladBathParams& bath,
                                            bool initially_occupied, const TimeGrid& grid) {
    const int np = grid.n_points();
    const double g = bath.total();
    const double n_inf = g > 0.0 ? bath.steady_occupation() : (initially_occupied ? 1.0 : 0.0);
    const double n0 = initially_occupied ? 1.0 : 0.0;
    DissipativeBathGreen out;
    out.h_lesser.resize(np, np);
    out.h_greater.resize(np, np);
    for (int n = 0; n < np; ++n)
        for (int m = 0; m < np; ++m) {
            double t_early = grid.time(std::min(n, m));
            double gap = std::abs(grid.time(n) - grid.time(m));
            double occ = n_inf + (n0 - n_inf) * std::exp(-2.0 * g * t_early);
            double env = std::exp(-g * gap);
            out.h_lesser(n, m) = occ * env;
            out.h_greater(n, m) = (1.0 - occ) * env;
        }
    return out;
}

GreenSet solve_noninteracting_lindblad(const SiamParams& params, const LindbladBathParams& bath,
                                       const TimeGrid& grid) {
    if (params.u != 0.0)
        throw std::invalid_argument("solve_noninteracting_lindblad: requires u = 0");
    const int np = grid.n_points();
    GreenSet out;
    out.resize(np);
    for (int s = 0; s < 2; ++s) {
        out.lesser[s].values.setZero();
        out.greater[s].values.setZero();
    }

    for (int system = 0; system < 2; ++system)
        for (int spin = 0; spin < 2; ++spin) {
            SectorEvolution ev = evolve_sector(params, bath, grid, system, spin);
            for (int m = 0; m < np; ++m) {
                Eigen::VectorXcd v = ev.c[m].row(0).transpose(); // <c_0^dag c_j>
                Eigen::VectorXcd w = -v;
                w(0) += 1.0;
                for (int n = m; n < np; ++n) {
                    out.lesser[spin].values(n, m) += 0.5 * I * v(0);
                    out.greater[spin].values(n, m) += -0.5 * I * w(0);
                    if (n < np - 1) {
                        v = ev.estep[n] * v;
                        w = ev.estep[n] * w;
                    }
                }
            }
        }
    for (int s = 0; s < 2; ++s)
        for (int n = 0; n < np; ++n)
            for (int m = n + 1; m < np; ++m) {
                out.lesser[s].values(n, m) = -std::conj(out.lesser[s].values(m, n));
                out.greater[s].values(n, m) = -std::conj(out.greater[s].values(m, n));
            }
    return out;
}

Eigen::VectorXd lindblad_double_occupancy(const SiamParams& params,
                                          const LindbladBathParams& bath, const TimeGrid& grid) {
    if (params.u != 0.0)
        throw std::invalid_argument("lindblad_double_occupancy: requires u = 0");
    const int np = grid.n_points();
    Eigen::VectorXd d = Eigen::VectorXd::Zero(np);
    for (int system = 0; system < 2; ++system) {
        SectorEvolution dn = evolve_sector(params, bath, grid, system, 0);
        SectorEvolution up = evolve_sector(params, bath, grid, system, 1);
        for (int n = 0; n < np; ++n)
            d(n) += 0.5 * dn.c[n](0, 0).real() * up.c[n](0, 0).real();
    }
    return d;
}

namespace {

// Model value at (n, m) for couplings v.
cplx fit_model_entry(const Eigen::MatrixXcd& v, const Eigen::MatrixXcd& h_occ,
                     const Eigen::MatrixXcd& h_emp, int n, int m) {
    cplx s(0.0, 0.0);
    for (int p = 0; p < v.rows(); ++p)
        s += v(p, n) * h_occ(n, m) * std::conj(v(p, m)) +
             std::conj(v(p, n)) * h_emp(n, m) * v(p, m);
    return s;
}

double fit_residual(const Eigen::MatrixXcd& v, const Eigen::MatrixXcd& target,
                    const Eigen::MatrixXcd& h_occ, const Eigen::MatrixXcd& h_emp, double mu,
                    const TimeGrid& grid) {
    double r = 0.0;
    const int np = static_cast<int>(target.rows());
    for (int n = 0; n < np; ++n)
        for (int m = 0; m < np; ++m) {
            double w = std::exp(-2.0 * mu * std::abs(grid.time(n) - grid.time(m)));
            r += w * std::norm(target(n, m) - fit_model_entry(v, h_occ, h_emp, n, m));
        }
    return r;
}

// Least-squares update of column c with all other columns frozen. The
// off-diagonal rows pair with their Hermitian mirrors (weight sqrt(2)); the
// diagonal entry is linearized around the current column.
Eigen::VectorXcd fit_column_solve(const Eigen::MatrixXcd& v, const Eigen::MatrixXcd& target,
                                  const Eigen::MatrixXcd& h_occ, const Eigen::MatrixXcd& h_emp,
                                  double mu, const TimeGrid& grid, int c, bool with_diagonal) {
    const int np = static_cast<int>(target.rows());
    const int pairs = static_cast<int>(v.rows());
    const int n_rows = (np - 1) + (with_diagonal ? 1 : 0);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n_rows, 2 * pairs);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * n_rows);
    int row = 0;
    auto put = [&](cplx coef_u, cplx coef_w, int p, double wt) {
        a(2 * row, 2 * p) += wt * coef_u.real();
        a(2 * row, 2 * p + 1) += wt * coef_w.real();
        a(2 * row + 1, 2 * p) += wt * coef_u.imag();
        a(2 * row + 1, 2 * p + 1) += wt * coef_w.imag();
    };
    for (int n = 0; n < np; ++n) {
        if (n == c)
            continue;
        double wt = std::sqrt(2.0 * std::exp(-2.0 * mu * std::abs(grid.time(n) - grid.time(c))));
        // entry (n, c): sum_p V_p(n) h_occ(n,c) x_p^* + V_p(n)^* h_emp(n,c) x_p
        for (int p = 0; p < pairs; ++p) {
            cplx alpha = v(p, n) * h_occ(n, c);
            cplx beta = std::conj(v(p, n)) * h_emp(n, c);
            put(alpha + beta, I * (beta - alpha), p, wt);
        }
        b(2 * row) = wt * target(n, c).real();
        b(2 * row + 1) = wt * target(n, c).imag();
        ++row;
    }
    if (with_diagonal) {
        // |x_p|^2 linearized as 2 Re(x0_p^* x_p) - |x0_p|^2
        cplx h_tot = h_occ(c, c) + h_emp(c, c);
        cplx rhs = target(c, c);
        for (int p = 0; p < pairs; ++p) {
            cplx x0 = v(p, c);
            put(h_tot * 2.0 * x0.real(), h_tot * 2.0 * x0.imag(), p, 1.0);
            rhs += h_tot * std::norm(x0);
        }
        b(2 * row) = rhs.real();
        b(2 * row + 1) = rhs.imag();
        ++row;
    }
    Eigen::VectorXd x = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(a).solve(b);
    Eigen::VectorXcd out(pairs);
    for (int p = 0; p < pairs; ++p)
        out(p) = cplx(x(2 * p), x(2 * p + 1));
    return out;
}

} // namespace

FitResult fit_hybridizations_noisy(const Eigen::MatrixXcd& target, const Eigen::MatrixXcd& h_occ,
                                   const Eigen::MatrixXcd& h_emp, double mu_fit,
                                   const TimeGrid& grid, const HybridizationSet& v_init) {
    const int np = static_cast<int>(target.rows());
    if (v_init.points() != np)
        throw std::invalid_argument("fit_hybridizations_noisy: grid size mismatch");
    FitResult res;
    res.v = v_init;
    double current = fit_residual(res.v.v, target, h_occ, h_emp, mu_fit, grid);
    for (int sweep = 1; sweep <= 200; ++sweep) {
        double before = current;
        for (int c = 1; c < np; ++c) {
            Eigen::VectorXcd x_old = res.v.v.col(c);
            Eigen::VectorXcd x_new =
                fit_column_solve(res.v.v, target, h_occ, h_emp, mu_fit, grid, c, true);
            double alpha = 1.0;
            for (int back = 0; back < 30; ++back) {
                res.v.v.col(c) = x_old + alpha * (x_new - x_old);
                double trial = fit_residual(res.v.v, target, h_occ, h_emp, mu_fit, grid);
                if (trial <= current) {
                    current = trial;
                    break;
                }
                alpha *= 0.5;
                if (back == 29)
                    res.v.v.col(c) = x_old;
            }
        }
        res.sweeps = sweep;
        if (before - current <= 1e-8 * std::max(before, 1e-300))
            break;
    }
    res.residual = current;
    return res;
}

Eigen::VectorXcd fit_slice_column(const Eigen::MatrixXcd& target, const Eigen::MatrixXcd& h_occ,
                                  const Eigen::MatrixXcd& h_emp, double mu_fit,
                                  const TimeGrid& grid, const HybridizationSet& v, int slice) {
    const int pairs = v.pairs();
    if (slice < 2)
        throw std::invalid_argument("fit_slice_column: slice must exceed 1");
    const int rows = slice - 1;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * rows, 2 * pairs);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * rows);
    for (int m = 1; m < slice; ++m) {
        double wt = std::sqrt(std::exp(-2.0 * mu_fit * std::abs(grid.time(slice) - grid.time(m))));
        // entry (slice, m): sum_p x_p h_occ(slice,m) V_p(m)^* + x_p^* h_emp(slice,m) V_p(m)
        for (int p = 0; p < pairs; ++p) {
            cplx alpha = h_occ(slice, m) * std::conj(v.v(p, m));
            cplx beta = h_emp(slice, m) * v.v(p, m);
            cplx coef_u = alpha + beta;
            cplx coef_w = I * (alpha - beta);
            int r = m - 1;
            a(2 * r, 2 * p) = wt * coef_u.real();
            a(2 * r, 2 * p + 1) = wt * coef_w.real();
            a(2 * r + 1, 2 * p) = wt * coef_u.imag();
            a(2 * r + 1, 2 * p + 1) = wt * coef_w.imag();
        }
        b(2 * (m - 1)) = wt * target(slice, m).real();
        b(2 * (m - 1) + 1) = wt * target(slice, m).imag();
    }
    Eigen::VectorXd x = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(a).solve(b);
    Eigen::VectorXcd out(pairs);
    for (int p = 0; p < pairs; ++p)
        out(p) = cplx(x(2 * p), x(2 * p + 1));
    return out;
}

DecayFit estimate_decay_rate(const Eigen::MatrixXcd& noisy_lesser,
                             const Eigen::MatrixXcd& ideal_lesser, const TimeGrid& grid,
                             double floor_frac) {
    const int np = static_cast<int>(ideal_lesser.rows());
    double peak = 0.0;
    for (int n = 0; n < np; ++n)
        for (int m = 0; m < np; ++m)
            if (n != m)
                peak = std::max(peak, std::abs(ideal_lesser(n, m).imag()));
    std::vector<double> ds, ys;
    for (int n = 0; n < np; ++n)
        for (int m = 0; m < np; ++m) {
            if (n == m)
                continue;
            double ideal = ideal_lesser(n, m).imag();
            if (std::abs(ideal) < floor_frac * peak)
                continue;
            double ratio = std::abs(noisy_lesser(n, m).imag() / ideal);
            if (!(ratio > 0.0))
                continue;
            ds.push_back(std::abs(grid.time(n) - grid.time(m)));
            ys.push_back(-std::log(ratio));
        }
    if (ds.empty())
        throw std::runtime_error("estimate_decay_rate: no entries above the signal floor");
    double sdd = 0.0, sdy = 0.0, sy = 0.0;
    for (size_t i = 0; i < ds.size(); ++i) {
        sdd += ds[i] * ds[i];
        sdy += ds[i] * ys[i];
        sy += ys[i];
    }
    DecayFit fit;
    fit.points = static_cast<long>(ds.size());
    fit.eta = std::max(0.0, sdy / sdd);
    double mean = sy / static_cast<double>(ys.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (size_t i = 0; i < ds.size(); ++i) {
        double r = ys[i] - fit.eta * ds[i];
        ss_res += r * r;
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
    return fit;
}

} // namespace qdmft
