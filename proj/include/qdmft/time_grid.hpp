#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace qdmft {

using cplx = std::complex<double>;

struct TimeGrid {
    double dt = 0.04;
    int n_steps = 0;

    int n_points() const { return n_steps + 1; }
    double time(int n) const { return dt * n; }
    double t_max() const { return dt * n_steps; }
};

struct QuenchProfile {
    double t_q = 0.25;
    double v_final = 1.0;

    double omega0() const { return M_PI / t_q; }
};

// Hopping ramp: 0 at t=0, smoothly up to v_final at t_q, constant after.
inline double quench_v(double t, const QuenchProfile& profile) {
    if (t < 0.0)
        throw std::domain_error("quench_v: negative time");
    if (t >= profile.t_q)
        return profile.v_final;
    return 0.5 * (1.0 - std::cos(profile.omega0() * t)) * profile.v_final;
}

enum class Component { lesser, greater };

// One component of a two-time function on the grid, values(n, m) at (t_n, t_m).
struct TwoTimeFunction {
    Component component = Component::lesser;
    int spin = 0; // 0 = down, 1 = up
    Eigen::MatrixXcd values;

    void resize(int n_points) { values = Eigen::MatrixXcd::Zero(n_points, n_points); }
};

// Lesser/greater pair per spin.
struct GreenSet {
    std::array<TwoTimeFunction, 2> lesser;  // index = spin
    std::array<TwoTimeFunction, 2> greater;

    void resize(int n_points) {
        for (int s = 0; s < 2; ++s) {
            lesser[s].component = Component::lesser;
            lesser[s].spin = s;
            lesser[s].resize(n_points);
            greater[s].component = Component::greater;
            greater[s].spin = s;
            greater[s].resize(n_points);
        }
    }
};

// Couplings V_p(t_n) for the occupied bath of each pair; the empty partner
// carries the complex conjugate coupling. Bath sites are interleaved
// (occupied, empty), so 0-based bath index b maps to pair b/2.
struct HybridizationSet {
    Eigen::MatrixXcd v; // (pair, grid point)

    int pairs() const { return static_cast<int>(v.rows()); }
    int points() const { return static_cast<int>(v.cols()); }

    static HybridizationSet zero(int pairs, int points) {
        HybridizationSet h;
        h.v = Eigen::MatrixXcd::Zero(pairs, points);
        return h;
    }

    cplx occupied(int pair, int n) const { return v(pair, n); }

    cplx bath_coupling(int b, int n) const {
        return (b % 2 == 0) ? v(b / 2, n) : std::conj(v(b / 2, n));
    }
};

} // namespace qdmft
