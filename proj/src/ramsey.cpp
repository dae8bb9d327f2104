#include "qdmft/ramsey.hpp"

#include <cmath>
#include <stdexcept>

#include "qdmft/parallel.hpp"

namespace qdmft {

namespace {

const cplx I(0.0, 1.0);

PauliString impurity_string(int spin, char letter) {
    if (spin == 0)
        return {{1, letter}};
    return {{1, 'z'}, {2, letter}};
}

std::vector<int> initial_occupations(const SiamParams& params, int system) {
    std::vector<int> occ(params.n_modes(), 0);
    occ[SiamParams::mode(0, system == 0 ? 1 : 0)] = 1;
    for (int b = 0; b < params.n_bath; ++b)
        if (b % 2 == 0) {
            occ[SiamParams::mode(b + 1, 0)] = 1;
            occ[SiamParams::mode(b + 1, 1)] = 1;
        }
    return occ;
}

void apply_step(Statevector& state, const TrotterStepProgram& step, const NoiseModel& noise,
                RngStream& rng) {
    if (noise.silent()) {
        for (const auto& block : step.blocks)
            for (const auto& g : block.gates)
                apply_gate(state, g);
    } else {
        for (const auto& block : step.blocks)
            for (const auto& g : block.gates) {
                GateSpec noisy = noisify(g, noise, rng);
                apply_gate(state, noisy);
            }
    }
}

double sampled_expectation(double exact, long shots, RngStream& rng) {
    const double p_plus = 0.5 * (1.0 + exact);
    long plus = 0;
    for (long s = 0; s < shots; ++s)
        if (rng.uniform() < p_plus)
            ++plus;
    return (2.0 * plus - shots) / static_cast<double>(shots);
}

} // namespace

std::vector<ContributionSpec> green_contributions(Component component, int spin) {
    std::vector<ContributionSpec> specs;
    const cplx pref = (component == Component::greater) ? -I / 4.0 : I / 4.0;
    const bool conj = component == Component::lesser;
    // (letter at t, letter at t', algebraic weight); the lesser table already
    // accounts for reading the paper's reversed-time expectations as
    // conjugated F values.
    struct Row { char at_t, at_tp; cplx w; };
    std::vector<Row> rows;
    if (component == Component::greater)
        rows = {{'x', 'x', 1.0}, {'x', 'y', -I}, {'y', 'x', I}, {'y', 'y', 1.0}};
    else
        rows = {{'x', 'x', 1.0}, {'y', 'x', I}, {'x', 'y', -I}, {'y', 'y', 1.0}};
    for (const auto& r : rows) {
        ContributionSpec s;
        s.sigma_first = impurity_string(spin, r.at_tp);
        s.sigma_second = impurity_string(spin, r.at_t);
        s.weight = pref * r.w;
        s.conjugate = conj;
        s.component = component;
        s.spin = spin;
        specs.push_back(std::move(s));
    }
    return specs;
}

long shot_budget(double eps, bool spin_symmetric) {
    if (eps <= 0.0)
        throw std::invalid_argument("shot_budget: eps must be positive");
    // 2 systems x 2 spins x 2 components x 4 terms x 2 quadratures
    long channels = 2L * 2L * 2L * 4L * 2L;
    if (spin_symmetric)
        channels /= 2;
    return channels * static_cast<long>(std::ceil(1.0 / (eps * eps)));
}

RamseyContext make_ramsey_context(const SiamParams& params, const TimeGrid& grid,
                                  const NoiseModel& noise, const MeasurementMode& mode) {
    RamseyContext ctx;
    ctx.params = params;
    ctx.grid = grid;
    ctx.noise = noise;
    ctx.mode = mode;
    ctx.steps.reserve(grid.n_steps);
    for (int n = 0; n < grid.n_steps; ++n)
        ctx.steps.push_back(compile_trotter_step(params, n, grid.dt));
    return ctx;
}

cplx ramsey_contribution(const RamseyContext& ctx, int system, int n, int m,
                         const ContributionSpec& spec, RngStream& rng) {
    if (m > n || n > ctx.grid.n_steps)
        throw std::out_of_range("ramsey_contribution: bad grid indices");
    Statevector state = jw_encode(initial_occupations(ctx.params, system));
    apply_gate(state, GateSpec::hadamard_gate(0));
    for (int l = 0; l < m; ++l)
        apply_step(state, ctx.steps[l], ctx.noise, rng);
    apply_gate(state, GateSpec::controlled_pauli_gate(0, 0, spec.sigma_first));
    for (int l = m; l < n; ++l)
        apply_step(state, ctx.steps[l], ctx.noise, rng);
    apply_gate(state, GateSpec::controlled_pauli_gate(0, 1, spec.sigma_second));
    apply_gate(state, GateSpec::hadamard_gate(0));

    double re = expect_z(state, 0);
    double im = expect_y(state, 0);
    if (ctx.mode.sampled) {
        re = sampled_expectation(re, ctx.mode.shots, rng);
        im = sampled_expectation(im, ctx.mode.shots, rng);
    }
    return cplx(re, im);
}

void measure_impurity_green(const RamseyContext& ctx, int realizations, uint64_t seed,
                            uint64_t epoch, int row_lo, int row_hi, int workers, GreenSet& out) {
    const int reals = (ctx.noise.silent() && !ctx.mode.sampled) ? 1 : realizations;
    struct Point { int n, m; };
    std::vector<Point> points;
    for (int n = row_lo; n <= row_hi; ++n)
        for (int m = 0; m <= n; ++m)
            points.push_back({n, m});

    struct Result { cplx lesser, greater; };
    // spin-symmetric: both impurity spins of the alpha system supply the two
    // pure-state Green functions that average into G_loc
    std::vector<std::array<Result, 2>> results(points.size()); // index: alpha spin

    parallel_for(static_cast<long>(points.size()), workers, [&](long idx) {
        const auto [n, m] = points[idx];
        for (int spin = 0; spin < 2; ++spin) {
            for (int comp = 0; comp < 2; ++comp) {
                Component component = comp == 0 ? Component::lesser : Component::greater;
                auto specs = green_contributions(component, spin);
                cplx value(0.0, 0.0);
                for (size_t i = 0; i < specs.size(); ++i) {
                    cplx f_sum(0.0, 0.0);
                    for (int r = 0; r < reals; ++r) {
                        RngStream rng(mix_seed({seed, 1, epoch, static_cast<uint64_t>(comp),
                                                static_cast<uint64_t>(spin), static_cast<uint64_t>(n),
                                                static_cast<uint64_t>(m), i, static_cast<uint64_t>(r)}));
                        f_sum += ramsey_contribution(ctx, 0, n, m, specs[i], rng);
                    }
                    cplx f_avg = f_sum / static_cast<double>(reals);
                    value += specs[i].weight * (specs[i].conjugate ? std::conj(f_avg) : f_avg);
                }
                if (comp == 0)
                    results[idx][spin].lesser = value;
                else
                    results[idx][spin].greater = value;
            }
        }
    });

    for (size_t idx = 0; idx < points.size(); ++idx) {
        const auto [n, m] = points[idx];
        cplx lesser = 0.5 * (results[idx][0].lesser + results[idx][1].lesser);
        cplx greater = 0.5 * (results[idx][0].greater + results[idx][1].greater);
        for (int s = 0; s < 2; ++s) {
            out.lesser[s].values(n, m) = lesser;
            out.greater[s].values(n, m) = greater;
            if (m != n) {
                out.lesser[s].values(m, n) = -std::conj(lesser);
                out.greater[s].values(m, n) = -std::conj(greater);
            }
        }
    }
}

Eigen::VectorXd measure_double_occupancy(const RamseyContext& ctx, int realizations,
                                         uint64_t seed, uint64_t epoch, int workers) {
    const int reals = (ctx.noise.silent() && !ctx.mode.sampled) ? 1 : realizations;
    const int np = ctx.grid.n_points();
    Eigen::VectorXd d = Eigen::VectorXd::Zero(np);
    parallel_for(np, workers, [&](long n) {
        double val = 0.0;
        for (int system = 0; system < 2; ++system) {
            for (int r = 0; r < reals; ++r) {
                RngStream rng(mix_seed({seed, 2, epoch, static_cast<uint64_t>(n),
                                        static_cast<uint64_t>(system), static_cast<uint64_t>(r)}));
                Statevector state = jw_encode(initial_occupations(ctx.params, system));
                for (int l = 0; l < n; ++l)
                    apply_step(state, ctx.steps[l], ctx.noise, rng);
                double p = 0.0;
                for (long s = 0; s < state.amp.size(); ++s)
                    if ((s & 2L) && (s & 4L)) // impurity qubits 1 and 2
                        p += std::norm(state.amp(s));
                val += p;
            }
        }
        d(n) = val / (2.0 * reals);
    });
    return d;
}

} // namespace qdmft
