#include "qdmft/experiments.hpp"

#include <chrono>
#include <filesystem>

#include "qdmft/parallel.hpp"
#include "qdmft/ramsey.hpp"

namespace qdmft {

namespace {

// Measures the spin-down impurity lesser function of the alpha system at
// fixed couplings, lower triangle plus skew-symmetric mirror.
Eigen::MatrixXcd measure_lesser_fixed(const ExperimentConfig& config, double sigma_ms,
                                      uint64_t sigma_tag) {
    const DmftConfig& l = config.loop;
    SiamParams params;
    params.u = l.u;
    params.n_bath = 2 * l.bath_pairs;
    params.hyb = HybridizationSet::zero(l.bath_pairs, l.grid.n_points());
    params.hyb.v.setConstant(cplx(config.v_const, 0.0));

    NoiseModel noise = l.noise;
    noise.sigma_ms = sigma_ms;
    if (sigma_ms == 0.0)
        noise.sigma_1q = 0.0;
    RamseyContext ctx = make_ramsey_context(params, l.grid, noise, l.meas);
    const int reals = (noise.silent() && !l.meas.sampled) ? 1 : l.realizations;

    const int np = l.grid.n_points();
    struct Point { int n, m; };
    std::vector<Point> points;
    for (int n = 0; n < np; ++n)
        for (int m = 0; m <= n; ++m)
            points.push_back({n, m});
    std::vector<cplx> values(points.size());
    auto specs = green_contributions(Component::lesser, 0);
    parallel_for(static_cast<long>(points.size()), l.workers, [&](long idx) {
        const auto [n, m] = points[idx];
        cplx value(0.0, 0.0);
        for (int sys = 0; sys < 2; ++sys)
            for (size_t i = 0; i < specs.size(); ++i) {
                cplx f_sum(0.0, 0.0);
                for (int r = 0; r < reals; ++r) {
                    RngStream rng(mix_seed({l.seed, 3, sigma_tag, static_cast<uint64_t>(sys),
                                            static_cast<uint64_t>(n), static_cast<uint64_t>(m),
                                            i, static_cast<uint64_t>(r)}));
                    f_sum += ramsey_contribution(ctx, sys, n, m, specs[i], rng);
                }
                cplx f_avg = f_sum / static_cast<double>(reals);
                value += 0.5 * specs[i].weight * std::conj(f_avg);
            }
        values[idx] = value;
    });

    Eigen::MatrixXcd lesser = Eigen::MatrixXcd::Zero(np, np);
    for (size_t idx = 0; idx < points.size(); ++idx) {
        const auto [n, m] = points[idx];
        lesser(n, m) = values[idx];
        if (m != n)
            lesser(m, n) = -std::conj(values[idx]);
    }
    return lesser;
}

double mean_abs_difference(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().mean();
}

RunManifest make_manifest(const ExperimentConfig& config, bool converged, int iterations,
                          double wall_seconds) {
    RunManifest m;
    m.config = dump_config(config);
    m.version = kVersionTag;
    m.converged = converged;
    m.iterations = iterations;
    m.wall_seconds = wall_seconds;
    return m;
}

} // namespace

EtaSweepResult run_eta_sweep(const ExperimentConfig& config) {
    EtaSweepResult result;
    result.ideal_lesser = measure_lesser_fixed(config, 0.0, 0);
    for (size_t i = 0; i < config.sigma_ms_list.size(); ++i) {
        double sigma = config.sigma_ms_list[i];
        result.noisy_lesser.push_back(measure_lesser_fixed(config, sigma, i + 1));
        EtaPoint point;
        point.sigma_ms = sigma;
        point.fit = estimate_decay_rate(result.noisy_lesser.back(), result.ideal_lesser,
                                        config.loop.grid, config.floor_frac);
        result.points.push_back(point);
    }
    return result;
}

// Hybridization function the couplings generate through bath sites with the
// given reduced two-time functions (the occupied partner of each pair couples
// with V, the empty one with conj(V)).
GreenSet bath_representation(const HybridizationSet& v, const DissipativeBathGreen& occ,
                             const DissipativeBathGreen& emp, int np) {
    const cplx I(0.0, 1.0);
    GreenSet g;
    g.resize(np);
    for (int n = 0; n < np; ++n)
        for (int m = 0; m < np; ++m) {
            cplx direct(0.0, 0.0), conjugated(0.0, 0.0);
            for (int p = 0; p < v.pairs(); ++p) {
                direct += v.v(p, n) * std::conj(v.v(p, m));
                conjugated += std::conj(v.v(p, n)) * v.v(p, m);
            }
            cplx lesser = I * (direct * occ.h_lesser(n, m) + conjugated * emp.h_lesser(n, m));
            cplx greater =
                -I * (direct * occ.h_greater(n, m) + conjugated * emp.h_greater(n, m));
            for (int s = 0; s < 2; ++s) {
                g.lesser[s].values(n, m) = lesser;
                g.greater[s].values(n, m) = greater;
            }
        }
    return g;
}

LindbladFitResultSummary run_lindblad_fit(const ExperimentConfig& config) {
    if (config.loop.u != 0.0)
        throw ConfigError("config field 'u' must be 0 in lindblad-fit mode");
    LindbladFitResultSummary summary;
    const int np = config.loop.grid.n_points();
    const cplx I(0.0, 1.0);

    DmftConfig exact_cfg = config.loop;
    exact_cfg.solver = SolverMode::lindblad;
    exact_cfg.gamma = 0.0;
    exact_cfg.correction = Correction::none;
    summary.exact = run_self_consistency(exact_cfg);

    // damped baths at the programmed couplings play the noisy measurement
    LindbladBathParams bath{config.loop.gamma, config.loop.gamma};
    DissipativeBathGreen occ = bath_green_dissipative(bath, true, config.loop.grid);
    DissipativeBathGreen emp = bath_green_dissipative(bath, false, config.loop.grid);
    LindbladBathParams ideal_bath{0.0, 0.0};
    DissipativeBathGreen occ0 = bath_green_dissipative(ideal_bath, true, config.loop.grid);
    DissipativeBathGreen emp0 = bath_green_dissipative(ideal_bath, false, config.loop.grid);
    summary.lambda_noisy = bath_representation(summary.exact.v, occ, emp, np);

    // extract couplings from the noisy function with and without the
    // dissipative bath model, both warm-started from the programmed values
    Eigen::MatrixXcd target = (-I * summary.lambda_noisy.lesser[0].values).eval();
    FitResult naive = fit_hybridizations_noisy(target, occ0.h_lesser, emp0.h_lesser,
                                               config.loop.mu_fit, config.loop.grid,
                                               summary.exact.v);
    FitResult fit = fit_hybridizations_noisy(target, occ.h_lesser, emp.h_lesser,
                                             config.loop.mu_fit, config.loop.grid,
                                             summary.exact.v);
    summary.v_naive = naive.v;
    summary.v_fit = fit.v;
    summary.residual_naive = naive.residual;
    summary.residual_fit = fit.residual;

    summary.lambda_naive = bath_representation(summary.v_naive, occ0, emp0, np);
    summary.lambda_fit = bath_representation(summary.v_fit, occ0, emp0, np);
    summary.err_naive = mean_abs_difference(summary.lambda_naive.lesser[0].values,
                                            summary.exact.lambda.lesser[0].values);
    summary.err_fit = mean_abs_difference(summary.lambda_fit.lesser[0].values,
                                          summary.exact.lambda.lesser[0].values);
    summary.ratio = summary.err_naive > 0.0 ? summary.err_fit / summary.err_naive : 0.0;
    return summary;
}

int run_experiment(const ExperimentConfig& config, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory: " + out_dir);
    auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };
    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    const TimeGrid& grid = config.loop.grid;
    if (config.mode == "ed" || config.mode == "hybrid") {
        DmftConfig loop = config.loop;
        loop.solver = config.mode == "ed" ? SolverMode::ed : SolverMode::circuit;
        DmftResult res = run_self_consistency(loop);
        write_two_time(to_records(res.g, grid), path("green.tsv"));
        write_two_time(to_records(res.lambda, grid), path("lambda.tsv"));
        write_series(res.docc, grid, "docc", path("docc.tsv"));
        write_convergence(res.report, path("convergence.tsv"));
        std::vector<std::pair<std::string, double>> hyb_rows;
        for (int p = 0; p < res.v.pairs(); ++p)
            for (int n = 0; n < res.v.points(); ++n) {
                std::string tag = "v_" + std::to_string(p) + "_" + std::to_string(n);
                hyb_rows.emplace_back(tag + "_re", res.v.v(p, n).real());
                hyb_rows.emplace_back(tag + "_im", res.v.v(p, n).imag());
            }
        write_scalars(hyb_rows, path("hybridization.tsv"));
        write_manifest(make_manifest(config, res.report.converged, res.report.iterations,
                                     elapsed()),
                       path("manifest.txt"));
        return res.report.converged ? 0 : 2;
    }
    if (config.mode == "eta-sweep") {
        EtaSweepResult sweep = run_eta_sweep(config);
        std::vector<std::pair<std::string, double>> rows;
        for (const auto& point : sweep.points) {
            std::string tag = "sigma_" + std::to_string(point.sigma_ms);
            rows.emplace_back(tag + "_eta", point.fit.eta);
            rows.emplace_back(tag + "_r2", point.fit.r_squared);
            rows.emplace_back(tag + "_points", static_cast<double>(point.fit.points));
        }
        write_scalars(rows, path("eta.tsv"));
        GreenSet ideal;
        ideal.resize(grid.n_points());
        ideal.lesser[0].values = sweep.ideal_lesser;
        write_two_time(to_records(ideal, grid), path("green_ideal.tsv"));
        for (size_t i = 0; i < sweep.noisy_lesser.size(); ++i) {
            GreenSet noisy;
            noisy.resize(grid.n_points());
            noisy.lesser[0].values = sweep.noisy_lesser[i];
            write_two_time(to_records(noisy, grid),
                           path("green_noisy_" + std::to_string(i) + ".tsv"));
        }
        write_manifest(make_manifest(config, true, 0, elapsed()), path("manifest.txt"));
        return 0;
    }
    if (config.mode == "lindblad-fit") {
        LindbladFitResultSummary summary = run_lindblad_fit(config);
        write_two_time(to_records(summary.exact.lambda, grid), path("lambda_exact.tsv"));
        write_two_time(to_records(summary.lambda_noisy, grid), path("lambda_noisy.tsv"));
        write_two_time(to_records(summary.lambda_naive, grid), path("lambda_naive.tsv"));
        write_two_time(to_records(summary.lambda_fit, grid), path("lambda_fit.tsv"));
        write_convergence(summary.exact.report, path("convergence.tsv"));
        write_scalars({{"err_naive", summary.err_naive},
                       {"err_fit", summary.err_fit},
                       {"ratio", summary.ratio},
                       {"residual_naive", summary.residual_naive},
                       {"residual_fit", summary.residual_fit}},
                      path("errors.tsv"));
        bool converged = summary.exact.report.converged;
        int iters = summary.exact.report.iterations;
        write_manifest(make_manifest(config, converged, iters, elapsed()), path("manifest.txt"));
        return converged ? 0 : 2;
    }
    throw ConfigError("config field 'mode' has unsupported value '" + config.mode + "'");
}

} // namespace qdmft
