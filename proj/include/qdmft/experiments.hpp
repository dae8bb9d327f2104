#pragma once

#include <string>
#include <vector>

#include "qdmft/config.hpp"
#include "qdmft/io.hpp"
#include "qdmft/lindblad.hpp"

namespace qdmft {

inline constexpr const char* kVersionTag = "qdmft 0.1.0";

struct EtaPoint {
    double sigma_ms = 0.0;
    DecayFit fit;
};

struct EtaSweepResult {
    Eigen::MatrixXcd ideal_lesser;
    std::vector<Eigen::MatrixXcd> noisy_lesser; // one per sigma
    std::vector<EtaPoint> points;
};

// Fixed constant couplings (no self-consistency): impurity lesser function of
// the spin-down channel, ideal and per noise level, with decay-rate fits.
EtaSweepResult run_eta_sweep(const ExperimentConfig& config);

struct LindbladFitResultSummary {
    double err_naive = 0.0;
    double err_fit = 0.0;
    double ratio = 0.0;
    DmftResult exact;      // undamped reference loop
    GreenSet lambda_noisy; // damped-bath representation at the reference couplings
    HybridizationSet v_naive;
    HybridizationSet v_fit;
    double residual_naive = 0.0;
    double residual_fit = 0.0;
    GreenSet lambda_naive; // ideal-bath reconstruction from the naive couplings
    GreenSet lambda_fit;   // ideal-bath reconstruction from the fitted couplings
};

// Converges the undamped loop, then evaluates what damped baths deliver at
// its couplings to obtain a noisy hybridization function, and extracts
// couplings from it twice: with ideal bath functions (ignoring the damping)
// and with the dissipative ones. Both ideal-bath reconstructions are compared
// against the undamped reference.
LindbladFitResultSummary run_lindblad_fit(const ExperimentConfig& config);

// Dispatches on config.mode, writes all artifacts into out_dir.
// Returns the process exit code: 0 success, 2 non-convergence.
int run_experiment(const ExperimentConfig& config, const std::string& out_dir);

} // namespace qdmft
