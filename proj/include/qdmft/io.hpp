#pragma once

#include <string>
#include <vector>

#include "qdmft/config.hpp"
#include "qdmft/loop.hpp"

namespace qdmft {

// One stored grid pair of a two-time function; only m <= n rows are written,
// the upper triangle follows from skew symmetry.
struct TwoTimeRecord {
    int component = 0; // 0 = lesser, 1 = greater
    int spin = 0;
    int n = 0;
    int m = 0;
    double t_n = 0.0;
    double t_m = 0.0;
    double re = 0.0;
    double im = 0.0;
};

std::vector<TwoTimeRecord> to_records(const GreenSet& g, const TimeGrid& grid);

void write_two_time(const std::vector<TwoTimeRecord>& records, const std::string& path);
std::vector<TwoTimeRecord> read_two_time(const std::string& path);

void write_series(const Eigen::VectorXd& values, const TimeGrid& grid, const std::string& name,
                  const std::string& path);
Eigen::VectorXd read_series(const std::string& path);

void write_convergence(const ConvergenceReport& report, const std::string& path);

// Named scalar results (eta fits, error ratios).
void write_scalars(const std::vector<std::pair<std::string, double>>& rows,
                   const std::string& path);

struct RunManifest {
    KeyValues config; // fully resolved, defaults included
    std::string version;
    double wall_seconds = 0.0;
    bool converged = false;
    int iterations = 0;
};

void write_manifest(const RunManifest& manifest, const std::string& path);

} // namespace qdmft
