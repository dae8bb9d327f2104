#include "qdmft/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qdmft {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open for reading: " + path);
    return in;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out)
        throw IoError("write failed: " + path);
}

} // namespace

std::vector<TwoTimeRecord> to_records(const GreenSet& g, const TimeGrid& grid) {
    std::vector<TwoTimeRecord> records;
    const int np = grid.n_points();
    records.reserve(4 * np * (np + 1) / 2);
    for (int comp = 0; comp < 2; ++comp)
        for (int spin = 0; spin < 2; ++spin) {
            const Eigen::MatrixXcd& values =
                comp == 0 ? g.lesser[spin].values : g.greater[spin].values;
            for (int n = 0; n < np; ++n)
                for (int m = 0; m <= n; ++m)
                    records.push_back({comp, spin, n, m, grid.time(n), grid.time(m),
                                       values(n, m).real(), values(n, m).imag()});
        }
    return records;
}

void write_two_time(const std::vector<TwoTimeRecord>& records, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "component\tspin\tn\tm\tt_n\tt_m\tre\tim\n";
    for (const auto& r : records)
        out << r.component << '\t' << r.spin << '\t' << r.n << '\t' << r.m << '\t' << fmt(r.t_n)
            << '\t' << fmt(r.t_m) << '\t' << fmt(r.re) << '\t' << fmt(r.im) << '\n';
    finish(out, path);
}

std::vector<TwoTimeRecord> read_two_time(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw IoError("missing header: " + path);
    std::vector<TwoTimeRecord> records;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        TwoTimeRecord r;
        if (!(ss >> r.component >> r.spin >> r.n >> r.m >> r.t_n >> r.t_m >> r.re >> r.im))
            throw IoError("malformed row in " + path + ": " + line);
        records.push_back(r);
    }
    return records;
}

void write_series(const Eigen::VectorXd& values, const TimeGrid& grid, const std::string& name,
                  const std::string& path) {
    std::ofstream out = open_out(path);
    out << "n\tt\t" << name << '\n';
    for (int n = 0; n < values.size(); ++n)
        out << n << '\t' << fmt(grid.time(n)) << '\t' << fmt(values(n)) << '\n';
    finish(out, path);
}

Eigen::VectorXd read_series(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw IoError("missing header: " + path);
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        int n;
        double t, v;
        if (!(ss >> n >> t >> v))
            throw IoError("malformed row in " + path + ": " + line);
        values.push_back(v);
    }
    return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<long>(values.size()));
}

void write_convergence(const ConvergenceReport& report, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "slice\titer\tmetric\n";
    for (const auto& row : report.rows)
        out << row.slice << '\t' << row.iter << '\t' << fmt(row.metric) << '\n';
    finish(out, path);
}

void write_scalars(const std::vector<std::pair<std::string, double>>& rows,
                   const std::string& path) {
    std::ofstream out = open_out(path);
    out << "name\tvalue\n";
    for (const auto& [name, value] : rows)
        out << name << '\t' << fmt(value) << '\n';
    finish(out, path);
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "version=" << manifest.version << '\n';
    for (const auto& [k, v] : manifest.config)
        out << k << '=' << v << '\n';
    out << "converged=" << (manifest.converged ? 1 : 0) << '\n';
    out << "iterations=" << manifest.iterations << '\n';
    out << "wall_seconds=" << fmt(manifest.wall_seconds) << '\n';
    finish(out, path);
}

} // namespace qdmft
