#include "qdmft/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qdmft {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    double x = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as a number");
    return x;
}

long parse_long(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    long x = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as an integer");
    return x;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "0" || value == "false")
        return false;
    if (value == "1" || value == "true")
        return true;
    throw ConfigError("config key '" + key + "': expected 0/1/true/false, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(parse_double(key, item));
    }
    if (out.empty())
        throw ConfigError("config key '" + key + "': empty list");
    return out;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

KeyValues load_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path);
    KeyValues kvs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty())
            continue;
        size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file " + path + " line " + std::to_string(lineno) +
                              ": expected key=value, got '" + body + "'");
        kvs.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    }
    return kvs;
}

void apply_key(ExperimentConfig& config, const std::string& key, const std::string& value) {
    DmftConfig& l = config.loop;
    if (key == "dt")
        l.grid.dt = parse_double(key, value);
    else if (key == "n_steps")
        l.grid.n_steps = static_cast<int>(parse_long(key, value));
    else if (key == "t_q")
        l.quench.t_q = parse_double(key, value);
    else if (key == "u")
        l.u = parse_double(key, value);
    else if (key == "bath_pairs")
        l.bath_pairs = static_cast<int>(parse_long(key, value));
    else if (key == "sigma_1q")
        l.noise.sigma_1q = parse_double(key, value);
    else if (key == "sigma_ms")
        l.noise.sigma_ms = parse_double(key, value);
    else if (key == "realizations")
        l.realizations = static_cast<int>(parse_long(key, value));
    else if (key == "delta_conv")
        l.delta_conv = parse_double(key, value);
    else if (key == "max_iters")
        l.max_iters = static_cast<int>(parse_long(key, value));
    else if (key == "mixing")
        l.mixing = parse_double(key, value);
    else if (key == "seed")
        l.seed = static_cast<uint64_t>(parse_long(key, value));
    else if (key == "workers")
        l.workers = static_cast<int>(parse_long(key, value));
    else if (key == "sampled")
        l.meas.sampled = parse_bool(key, value);
    else if (key == "shots")
        l.meas.shots = parse_long(key, value);
    else if (key == "gamma")
        l.gamma = parse_double(key, value);
    else if (key == "mu_fit")
        l.mu_fit = parse_double(key, value);
    else if (key == "sigma_ms_list")
        config.sigma_ms_list = parse_list(key, value);
    else if (key == "v_const")
        config.v_const = parse_double(key, value);
    else if (key == "floor_frac")
        config.floor_frac = parse_double(key, value);
    else
        throw ConfigError("unknown config key '" + key + "'");
}

void validate_config(const ExperimentConfig& config) {
    const DmftConfig& l = config.loop;
    auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError("config field '" + field + "' " + why);
    };
    if (!(l.grid.dt > 0.0))
        fail("dt", "must be positive");
    if (l.grid.n_steps < 1)
        fail("n_steps", "must be at least 1");
    if (!(l.quench.t_q > 0.0))
        fail("t_q", "must be positive");
    if (l.bath_pairs < 0)
        fail("bath_pairs", "must be nonnegative");
    if (l.noise.sigma_1q < 0.0)
        fail("sigma_1q", "must be nonnegative");
    if (l.noise.sigma_ms < 0.0)
        fail("sigma_ms", "must be nonnegative");
    if (l.realizations < 1)
        fail("realizations", "must be at least 1");
    if (!(l.delta_conv > 0.0))
        fail("delta_conv", "must be positive");
    if (l.max_iters < 1)
        fail("max_iters", "must be at least 1");
    if (l.mixing < 0.0 || l.mixing >= 1.0)
        fail("mixing", "must lie in [0, 1)");
    if (l.workers < 1)
        fail("workers", "must be at least 1");
    if (l.meas.sampled && l.meas.shots < 1)
        fail("shots", "must be at least 1 in sampled mode");
    if (l.gamma < 0.0)
        fail("gamma", "must be nonnegative");
    if (l.mu_fit < 0.0)
        fail("mu_fit", "must be nonnegative");
    if (!(config.floor_frac > 0.0))
        fail("floor_frac", "must be positive");
    for (double s : config.sigma_ms_list)
        if (s < 0.0)
            fail("sigma_ms_list", "entries must be nonnegative");
    if (config.mode != "ed" && config.mode != "hybrid" && config.mode != "eta-sweep" &&
        config.mode != "lindblad-fit")
        fail("mode", "must be one of ed, hybrid, eta-sweep, lindblad-fit");
}

ExperimentConfig make_experiment_config(const std::string& mode, const std::string& path,
                                        const KeyValues& overrides) {
    ExperimentConfig config;
    config.mode = mode;
    config.loop.grid.n_steps = 38;
    if (mode == "lindblad-fit") {
        config.loop.u = 0.0;
        config.loop.bath_pairs = 5;
        config.loop.gamma = 0.2;
    }
    if (!path.empty())
        for (const auto& [k, v] : load_key_values(path))
            apply_key(config, k, v);
    for (const auto& [k, v] : overrides)
        apply_key(config, k, v);
    validate_config(config);
    return config;
}

KeyValues dump_config(const ExperimentConfig& config) {
    const DmftConfig& l = config.loop;
    KeyValues kvs;
    auto add = [&](const std::string& k, const std::string& v) { kvs.emplace_back(k, v); };
    add("mode", config.mode);
    add("dt", format_double(l.grid.dt));
    add("n_steps", std::to_string(l.grid.n_steps));
    add("t_q", format_double(l.quench.t_q));
    add("u", format_double(l.u));
    add("bath_pairs", std::to_string(l.bath_pairs));
    add("sigma_1q", format_double(l.noise.sigma_1q));
    add("sigma_ms", format_double(l.noise.sigma_ms));
    add("realizations", std::to_string(l.realizations));
    add("delta_conv", format_double(l.delta_conv));
    add("max_iters", std::to_string(l.max_iters));
    add("mixing", format_double(l.mixing));
    add("seed", std::to_string(l.seed));
    add("workers", std::to_string(l.workers));
    add("sampled", l.meas.sampled ? "1" : "0");
    add("shots", std::to_string(l.meas.shots));
    add("gamma", format_double(l.gamma));
    add("mu_fit", format_double(l.mu_fit));
    std::string list;
    for (size_t i = 0; i < config.sigma_ms_list.size(); ++i) {
        if (i)
            list += ",";
        list += format_double(config.sigma_ms_list[i]);
    }
    add("sigma_ms_list", list);
    add("v_const", format_double(config.v_const));
    add("floor_frac", format_double(config.floor_frac));
    return kvs;
}

} // namespace qdmft
