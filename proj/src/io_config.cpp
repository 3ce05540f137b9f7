#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "xxz/io.hpp"

namespace xxz {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument(where + ": cannot parse '" + value + "' as a number");
    }
}

int parse_int(const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument(where + ": cannot parse '" + value + "' as an integer");
    }
}

std::uint64_t parse_u64(const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument(where + ": cannot parse '" + value + "' as an unsigned integer");
    }
}

bool parse_bool(const std::string& value, const std::string& where) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw std::invalid_argument(where + ": cannot parse '" + value + "' as a boolean");
}

void apply_key(ScanConfig& cfg, const std::string& key, const std::string& value,
               const std::string& where) {
    if (key == "n_rungs") cfg.n_rungs = parse_int(value, where);
    else if (key == "mode") cfg.mode = scan_mode_from_string(value);
    else if (key == "alpha_min") cfg.alpha.min = parse_double(value, where);
    else if (key == "alpha_max") cfg.alpha.max = parse_double(value, where);
    else if (key == "alpha_steps") cfg.alpha.steps = parse_int(value, where);
    else if (key == "delta_min") cfg.delta.min = parse_double(value, where);
    else if (key == "delta_max") cfg.delta.max = parse_double(value, where);
    else if (key == "delta_steps") cfg.delta.steps = parse_int(value, where);
    else if (key == "observables") cfg.observables = parse_observables(value);
    else if (key == "out") cfg.out = value;
    else if (key == "cache_dir") cfg.cache_dir = value;
    else if (key == "workers") cfg.workers = parse_int(value, where);
    else if (key == "seed") cfg.solver.seed = parse_u64(value, where);
    else if (key == "tol") cfg.solver.tol = parse_double(value, where);
    else if (key == "max_iter") cfg.solver.max_iter = parse_int(value, where);
    else if (key == "timings") cfg.timings = parse_bool(value, where);
    else throw std::invalid_argument(where + ": unknown key '" + key + "'");
}

}  // namespace

Observables parse_observables(const std::string& list) {
    Observables obs;
    obs.gap = obs.q_leg = obs.q_rung = obs.corr = obs.ggm = false;
    std::stringstream ss(list);
    std::string item;
    bool seen = false;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        seen = true;
        if (item == "all") obs.gap = obs.q_leg = obs.q_rung = obs.corr = obs.ggm = true;
        else if (item == "gap") obs.gap = true;
        else if (item == "q_leg") obs.q_leg = true;
        else if (item == "q_rung") obs.q_rung = true;
        else if (item == "corr") obs.corr = true;
        else if (item == "ggm") obs.ggm = true;
        else throw std::invalid_argument("observables: unknown observable '" + item + "'");
    }
    if (!seen) throw std::invalid_argument("observables: set must be nonempty");
    return obs;
}

std::string observables_to_string(const Observables& obs) {
    std::string out;
    auto add = [&](bool on, const char* name) {
        if (!on) return;
        if (!out.empty()) out += ',';
        out += name;
    };
    add(obs.gap, "gap");
    add(obs.q_leg, "q_leg");
    add(obs.q_rung, "q_rung");
    add(obs.corr, "corr");
    add(obs.ggm, "ggm");
    return out;
}

ScanConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides,
                             const std::string& origin) {
    ScanConfig cfg;  // documented defaults: 41x41 over [-2,2]^2, N = 16, all observables

    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        const std::string where = origin + ":" + std::to_string(line_no);
        if (eq == std::string::npos) {
            throw std::invalid_argument(where + ": expected key=value, got '" + t + "'");
        }
        apply_key(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)), where);
    }

    if (overrides.n_rungs) cfg.n_rungs = *overrides.n_rungs;
    if (overrides.mode) cfg.mode = scan_mode_from_string(*overrides.mode);
    if (overrides.alpha_min) cfg.alpha.min = *overrides.alpha_min;
    if (overrides.alpha_max) cfg.alpha.max = *overrides.alpha_max;
    if (overrides.alpha_steps) cfg.alpha.steps = *overrides.alpha_steps;
    if (overrides.delta_min) cfg.delta.min = *overrides.delta_min;
    if (overrides.delta_max) cfg.delta.max = *overrides.delta_max;
    if (overrides.delta_steps) cfg.delta.steps = *overrides.delta_steps;
    if (overrides.observables) cfg.observables = parse_observables(*overrides.observables);
    if (overrides.out) cfg.out = *overrides.out;
    if (overrides.cache_dir) cfg.cache_dir = *overrides.cache_dir;
    if (overrides.workers) cfg.workers = *overrides.workers;
    if (overrides.seed) cfg.solver.seed = *overrides.seed;
    if (overrides.tol) cfg.solver.tol = *overrides.tol;
    if (overrides.max_iter) cfg.solver.max_iter = *overrides.max_iter;
    if (overrides.timings) cfg.timings = *overrides.timings;

    cfg.validate();
    return cfg;
}

ScanConfig parse_config(const std::optional<std::string>& file_path, const ConfigOverrides& overrides) {
    std::string text;
    std::string origin = "<defaults>";
    if (file_path) {
        std::ifstream in(*file_path);
        if (!in) throw std::runtime_error("config: cannot open '" + *file_path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        text = buffer.str();
        origin = *file_path;
    }
    return parse_config_text(text, overrides, origin);
}

}  // namespace xxz
