#pragma once

// Flat "key = value" problem descriptions.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "grp/physics/registry.hpp"
#include "grp/scheme.hpp"

namespace grp::harness {

enum class StiffMode { Auto, On, Off };

struct ProblemConfig {
    std::string name;
    std::string system;
    Parameters params;
    double domain_left = 0.0, domain_right = 1.0;
    int n_zones = 0;
    double x_disc = 0.0;
    std::vector<double> left_state, right_state;
    std::string profile;  ///< analytic initial data, replaces the two-state form
    std::vector<double> profile_params;
    double cfl = 0.8;
    double t_end = 0.0;
    SolverKind solver = SolverKind::HlliGrp;
    StiffMode stiff = StiffMode::Auto;
    BoundaryKind boundary = BoundaryKind::Transmissive;
    FlattenerMode flattener = FlattenerMode::On;
    LimiterVars limiter = LimiterVars::Primitive;
    bool center_smooth_term = false;
    bool implicit_source_corrector = false;
    EigenState eigen_state = EigenState::Mean;
    SmoothTerm smooth_term = SmoothTerm::Path;
    long max_steps = 1000000;
    std::string output;

    bool two_state() const { return profile.empty(); }
};

// ---- enum spellings -------------------------------------------------------

inline std::string to_string(SolverKind s) {
    switch (s) {
        case SolverKind::HllGrp: return "hll-grp";
        case SolverKind::HlliGrp: return "hlli-grp";
        case SolverKind::Hll: return "hll";
        case SolverKind::Hlli: return "hlli";
    }
    return "?";
}

inline SolverKind parse_solver(const std::string& v) {
    for (auto s : {SolverKind::HllGrp, SolverKind::HlliGrp, SolverKind::Hll, SolverKind::Hlli})
        if (to_string(s) == v) return s;
    throw ConfigError("solver: expected hll-grp, hlli-grp, hll or hlli, got '" + v + "'");
}

inline std::string to_string(BoundaryKind b) {
    switch (b) {
        case BoundaryKind::Transmissive: return "transmissive";
        case BoundaryKind::Periodic: return "periodic";
        case BoundaryKind::Reflective: return "reflective";
        case BoundaryKind::Extrapolated: return "extrapolated";
    }
    return "?";
}

namespace detail {

inline std::string trim(std::string s) {
    auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

inline double parse_real(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    double x = 0.0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty() || !std::isfinite(x))
        throw ConfigError(key + ": not a finite number: '" + t + "'");
    return x;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

// config key -> system parameter name
inline const std::map<std::string, std::string>& physical_keys() {
    static const std::map<std::string, std::string> k{{"gamma", "gamma"}, {"g", "g"},   {"n_manning", "n_manning"},
                                                      {"bx", "bx"},       {"epsilon", "epsilon"}, {"mu", "mu"}};
    return k;
}

}  // namespace detail

/// Parses and validates a config document. Errors name the line or key.
inline ProblemConfig parse_config(const std::string& text) {
    using namespace detail;
    ProblemConfig c;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": missing key");
        if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        try {
            if (key == "name") c.name = val;
            else if (key == "system") c.system = val;
            else if (physical_keys().count(key)) c.params[physical_keys().at(key)] = parse_real(key, val);
            else if (key == "domain_left") c.domain_left = parse_real(key, val);
            else if (key == "domain_right") c.domain_right = parse_real(key, val);
            else if (key == "n_zones") {
                const double n = parse_real(key, val);
                if (n != std::floor(n) || n < 1 || n > 1e8) throw ConfigError("n_zones: expected a positive integer");
                c.n_zones = static_cast<int>(n);
            } else if (key == "x_disc") c.x_disc = parse_real(key, val);
            else if (key == "left_state") c.left_state = parse_list(key, val);
            else if (key == "right_state") c.right_state = parse_list(key, val);
            else if (key == "profile") c.profile = val;
            else if (key == "profile_params") c.profile_params = parse_list(key, val);
            else if (key == "cfl") c.cfl = parse_real(key, val);
            else if (key == "t_end") c.t_end = parse_real(key, val);
            else if (key == "solver") c.solver = parse_solver(val);
            else if (key == "stiff") c.stiff = val == "auto" ? StiffMode::Auto : (parse_bool(key, val) ? StiffMode::On : StiffMode::Off);
            else if (key == "boundary") {
                if (val == "transmissive") c.boundary = BoundaryKind::Transmissive;
                else if (val == "periodic") c.boundary = BoundaryKind::Periodic;
                else if (val == "reflective") c.boundary = BoundaryKind::Reflective;
                else if (val == "extrapolated") c.boundary = BoundaryKind::Extrapolated;
                else throw ConfigError("boundary: expected transmissive, periodic, reflective or extrapolated");
            } else if (key == "flattener") {
                if (val == "on") c.flattener = FlattenerMode::On;
                else if (val == "off") c.flattener = FlattenerMode::Off;
                else if (val == "zero") c.flattener = FlattenerMode::Zero;
                else throw ConfigError("flattener: expected on, off or zero");
            } else if (key == "limiter_vars") {
                if (val == "primitive") c.limiter = LimiterVars::Primitive;
                else if (val == "conserved") c.limiter = LimiterVars::Conserved;
                else throw ConfigError("limiter_vars: expected primitive or conserved");
            } else if (key == "center_smooth_term") c.center_smooth_term = parse_bool(key, val);
            else if (key == "implicit_source_corrector") c.implicit_source_corrector = parse_bool(key, val);
            else if (key == "eigen_state") {
                if (val == "mean") c.eigen_state = EigenState::Mean;
                else if (val == "star") c.eigen_state = EigenState::Star;
                else throw ConfigError("eigen_state: expected mean or star");
            } else if (key == "smooth_term") {
                if (val == "path") c.smooth_term = SmoothTerm::Path;
                else if (val == "linearized") c.smooth_term = SmoothTerm::Linearized;
                else throw ConfigError("smooth_term: expected path or linearized");
            } else if (key == "max_steps") {
                const double n = parse_real(key, val);
                if (n != std::floor(n) || n < 1) throw ConfigError("max_steps: expected a positive integer");
                c.max_steps = static_cast<long>(n);
            } else if (key == "output") c.output = val;
            else throw ConfigError("unknown key '" + key + "'");
        } catch (const ConfigError& e) {
            const std::string msg = e.what();
            if (msg.rfind("line ", 0) == 0) throw;
            throw ConfigError("line " + std::to_string(lineno) + ": " + msg);
        }
    }

    // validation
    if (c.system.empty()) throw ConfigError("missing required key 'system'");
    const auto names = registered_systems();
    if (std::find(names.begin(), names.end(), c.system) == names.end())
        throw ConfigError("system: unknown system '" + c.system + "'");
    const auto allowed = system_parameter_names(c.system);
    for (const auto& [k, v] : c.params) {
        (void)v;
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw ConfigError(k + ": not a parameter of system '" + c.system + "'");
    }
    if (!seen.count("n_zones")) throw ConfigError("missing required key 'n_zones'");
    if (c.n_zones < 8) throw ConfigError("n_zones: need at least 8 zones");
    if (!seen.count("t_end")) throw ConfigError("missing required key 't_end'");
    if (!(c.t_end > 0.0)) throw ConfigError("t_end: must be positive");
    if (!seen.count("domain_left") || !seen.count("domain_right"))
        throw ConfigError("missing required key 'domain_left' or 'domain_right'");
    if (!(c.domain_right > c.domain_left)) throw ConfigError("domain_right: must exceed domain_left");
    if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ConfigError("cfl: must lie in (0, 1]");
    if (c.two_state()) {
        if (c.left_state.empty() || c.right_state.empty())
            throw ConfigError("missing required key 'left_state'/'right_state' (or give 'profile')");
        if (!seen.count("x_disc")) throw ConfigError("missing required key 'x_disc'");
        if (!(c.x_disc > c.domain_left && c.x_disc < c.domain_right))
            throw ConfigError("x_disc: must lie strictly inside the domain");
    } else if (!c.left_state.empty() || !c.right_state.empty() || seen.count("x_disc")) {
        throw ConfigError("profile: cannot be combined with left_state/right_state/x_disc");
    }
    return c;
}

inline ProblemConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

inline SchemeOptions scheme_options(const ProblemConfig& c) {
    SchemeOptions o;
    o.solver = c.solver;
    o.limiter = c.limiter;
    o.flattener = c.flattener;
    o.eigen_state = c.eigen_state;
    o.smooth_term = c.smooth_term;
    o.center_smooth_term = c.center_smooth_term;
    o.implicit_source_corrector = c.implicit_source_corrector;
    return o;
}

}  // namespace grp::harness
