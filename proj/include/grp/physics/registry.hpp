#pragma once

// Name -> system factory used by the CLI and the harness.

#include <set>

#include "grp/physics/euler.hpp"
#include "grp/physics/mhd.hpp"
#include "grp/physics/ns_relax.hpp"
#include "grp/physics/shallow_water.hpp"

namespace grp {

inline std::vector<std::string> registered_systems() { return {"euler", "mhd", "swe", "nsrelax"}; }

/// Parameter names each system accepts.
inline std::set<std::string> system_parameter_names(const std::string& name) {
    if (name == "euler") return {"gamma"};
    if (name == "mhd") return {"gamma", "bx"};
    if (name == "swe") return {"g", "n_manning"};
    if (name == "nsrelax")
        return {"gamma", "R", "epsilon", "Pr", "mu", "sutherland", "mu0", "T0", "beta", "s", "kappa"};
    throw ConfigError("unknown system '" + name + "'");
}

inline SystemPtr make_system(const std::string& name, const Parameters& params = {}) {
    const auto allowed = system_parameter_names(name);
    for (const auto& [key, value] : params)
        if (!allowed.contains(key)) throw ConfigError("system '" + name + "' has no parameter '" + key + "'");
    auto get = [&](const char* key, double fallback) {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (name == "euler") return std::make_shared<EulerSystem>(EulerParams{get("gamma", 1.4)});
    if (name == "mhd") return std::make_shared<MhdSystem>(MhdParams{get("gamma", 5.0 / 3.0), get("bx", 0.0)});
    if (name == "swe") return std::make_shared<ShallowWaterSystem>(SweParams{get("g", 9.81), get("n_manning", 0.0)});
    NsRelaxParams p;
    p.gamma = get("gamma", p.gamma);
    p.R = get("R", p.R);
    p.epsilon = get("epsilon", p.epsilon);
    p.Pr = get("Pr", p.Pr);
    p.mu = get("mu", p.mu);
    p.sutherland = get("sutherland", 0.0) != 0.0;
    p.mu0 = get("mu0", p.mu0);
    p.T0 = get("T0", p.T0);
    p.beta = get("beta", p.beta);
    p.s = get("s", p.s);
    p.kappa_enabled = get("kappa", 0.0) != 0.0;
    return std::make_shared<NsRelaxSystem>(p);
}

}  // namespace grp
