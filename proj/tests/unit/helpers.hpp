#pragma once

#include <random>

#include "grp/physics/registry.hpp"

namespace grp::testing {

/// Random admissible primitive state for each registered system.
inline Vector random_primitive(const System& sys, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto in = [&](double a, double b) { return a + (b - a) * U(rng); };
    const std::string n = sys.name();
    if (n == "euler") return make_vector({in(0.1, 3), in(-2, 2), in(-1, 1), in(-1, 1), in(0.1, 3)});
    if (n == "mhd")
        return make_vector({in(0.1, 3), in(-2, 2), in(-1, 1), in(-1, 1), in(0.1, 3), in(-3, 3), in(-3, 3)});
    if (n == "swe") return make_vector({in(0.1, 3), in(-1.5, 1.5), in(-1, 1), in(-0.5, 0.5)});
    // nsrelax: keep u away from 0 (defective there) but allow both signs
    const double u = (U(rng) < 0.5 ? -1.0 : 1.0) * in(0.5, 20);
    return make_vector({in(0.5, 3), u, in(500, 5000), in(-5, 5), in(-5, 5)});
}

inline Vector random_state(const System& sys, std::mt19937_64& rng) {
    return sys.prim_to_cons(random_primitive(sys, rng));
}

inline std::vector<SystemPtr> all_systems() {
    return {make_system("euler", {{"gamma", 1.4}}), make_system("mhd", {{"gamma", 5.0 / 3.0}, {"bx", 0.75}}),
            make_system("swe", {{"g", 9.81}}), make_system("nsrelax", {{"mu", 0.2}, {"epsilon", 1e-2}})};
}

}  // namespace grp::testing
