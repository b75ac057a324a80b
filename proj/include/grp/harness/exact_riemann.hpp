#pragma once

// Exact Riemann solver for the ideal-gas Euler equations (test oracle only).
// Primitive states (rho, u, v, w, p); v, w ride with the contact.

#include <cmath>

#include "grp/error.hpp"
#include "grp/linalg.hpp"

namespace grp::harness {

struct StarRegion {
    double p = 0.0, u = 0.0;
};

namespace detail {

struct Side {
    double rho, u, p, c;
};

// f_K(p) and its derivative
inline std::pair<double, double> pressure_function(double p, const Side& s, double g) {
    if (p > s.p) {
        const double a = 2.0 / ((g + 1.0) * s.rho), b = (g - 1.0) / (g + 1.0) * s.p;
        const double q = std::sqrt(a / (p + b));
        return {(p - s.p) * q, q * (1.0 - 0.5 * (p - s.p) / (b + p))};
    }
    const double r = p / s.p;
    const double f = 2.0 * s.c / (g - 1.0) * (std::pow(r, (g - 1.0) / (2.0 * g)) - 1.0);
    return {f, 1.0 / (s.rho * s.c) * std::pow(r, -(g + 1.0) / (2.0 * g))};
}

}  // namespace detail

inline StarRegion euler_star_region(double rl, double ul, double pl, double rr, double ur, double pr, double g) {
    if (!(rl > 0 && rr > 0 && pl > 0 && pr > 0)) throw AdmissibilityError("exact riemann: non-positive input");
    const detail::Side L{rl, ul, pl, std::sqrt(g * pl / rl)}, R{rr, ur, pr, std::sqrt(g * pr / rr)};
    if (2.0 * (L.c + R.c) / (g - 1.0) <= ur - ul) throw AdmissibilityError("exact riemann: vacuum is generated");

    // two-rarefaction guess
    const double z = (g - 1.0) / (2.0 * g);
    double p = std::pow((L.c + R.c - 0.5 * (g - 1.0) * (ur - ul)) / (L.c / std::pow(pl, z) + R.c / std::pow(pr, z)),
                        1.0 / z);
    p = std::max(p, 1e-14 * std::max(pl, pr));
    for (int it = 0; it < 100; ++it) {
        const auto [fl, dl] = detail::pressure_function(p, L, g);
        const auto [fr, dr] = detail::pressure_function(p, R, g);
        const double res = fl + fr + (ur - ul);
        double next = p - res / (dl + dr);
        if (next <= 0.0) next = 0.5 * p;
        const double change = std::abs(next - p) / (0.5 * (next + p));
        p = next;
        if (change < 1e-15 || std::abs(res) < 1e-12 * (std::abs(ur - ul) + L.c + R.c)) {
            const double u = 0.5 * (ul + ur) + 0.5 * (detail::pressure_function(p, R, g).first -
                                                     detail::pressure_function(p, L, g).first);
            return {p, u};
        }
    }
    throw ConvergenceError("exact riemann: Newton iteration did not converge", 100, 0.0);
}

/// Self-similar solution at xi = x / t.
inline Vector euler_exact_riemann(const Vector& wl, const Vector& wr, double g, double xi) {
    const StarRegion s = euler_star_region(wl(0), wl(1), wl(4), wr(0), wr(1), wr(4), g);
    const bool left = xi <= s.u;
    const Vector& w = left ? wl : wr;
    const double sgn = left ? 1.0 : -1.0;  // mirror the right side onto the left formulas
    const double rho = w(0), u = sgn * w(1), p = w(4), c = std::sqrt(g * p / rho);
    const double x = sgn * xi, us = sgn * s.u;
    Vector out = w;
    auto set = [&](double r, double vel, double pr) {
        out(0) = r;
        out(1) = sgn * vel;
        out(4) = pr;
    };
    const double gm = (g - 1.0) / (g + 1.0);
    if (s.p > p) {  // shock
        const double ratio = s.p / p;
        const double speed = u - c * std::sqrt((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g));
        if (x <= speed)
            set(rho, u, p);
        else
            set(rho * (ratio + gm) / (gm * ratio + 1.0), us, s.p);
    } else {  // rarefaction
        const double cs = c * std::pow(s.p / p, (g - 1.0) / (2.0 * g));
        const double head = u - c, tail = us - cs;
        if (x <= head)
            set(rho, u, p);
        else if (x >= tail)
            set(rho * std::pow(s.p / p, 1.0 / g), us, s.p);
        else {
            const double k = 2.0 / (g + 1.0) + gm / c * (u - x);
            set(rho * std::pow(k, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * u + x),
                p * std::pow(k, 2.0 * g / (g - 1.0)));
        }
    }
    return out;
}

}  // namespace grp::harness
