#pragma once

// Grid setup, runs, error norms, convergence tables and CSV output.

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>

#include "grp/harness/config.hpp"
#include "grp/harness/exact_riemann.hpp"

namespace grp::harness {

struct ErrorReport {
    std::vector<std::string> names;  ///< primitive variables
    std::vector<double> l1, l2, linf;
    std::string reference;  ///< exact-riemann, exact-advection, exact-uniform
};

struct ProblemResult {
    SystemPtr sys;
    CellGrid initial, grid;
    RunSummary summary;
    std::optional<ErrorReport> error;
    double drift = 0.0;  ///< max-norm change of the conserved means
};

inline SystemPtr system_for(const ProblemConfig& c) { return make_system(c.system, c.params); }

inline bool use_stiff(const ProblemConfig& c, const System& s) {
    if (c.stiff == StiffMode::Auto) return s.has_stiff_source();
    return c.stiff == StiffMode::On;
}

// ---- analytic profiles ------------------------------------------------------
//
// euler-sine-pulse   params amp, u, p        rho = 1 + amp sin(2 pi x), periodic of unit length
// swe-perturbed-flow params h0, q0, b_x [, amp, x_a, x_b]
// uniform            params = primitive state

namespace detail {

inline void require_params(const ProblemConfig& c, std::size_t lo, std::size_t hi) {
    if (c.profile_params.size() < lo || c.profile_params.size() > hi)
        throw ConfigError("profile_params: profile '" + c.profile + "' takes " + std::to_string(lo) + (lo == hi ? "" : "-" + std::to_string(hi)) + " values");
}

inline Vector pulse_primitive(const ProblemConfig& c, double x, double t) {
    const auto& q = c.profile_params;
    return make_vector({1.0 + q[0] * std::sin(2.0 * std::numbers::pi * (x - q[1] * t)), q[1], 0, 0, q[2]});
}

// 3-point Gauss cell average of the conserved variables
template <class F>
Vector cell_average(const System& s, double xl, double dx, F prim) {
    constexpr std::array<double, 3> n{0.1127016653792583, 0.5, 0.8872983346207417};
    constexpr std::array<double, 3> w{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    Vector u = Vector::Zero(s.size());
    for (std::size_t k = 0; k < 3; ++k) u += w[k] * s.prim_to_cons(prim(xl + n[k] * dx));
    return u;
}

}  // namespace detail

inline void check_profile(const ProblemConfig& c) {
    if (c.two_state()) return;
    if (c.profile == "euler-sine-pulse") {
        if (c.system != "euler") throw ConfigError("profile: euler-sine-pulse needs system = euler");
        detail::require_params(c, 3, 3);
    } else if (c.profile == "swe-perturbed-flow") {
        if (c.system != "swe") throw ConfigError("profile: swe-perturbed-flow needs system = swe");
        detail::require_params(c, 3, 6);
    } else if (c.profile == "uniform") {
        // length checked against the system
    } else {
        throw ConfigError("profile: unknown profile '" + c.profile + "'");
    }
}

/// Initial grid: cell-centre sampling for two-state and perturbed-flow data,
/// cell averages for the smooth pulse.
inline CellGrid initial_grid(const ProblemConfig& c, const System& s) {
    check_profile(c);
    CellGrid g = CellGrid::uniform(c.n_zones, c.domain_left, c.domain_right, c.boundary);
    const auto m = static_cast<std::size_t>(s.size());
    auto as_vec = [&](const std::vector<double>& v, const char* key) {
        if (v.size() != m)
            throw ConfigError(std::string(key) + ": system '" + c.system + "' needs " + std::to_string(m) + " primitive values");
        Vector w(static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i) w(static_cast<Eigen::Index>(i)) = v[i];
        return w;
    };
    for (int j = 0; j < c.n_zones; ++j) {
        const auto js = static_cast<std::size_t>(j);
        const double x = g.center(j);
        Vector w;
        if (c.two_state()) {
            w = x < c.x_disc ? as_vec(c.left_state, "left_state") : as_vec(c.right_state, "right_state");
        } else if (c.profile == "uniform") {
            w = as_vec(c.profile_params, "profile_params");
        } else if (c.profile == "euler-sine-pulse") {
            g.means[js] = detail::cell_average(s, x - 0.5 * g.dx, g.dx, [&](double y) { return detail::pulse_primitive(c, y, 0.0); });
            continue;
        } else {  // swe-perturbed-flow
            const auto& q = c.profile_params;
            const double amp = q.size() > 3 ? q[3] : 0.2, xa = q.size() > 4 ? q[4] : 1.0, xb = q.size() > 5 ? q[5] : 1.25;
            const double h = q[0] * ((x >= xa && x <= xb) ? 1.0 + amp : 1.0);
            w = make_vector({h, q[1] / h, 0.0, q[2] * x});
        }
        const auto bad = s.admissibility(s.prim_to_cons(w));
        if (bad) throw ConfigError("initial state not admissible: " + *bad);
        g.means[js] = s.prim_to_cons(w);
    }
    return g;
}

/// Reference solution in primitive variables at every zone, if one exists.
inline std::optional<std::pair<std::vector<Vector>, std::string>> reference_solution(const ProblemConfig& c,
                                                                                    const System& s,
                                                                                    const CellGrid& g, double t) {
    std::vector<Vector> ref(static_cast<std::size_t>(g.n_zones));
    if (!c.two_state()) {
        if (c.profile == "uniform") {
            for (auto& r : ref) r = s.cons_to_prim(initial_grid(c, s).means[0]);
            return std::make_pair(ref, std::string("exact-uniform"));
        }
        if (c.profile == "euler-sine-pulse" && c.boundary == BoundaryKind::Periodic) {
            for (int j = 0; j < g.n_zones; ++j)
                ref[static_cast<std::size_t>(j)] = s.cons_to_prim(detail::cell_average(
                    s, g.center(j) - 0.5 * g.dx, g.dx, [&](double y) { return detail::pulse_primitive(c, y, t); }));
            return std::make_pair(ref, std::string("exact-advection"));
        }
        return std::nullopt;
    }
    if (c.system != "euler" || c.boundary != BoundaryKind::Transmissive) return std::nullopt;
    const double gamma = s.parameters().at("gamma");
    const Vector wl = make_vector({c.left_state[0], c.left_state[1], c.left_state[2], c.left_state[3], c.left_state[4]});
    const Vector wr = make_vector({c.right_state[0], c.right_state[1], c.right_state[2], c.right_state[3], c.right_state[4]});
    for (int j = 0; j < g.n_zones; ++j)
        ref[static_cast<std::size_t>(j)] = euler_exact_riemann(wl, wr, gamma, (g.center(j) - c.x_disc) / t);
    return std::make_pair(ref, std::string("exact-riemann"));
}

inline ErrorReport error_norms(const System& s, const CellGrid& g, const std::vector<Vector>& ref, std::string label) {
    ErrorReport r;
    r.names = s.primitive_names();
    const auto m = r.names.size();
    r.l1.assign(m, 0.0);
    r.l2.assign(m, 0.0);
    r.linf.assign(m, 0.0);
    for (std::size_t j = 0; j < g.means.size(); ++j) {
        const Vector w = s.cons_to_prim(g.means[j]);
        for (std::size_t i = 0; i < m; ++i) {
            const double e = std::abs(w(static_cast<Eigen::Index>(i)) - ref[j](static_cast<Eigen::Index>(i)));
            r.l1[i] += e * g.dx;
            r.l2[i] += e * e * g.dx;
            r.linf[i] = std::max(r.linf[i], e);
        }
    }
    for (auto& v : r.l2) v = std::sqrt(v);
    r.reference = std::move(label);
    return r;
}

inline double max_drift(const CellGrid& a, const CellGrid& b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.means.size(); ++j) d = std::max(d, inf_norm(Vector(a.means[j] - b.means[j])));
    return d;
}

inline ProblemResult run_problem(const ProblemConfig& c, const StepObserver& observer = {}) {
    ProblemResult r;
    r.sys = system_for(c);
    r.initial = initial_grid(c, *r.sys);
    r.grid = r.initial;
    r.summary = run_to_time(*r.sys, r.grid, c.t_end, c.cfl, scheme_options(c), SchemeForm::Auto, use_stiff(c, *r.sys),
                            c.max_steps, observer);
    r.drift = max_drift(r.grid, r.initial);
    if (auto ref = reference_solution(c, *r.sys, r.grid, c.t_end))
        r.error = error_norms(*r.sys, r.grid, ref->first, ref->second);
    return r;
}

// ---- CSV ---------------------------------------------------------------------

inline std::string csv_text(const CellGrid& g, const System& s) {
    std::ostringstream out;
    out << std::setprecision(17);
    const auto names = s.primitive_names();
    const bool swe = s.name() == "swe";
    out << "# x";
    for (const auto& n : names) out << ',' << n;
    if (swe) out << ",h+b";
    out << '\n';
    for (int j = 0; j < g.n_zones; ++j) {
        const Vector w = s.cons_to_prim(g.means[static_cast<std::size_t>(j)]);
        out << g.center(j);
        for (Eigen::Index i = 0; i < w.size(); ++i) out << ',' << w(i);
        if (swe) out << ',' << w(0) + w(3);
        out << '\n';
    }
    return out.str();
}

inline void write_csv(const CellGrid& g, const System& s, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f << csv_text(g, s);
    if (!f) throw Error("write to '" + path + "' failed");
}

// ---- convergence -----------------------------------------------------------

struct ConvergenceRow {
    int n_zones = 0;
    double l1 = 0.0;
    std::optional<double> order;  ///< empty on the first row or at rounding-level errors
};

/// L1 error of the first primitive variable on each grid.
inline std::vector<ConvergenceRow> convergence_study(const ProblemConfig& base, const std::vector<int>& grids) {
    std::vector<ConvergenceRow> rows;
    for (int n : grids) {
        ProblemConfig c = base;
        c.n_zones = n;
        const auto r = run_problem(c);
        if (!r.error) throw ConfigError("convergence: problem '" + base.name + "' has no reference solution");
        ConvergenceRow row{n, r.error->l1[0], std::nullopt};
        if (!rows.empty()) {
            const auto& prev = rows.back();
            constexpr double rounding = 1e-13;
            if (prev.l1 > rounding && row.l1 > rounding)
                row.order = std::log(prev.l1 / row.l1) / std::log(static_cast<double>(n) / prev.n_zones);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace grp::harness
