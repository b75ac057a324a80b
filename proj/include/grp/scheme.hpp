#pragma once

// One-step second-order finite-volume driver: MC reconstruction, CFL step,
// flux-form and fluctuation-form updates, their stiff-source variants and the
// time loop.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "grp/ader.hpp"
#include "grp/grp_gradient.hpp"
#include "grp/riemann.hpp"

namespace grp {

enum class SolverKind { HllGrp, HlliGrp, Hll, Hlli };
enum class BoundaryKind { Transmissive, Periodic, Reflective, Extrapolated };  ///< Extrapolated: linear in the means
enum class LimiterVars { Primitive, Conserved };
enum class EigenState { Mean, Star };      ///< where the HLLI eigenfields are evaluated
enum class SmoothTerm { Path, Linearized };  ///< in-cell term of the fluctuation form
enum class SchemeForm { Auto, Flux, Fluctuation };

inline bool uses_grp(SolverKind s) { return s == SolverKind::HllGrp || s == SolverKind::HlliGrp; }
inline bool uses_hlli(SolverKind s) { return s == SolverKind::HlliGrp || s == SolverKind::Hlli; }

struct SchemeOptions {
    SolverKind solver = SolverKind::HlliGrp;
    LimiterVars limiter = LimiterVars::Primitive;
    FlattenerMode flattener = FlattenerMode::On;
    WaveSelection waves = WaveSelection::linearly_degenerate();
    EigenState eigen_state = EigenState::Mean;
    SmoothTerm smooth_term = SmoothTerm::Path;
    bool center_smooth_term = false;
    /// stiff path only: relax the update through (I - dt/2 dS/dU)^-1 around the predictor
    bool implicit_source_corrector = false;
    double floor = 1e-12;
    long max_floors = 100000;  ///< per run
    AderOptions ader{};
};

struct CellGrid {
    int n_zones = 0;
    double dx = 0.0;
    double x_origin = 0.0;
    std::vector<Vector> means;
    std::vector<Vector> gradients;  ///< last limited slopes, per unit length
    BoundaryKind boundary = BoundaryKind::Transmissive;
    static constexpr int ghost_depth = 2;

    static CellGrid uniform(int n, double x_left, double x_right, BoundaryKind bc) {
        if (n < 1 || !(x_right > x_left)) throw ConfigError("grid: need n >= 1 and x_right > x_left");
        CellGrid g;
        g.n_zones = n;
        g.dx = (x_right - x_left) / n;
        g.x_origin = x_left;
        g.boundary = bc;
        g.means.resize(static_cast<std::size_t>(n));
        g.gradients.resize(static_cast<std::size_t>(n));
        return g;
    }

    double center(int j) const { return x_origin + (j + 0.5) * dx; }
};

struct StepReport {
    double dt_used = 0.0;
    double max_signal_speed = 0.0;
    int floors_applied = 0;
    int faces_degraded = 0;
    int picard_failures = 0;
};

/// Per-component MC-limited slope per unit length.
inline Vector mc_reconstruct(const Vector& um, const Vector& u0, const Vector& up, double dx) {
    Vector s(u0.size());
    for (Eigen::Index i = 0; i < u0.size(); ++i) {
        const double dm = u0(i) - um(i), dp = up(i) - u0(i);
        if (dm * dp <= 0.0) {
            s(i) = 0.0;
            continue;
        }
        const double c = 0.5 * (dm + dp);
        const double mag = std::min({2.0 * std::abs(dm), 2.0 * std::abs(dp), std::abs(c)});
        s(i) = std::copysign(mag, c) / dx;
    }
    return s;
}

inline double compute_dt(const System& sys, const CellGrid& grid, double cfl) {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("compute_dt: cfl must lie in (0, 1]");
    double smax = 0.0;
    for (const auto& u : grid.means) {
        sys.require_admissible(u);
        smax = std::max(smax, sys.max_signal_speed(u));
    }
    if (!(smax >= 1e-30)) throw Error("compute_dt: zero signal speed");
    return cfl * grid.dx / smax;
}

namespace detail {

struct Extended {
    std::vector<Vector> u, g;  ///< n + 4 entries, interior j at j + 2
};

inline Vector reflect(Vector u) {
    u(1) = -u(1);
    return u;
}

inline Extended extend(const System& sys, const CellGrid& grid, const SchemeOptions& opt) {
    const int n = grid.n_zones;
    const auto& m = grid.means;
    Extended e;
    e.u.resize(static_cast<std::size_t>(n + 4));
    for (int j = 0; j < n; ++j) e.u[static_cast<std::size_t>(j + 2)] = m[static_cast<std::size_t>(j)];
    auto at = [&](int j) -> const Vector& { return m[static_cast<std::size_t>(j)]; };
    switch (grid.boundary) {
        case BoundaryKind::Periodic:
            e.u[0] = at((n - 2 + 2 * n) % n);
            e.u[1] = at(n - 1);
            e.u[static_cast<std::size_t>(n + 2)] = at(0);
            e.u[static_cast<std::size_t>(n + 3)] = at(1 % n);
            break;
        case BoundaryKind::Reflective:
            e.u[1] = reflect(at(0));
            e.u[0] = reflect(at(std::min(1, n - 1)));
            e.u[static_cast<std::size_t>(n + 2)] = reflect(at(n - 1));
            e.u[static_cast<std::size_t>(n + 3)] = reflect(at(std::max(n - 2, 0)));
            break;
        case BoundaryKind::Transmissive:
            e.u[0] = e.u[1] = at(0);
            e.u[static_cast<std::size_t>(n + 2)] = e.u[static_cast<std::size_t>(n + 3)] = at(n - 1);
            break;
        case BoundaryKind::Extrapolated: {
            // falls back to a copy where the straight line leaves the admissible set
            auto line = [&](int a, int b, int k) -> Vector {
                Vector v = at(a) + k * (at(a) - at(b));
                if (sys.admissibility(v).has_value() || !v.allFinite()) return at(a);
                return v;
            };
            const int in = std::min(1, n - 1), last = n - 1, prev = std::max(n - 2, 0);
            e.u[1] = line(0, in, 1);
            e.u[0] = line(0, in, 2);
            e.u[static_cast<std::size_t>(n + 2)] = line(last, prev, 1);
            e.u[static_cast<std::size_t>(n + 3)] = line(last, prev, 2);
            break;
        }
    }

    const int m_size = sys.size();
    e.g.assign(static_cast<std::size_t>(n + 4), Vector::Zero(m_size));
    std::vector<Vector> w(e.u.size());
    for (std::size_t k = 0; k < e.u.size(); ++k)
        w[k] = opt.limiter == LimiterVars::Primitive ? sys.cons_to_prim(e.u[k]) : e.u[k];
    for (int k = 1; k <= n + 2; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        if (grid.boundary == BoundaryKind::Transmissive && (k == 1 || k == n + 2)) continue;
        Vector s = mc_reconstruct(w[ks - 1], w[ks], w[ks + 1], grid.dx);
        if (opt.limiter == LimiterVars::Primitive) s = sys.cons_prim_jacobian(w[ks]) * s;
        const Vector lo = e.u[ks] - 0.5 * grid.dx * s, hi = e.u[ks] + 0.5 * grid.dx * s;
        if (sys.admissibility(lo).has_value() || sys.admissibility(hi).has_value() || !s.allFinite())
            s.setZero();
        e.g[ks] = s;
    }
    return e;
}

struct FaceTraces {
    Vector ul, ur, gl, gr;
    const Vector* half_l = nullptr;  ///< ADER half-time traces (stiff path)
    const Vector* half_r = nullptr;
};

// Half-time traces used by HLLI and by the supersonic branch.
inline std::pair<Vector, Vector> half_time_traces(const System& sys, const FaceTraces& f, double dt,
                                                  const SchemeOptions& opt, StepReport& rep) {
    if (f.half_l && f.half_r) {
        if (!sys.admissibility(*f.half_l).has_value() && !sys.admissibility(*f.half_r).has_value())
            return {*f.half_l, *f.half_r};
        ++rep.faces_degraded;
        return {f.ul, f.ur};
    }
    if (!uses_grp(opt.solver)) return {f.ul, f.ur};
    Vector hl = evolve_state(sys, f.ul, f.gl, 0.0, 0.5 * dt);
    Vector hr = evolve_state(sys, f.ur, f.gr, 0.0, 0.5 * dt);
    if (sys.admissibility(hl).has_value() || sys.admissibility(hr).has_value()) {
        ++rep.faces_degraded;
        return {f.ul, f.ur};
    }
    return {hl, hr};
}

inline Vector hlli_term(const System& sys, const WaveSpeedPair& s, const Vector& hl, const Vector& hr,
                        const Vector& star_half, const SchemeOptions& opt, StepReport& rep) {
    const double phi = flattener(sys, hl, hr, opt.flattener);
    if (phi == 0.0) return Vector::Zero(hl.size());
    const Vector at = opt.eigen_state == EigenState::Mean ? Vector(0.5 * (hl + hr)) : star_half;
    try {
        return hlli_correction(s, phi, eigensystem(sys, at, opt.waves), hr - hl);
    } catch (const Error&) {
        ++rep.faces_degraded;
        return Vector::Zero(hl.size());
    }
}

/// Time-centring contribution from the fan: returns (c, U*^{n+1/2}) where the
/// face flux is F* + c. Non-stiff: c = -(dt/2) A(U*)^2 g*; stiff: A(U*1/2)(U*1 - U*1/2).
inline std::pair<Vector, Vector> fan_centring(const System& sys, const GrpFaceInput& in, bool noncons, bool stiff,
                                              double dt, const SchemeOptions& opt, StepReport& rep) {
    Vector zero = Vector::Zero(in.ul.size());
    GrpFaceSolution sol;
    try {
        sol = noncons ? grp_gradient_noncons(sys, in) : grp_gradient_conservative(sys, in);
    } catch (const Error&) {
        ++rep.faces_degraded;
        return {zero, in.u_star};
    }
    if (sol.degraded) ++rep.faces_degraded;
    if (stiff) {
        try {
            const AderState fan = ader_predict(sys, in.u_star, sol.grad_star, dt, opt.ader);
            return {char_matrix(sys, fan.u_half) * (fan.u_one - fan.u_half), fan.u_half};
        } catch (const ConvergenceError&) {
            ++rep.picard_failures;
        } catch (const Error&) {
            ++rep.faces_degraded;
        }
        return {zero, in.u_star};
    }
    if (sol.degraded) return {zero, in.u_star};
    const Matrix a = char_matrix(sys, in.u_star);
    const Vector ag = a * sol.grad_star;
    Vector star_half = in.u_star - 0.5 * dt * ag;
    if (sys.admissibility(star_half).has_value()) star_half = in.u_star;
    return {-0.5 * dt * (a * ag), star_half};
}

inline Vector face_flux(const System& sys, const FaceTraces& f, double dt, bool stiff, const SchemeOptions& opt,
                        StepReport& rep) {
    const WaveSpeedPair s = wave_speed_estimates(sys, f.ul, f.ur);
    const auto [hl, hr] = half_time_traces(sys, f, dt, opt, rep);
    if (s.s_left >= 0.0) return sys.flux(hl);
    if (s.s_right <= 0.0) return sys.flux(hr);
    const Vector fl = sys.flux(f.ul), fr = sys.flux(f.ur);
    const Vector u_star = hll_state_conservative(f.ul, f.ur, fl, fr, s);
    Vector flux = hll_flux(f.ul, f.ur, fl, fr, s);
    Vector star_half = u_star;
    if (uses_grp(opt.solver)) {
        const auto [c, sh] = fan_centring(sys, {f.ul, f.ur, f.gl, f.gr, s, u_star}, false, stiff, dt, opt, rep);
        flux += c;
        star_half = sh;
    }
    if (uses_hlli(opt.solver)) flux -= hlli_term(sys, s, hl, hr, star_half, opt, rep);
    return flux;
}

inline std::pair<Vector, Vector> face_fluctuations(const System& sys, const FaceTraces& f, double dt, bool stiff,
                                                   const SchemeOptions& opt, StepReport& rep) {
    const WaveSpeedPair s = wave_speed_estimates(sys, f.ul, f.ur);
    const auto [hl, hr] = half_time_traces(sys, f, dt, opt, rep);
    if (s.s_left >= 0.0) return {path_jump(sys, f.ul, hl), path_jump(sys, hl, f.ur)};
    if (s.s_right <= 0.0) return {path_jump(sys, f.ul, hr), path_jump(sys, hr, f.ur)};
    Vector u_star;
    try {
        u_star = hll_state_noncons(sys, f.ul, f.ur, s).u_star;
    } catch (const Error&) {  // no convergence, or the path left the admissible set
        ++rep.faces_degraded;
        u_star = hll_state_conservative(f.ul, f.ur, sys.flux(f.ul), sys.flux(f.ur), s);
    }
    auto [dm, dp] = hll_fluctuations(s, u_star, f.ul, f.ur);
    Vector star_half = u_star;
    if (uses_grp(opt.solver)) {
        const auto [c, sh] = fan_centring(sys, {f.ul, f.ur, f.gl, f.gr, s, u_star}, true, stiff, dt, opt, rep);
        dm += c;
        dp -= c;
        star_half = sh;
    }
    if (uses_hlli(opt.solver)) {
        const Vector corr = hlli_term(sys, s, hl, hr, star_half, opt, rep);
        dm -= corr;
        dp += corr;
    }
    return {dm, dp};
}

inline AderState fallback_predictor(const System& sys, const Vector& u, const Vector& g, double dt) {
    const Vector ag = char_matrix(sys, u) * g;
    return {u - 0.5 * dt * ag, g, u - dt * ag, g, 0, false};
}

inline int finish_cells(const System& sys, CellGrid& grid, std::vector<Vector>&& next, const SchemeOptions& opt) {
    int floors = 0;
    for (auto& u : next) {
        floors += sys.apply_floors(u, opt.floor);
        sys.require_admissible(u);
    }
    grid.means = std::move(next);
    return floors;
}

enum class Form { Flux, Fluctuation };

inline StepReport step(const System& sys, CellGrid& grid, double dt, const SchemeOptions& opt, Form form,
                       bool stiff) {
    if (!(dt > 0.0)) throw ConfigError("step: dt must be positive");
    const int n = grid.n_zones;
    StepReport rep;
    rep.dt_used = dt;
    for (const auto& u : grid.means) rep.max_signal_speed = std::max(rep.max_signal_speed, sys.max_signal_speed(u));

    const Extended e = extend(sys, grid, opt);
    const double dx = grid.dx, r = dt / dx;
    auto ix = [](int k) { return static_cast<std::size_t>(k); };

    std::vector<AderState> ader;
    std::vector<Vector> trace_lo, trace_hi;
    if (stiff) {
        ader.resize(e.u.size());
        trace_lo.resize(e.u.size());
        trace_hi.resize(e.u.size());
        for (int k = 1; k <= n + 2; ++k) {
            try {
                ader[ix(k)] = ader_predict(sys, e.u[ix(k)], e.g[ix(k)], dt, opt.ader);
            } catch (const ConvergenceError&) {
                ++rep.picard_failures;
                ader[ix(k)] = fallback_predictor(sys, e.u[ix(k)], e.g[ix(k)], dt);
            } catch (const AdmissibilityError&) {
                ++rep.picard_failures;
                ader[ix(k)] = fallback_predictor(sys, e.u[ix(k)], e.g[ix(k)], dt);
            }
            trace_lo[ix(k)] = cell_face_trace(ader[ix(k)], Side::Left, dx);
            trace_hi[ix(k)] = cell_face_trace(ader[ix(k)], Side::Right, dx);
        }
    }

    auto traces = [&](int face) {
        const int kl = face + 1, kr = face + 2;
        FaceTraces f{e.u[ix(kl)] + 0.5 * dx * e.g[ix(kl)], e.u[ix(kr)] - 0.5 * dx * e.g[ix(kr)], e.g[ix(kl)],
                     e.g[ix(kr)]};
        if (stiff) {
            f.half_l = &trace_hi[ix(kl)];
            f.half_r = &trace_lo[ix(kr)];
        }
        return f;
    };

    std::vector<Vector> next(grid.means);
    if (form == Form::Flux) {
        std::vector<Vector> flux(ix(n + 1));
        for (int face = 0; face <= n; ++face) flux[ix(face)] = face_flux(sys, traces(face), dt, stiff, opt, rep);
        for (int j = 0; j < n; ++j) next[ix(j)] -= r * (flux[ix(j + 1)] - flux[ix(j)]);
    } else {
        std::vector<Vector> dminus(ix(n + 1)), dplus(ix(n + 1));
        for (int face = 0; face <= n; ++face) {
            auto [dm, dp] = face_fluctuations(sys, traces(face), dt, stiff, opt, rep);
            dminus[ix(face)] = std::move(dm);
            dplus[ix(face)] = std::move(dp);
        }
        for (int j = 0; j < n; ++j) {
            const int k = j + 2;
            Vector u = e.u[ix(k)], g = e.g[ix(k)];
            if (stiff && opt.center_smooth_term) {
                u = ader[ix(k)].u_half;
                g = ader[ix(k)].g_half;
            }
            Vector smooth;
            if (opt.smooth_term == SmoothTerm::Linearized)
                smooth = dt * (char_matrix(sys, u) * g);
            else
                smooth = r * path_jump(sys, u - 0.5 * dx * g, u + 0.5 * dx * g);
            next[ix(j)] -= smooth + r * (dminus[ix(j + 1)] + dplus[ix(j)]);
        }
    }
    if (stiff) {
        for (int j = 0; j < n; ++j) next[ix(j)] += dt * sys.source(ader[ix(j + 2)].u_half);
        if (opt.implicit_source_corrector) {
            const Matrix id = Matrix::Identity(sys.size(), sys.size());
            for (int j = 0; j < n; ++j) {
                const AderState& a = ader[ix(j + 2)];
                const Vector& u0 = grid.means[ix(j)];
                const Vector pred = a.u_one - u0;
                const Matrix k = id - 0.5 * dt * sys.source_jacobian(a.u_half);
                next[ix(j)] = u0 + pred + linear_solve(k, Vector(next[ix(j)] - u0 - pred));
            }
        }
    } else if (sys.has_stiff_source()) {
        // explicit midpoint source when the stiff machinery is switched off
        for (int j = 0; j < n; ++j) {
            const Vector& u = e.u[ix(j + 2)];
            Vector half = u + 0.5 * dt * (sys.source(u) - char_matrix(sys, u) * e.g[ix(j + 2)]);
            if (sys.admissibility(half).has_value()) half = u;
            next[ix(j)] += dt * sys.source(half);
        }
    }

    grid.gradients.assign(e.g.begin() + 2, e.g.begin() + 2 + n);
    rep.floors_applied = finish_cells(sys, grid, std::move(next), opt);
    return rep;
}

}  // namespace detail

inline StepReport step_flux_form(const System& sys, CellGrid& grid, double dt, const SchemeOptions& opt = {}) {
    if (sys.has_nonconservative()) throw ConfigError("step_flux_form: system has non-conservative products");
    return detail::step(sys, grid, dt, opt, detail::Form::Flux, false);
}

inline StepReport step_fluctuation_form(const System& sys, CellGrid& grid, double dt, const SchemeOptions& opt = {}) {
    return detail::step(sys, grid, dt, opt, detail::Form::Fluctuation, false);
}

/// Without a source the stiff variants are the plain ones.
inline StepReport step_flux_form_stiff(const System& sys, CellGrid& grid, double dt, const SchemeOptions& opt = {}) {
    if (sys.has_nonconservative()) throw ConfigError("step_flux_form_stiff: system has non-conservative products");
    return detail::step(sys, grid, dt, opt, detail::Form::Flux, sys.has_stiff_source());
}

inline StepReport step_fluctuation_form_stiff(const System& sys, CellGrid& grid, double dt,
                                              const SchemeOptions& opt = {}) {
    return detail::step(sys, grid, dt, opt, detail::Form::Fluctuation, sys.has_stiff_source());
}

struct RunSummary {
    int steps = 0;
    double t_final = 0.0;
    long floors_applied = 0;
    long faces_degraded = 0;
    long picard_failures = 0;
    double max_signal_speed = 0.0;
};

using StepObserver = std::function<void(const CellGrid&, double t, const StepReport&)>;

inline RunSummary run_to_time(const System& sys, CellGrid& grid, double t_end, double cfl, const SchemeOptions& opt,
                              SchemeForm form = SchemeForm::Auto, bool stiff = false, long max_steps = 1000000,
                              const StepObserver& observer = {}) {
    if (!(t_end > 0.0)) throw ConfigError("run_to_time: t_end must be positive");
    const bool fluct =
        form == SchemeForm::Fluctuation || (form == SchemeForm::Auto && sys.has_nonconservative());
    if (!fluct && sys.has_nonconservative()) throw ConfigError("run_to_time: flux form needs a conservative system");
    RunSummary sum;
    double t = 0.0;
    while (t < t_end) {
        if (sum.steps >= max_steps) throw Error("run_to_time: step limit reached before t_end");
        double dt = compute_dt(sys, grid, cfl);
        const bool last = t + dt >= t_end;
        if (last) dt = t_end - t;
        const StepReport rep = fluct ? (stiff ? step_fluctuation_form_stiff(sys, grid, dt, opt)
                                              : step_fluctuation_form(sys, grid, dt, opt))
                                     : (stiff ? step_flux_form_stiff(sys, grid, dt, opt)
                                              : step_flux_form(sys, grid, dt, opt));
        t = last ? t_end : t + dt;
        ++sum.steps;
        sum.floors_applied += rep.floors_applied;
        sum.faces_degraded += rep.faces_degraded;
        sum.picard_failures += rep.picard_failures;
        sum.max_signal_speed = std::max(sum.max_signal_speed, rep.max_signal_speed);
        if (sum.floors_applied > opt.max_floors)
            throw AdmissibilityError("run_to_time: positivity floors applied too often");
        if (observer) observer(grid, t, rep);
    }
    sum.t_final = t;
    return sum;
}

}  // namespace grp
