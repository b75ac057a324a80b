#pragma once

// Face-local Riemann machinery: wave speeds, HLL state/flux, path-integrated
// B~ matrices, the path-conservative HLL state, fluctuations, delta weights,
// the flattener and the HLLI anti-diffusive term.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "grp/system.hpp"

namespace grp {

struct WaveSpeedPair {
    double s_left = -1.0;
    double s_right = 1.0;
};

/// Fixed-point failure for the path-conservative HLL state; keeps the last iterate.
class FixedPointError : public ConvergenceError {
public:
    FixedPointError(const std::string& what, int iterations, double residual, Vector last)
        : ConvergenceError(what, iterations, residual), last_(std::move(last)) {}
    const Vector& last_iterate() const noexcept { return last_; }

private:
    Vector last_;
};

/// Davis bounds over U_L, U_R and their mean, separated by a minimum gap.
inline WaveSpeedPair wave_speed_estimates(const System& sys, const Vector& ul, const Vector& ur) {
    sys.require_admissible(ul);
    sys.require_admissible(ur);
    const Vector mean = 0.5 * (ul + ur);
    const auto [l0, r0] = sys.eigenvalue_bounds(ul);
    const auto [l1, r1] = sys.eigenvalue_bounds(ur);
    double sl = std::min(l0, l1), sr = std::max(r0, r1);
    if (!sys.admissibility(mean).has_value()) {
        const auto [l2, r2] = sys.eigenvalue_bounds(mean);
        sl = std::min(sl, l2);
        sr = std::max(sr, r2);
    }
    const double gap = 1e-12 * std::max({1.0, std::abs(sl), std::abs(sr)});
    if (sr - sl < gap) {
        const double mid = 0.5 * (sl + sr);
        sl = mid - 0.5 * gap;
        sr = mid + 0.5 * gap;
    }
    return {sl, sr};
}

inline Vector hll_state_conservative(const Vector& ul, const Vector& ur, const Vector& fl, const Vector& fr,
                                     const WaveSpeedPair& s) {
    return (s.s_right * ur - s.s_left * ul - (fr - fl)) / (s.s_right - s.s_left);
}

inline Vector hll_flux(const Vector& ul, const Vector& ur, const Vector& fl, const Vector& fr,
                       const WaveSpeedPair& s) {
    return (s.s_right * fl - s.s_left * fr + s.s_right * s.s_left * (ur - ul)) / (s.s_right - s.s_left);
}

namespace detail {
// 3-point Gauss-Legendre on [0, 1]
inline constexpr std::array<double, 3> gl_nodes{0.1127016653792583, 0.5, 0.8872983346207417};
inline constexpr std::array<double, 3> gl_weights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
}  // namespace detail

/// Segment-path average of B between Ua and Ub.
inline Matrix btilde(const System& sys, const Vector& ua, const Vector& ub) {
    const int m = sys.size();
    if (!sys.has_nonconservative()) return Matrix::Zero(m, m);
    Matrix out = Matrix::Zero(m, m);
    for (std::size_t k = 0; k < 3; ++k) {
        const Vector node = ua + detail::gl_nodes[k] * (ub - ua);
        sys.require_admissible(node);
        out += detail::gl_weights[k] * sys.nonconservative_matrix(node);
    }
    return out;
}

/// F(b) - F(a) + B~(a, b)(b - a): the jump along the segment path.
inline Vector path_jump(const System& sys, const Vector& ua, const Vector& ub) {
    Vector j = sys.flux(ub) - sys.flux(ua);
    if (sys.has_nonconservative()) j += btilde(sys, ua, ub) * (ub - ua);
    return j;
}

struct HllResolution {
    Vector u_star;
    Vector f_star;  ///< only filled for systems without non-conservative products
    int fixed_point_iterations = 0;
    bool converged = false;
    double residual = 0.0;
};

/// Path-conservative HLL state by fixed-point iteration from the conservative state.
inline HllResolution hll_state_noncons(const System& sys, const Vector& ul, const Vector& ur, const WaveSpeedPair& s,
                                       double tol = 1e-12, int max_iterations = 100) {
    const Vector fl = sys.flux(ul), fr = sys.flux(ur);
    HllResolution out;
    out.u_star = hll_state_conservative(ul, ur, fl, fr, s);
    if (!sys.has_nonconservative()) {
        out.f_star = hll_flux(ul, ur, fl, fr, s);
        out.converged = true;
        return out;
    }
    const Vector base = s.s_right * ur - s.s_left * ul - (fr - fl);
    const double width = s.s_right - s.s_left;
    Vector u = out.u_star;
    for (int it = 1; it <= max_iterations; ++it) {
        const Vector next =
            (base - btilde(sys, ul, u) * (u - ul) - btilde(sys, u, ur) * (ur - u)) / width;
        const double change = inf_norm(Vector(next - u));
        u = next;
        out.fixed_point_iterations = it;
        out.residual = change;
        if (change <= tol * (1.0 + inf_norm(u))) {
            out.u_star = u;
            out.converged = true;
            return out;
        }
    }
    throw FixedPointError("hll_state_noncons: fixed point did not converge", max_iterations, out.residual, u);
}

/// D- = S_L (U* - U_L), D+ = S_R (U_R - U*).
inline std::pair<Vector, Vector> hll_fluctuations(const WaveSpeedPair& s, const Vector& u_star, const Vector& ul,
                                                  const Vector& ur) {
    return {s.s_left * (u_star - ul), s.s_right * (ur - u_star)};
}

inline double delta_weight(double lambda, const WaveSpeedPair& s) {
    return 1.0 - std::min(lambda, 0.0) / s.s_left - std::max(lambda, 0.0) / s.s_right;
}

enum class FlattenerMode { On, Off, Zero };  ///< Off forces phi = 1, Zero forces phi = 0

/// Shock flattener in [0, 1], 1 away from strong compressive jumps.
inline double flattener(const System& sys, const Vector& ul, const Vector& ur, FlattenerMode mode = FlattenerMode::On,
                        double eta1 = 0.25, double eta2 = 0.75) {
    if (mode == FlattenerMode::Off) return 1.0;
    if (mode == FlattenerMode::Zero) return 0.0;
    const ShockSensor l = sys.shock_sensor(ul), r = sys.shock_sensor(ur);
    // rounding-level compression does not count
    const double slack = 1e-10 * std::max({1.0, std::abs(l.normal_velocity), std::abs(r.normal_velocity)});
    if (r.normal_velocity >= l.normal_velocity - slack) return 1.0;
    const double qmin = std::min(l.indicator, r.indicator);
    if (!(qmin > 0.0)) return 0.0;
    const double jump = std::abs(r.indicator - l.indicator) / qmin;
    return 1.0 - std::clamp((jump - eta1) / (eta2 - eta1), 0.0, 1.0);
}

/// phi S_R S_L / (S_R - S_L) sum_p delta^p (l^p . dU) r^p.
inline Vector hlli_correction(const WaveSpeedPair& s, double phi, const std::vector<EigenField>& fields,
                              const Vector& du) {
    Vector out = Vector::Zero(du.size());
    if (phi == 0.0 || fields.empty()) return out;
    // eigenvalues taken at a different state can stray slightly outside [S_L, S_R]
    for (const auto& f : fields)
        out += std::clamp(delta_weight(f.eigenvalue, s), 0.0, 1.0) * f.left.dot(du) * f.right;
    return (phi * s.s_right * s.s_left / (s.s_right - s.s_left)) * out;
}

}  // namespace grp
