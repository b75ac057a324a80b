#pragma once

// In-fan gradient of the resolved state from the generalized jump conditions,
// solved in the least-squares sense, plus the time-centred flux/fluctuations.

#include "grp/riemann.hpp"

namespace grp {

struct GrpFaceInput {
    Vector ul, ur;  ///< face-extrapolated states
    Vector gl, gr;  ///< dU/dx on each side
    WaveSpeedPair speeds;
    Vector u_star;
};

struct GrpFaceSolution {
    Vector grad_star;
    double ls_residual = 0.0;
    bool degraded = false;
};

namespace detail {

inline GrpFaceSolution solve_stacked(const Matrix& top, const Vector& rhs_top, const Matrix& bottom,
                                     const Vector& rhs_bottom) {
    const Eigen::Index m = top.cols();
    Matrix a(2 * m, m);
    a << top, bottom;
    Vector b(2 * m);
    b << rhs_top, rhs_bottom;
    const auto ls = least_squares(a, b);
    GrpFaceSolution out;
    if (ls.effective_rank < m) {
        out.grad_star = Vector::Zero(m);
        out.ls_residual = b.norm();
        out.degraded = true;
        return out;
    }
    out.grad_star = ls.solution;
    out.ls_residual = ls.residual_norm;
    return out;
}

inline Matrix shifted(double s, const Matrix& a) { return s * Matrix::Identity(a.rows(), a.cols()) - a; }

}  // namespace detail

/// [(S_R - A*)^2; (S_L - A*)^2] x = [(S_R - A_R)^2 g_R; (S_L - A_L)^2 g_L].
inline GrpFaceSolution grp_gradient_conservative(const System& sys, const GrpFaceInput& in) {
    const double sl = in.speeds.s_left, sr = in.speeds.s_right;
    const Matrix a_star = char_matrix(sys, in.u_star);
    const Matrix rs = detail::shifted(sr, a_star), ls = detail::shifted(sl, a_star);
    const Matrix rr = detail::shifted(sr, char_matrix(sys, in.ur));
    const Matrix ll = detail::shifted(sl, char_matrix(sys, in.ul));
    return detail::solve_stacked(rs * rs, rr * (rr * in.gr), ls * ls, ll * (ll * in.gl));
}

/// Non-conservative counterpart; reduces to the conservative one when B = 0.
inline GrpFaceSolution grp_gradient_noncons(const System& sys, const GrpFaceInput& in) {
    if (!sys.has_nonconservative()) return grp_gradient_conservative(sys, in);
    const double sl = in.speeds.s_left, sr = in.speeds.s_right;
    const Matrix c_star = sys.flux_jacobian(in.u_star);
    const Matrix a_star = char_matrix(sys, in.u_star);
    const Matrix bt_r = btilde(sys, in.u_star, in.ur);
    const Matrix bt_l = btilde(sys, in.ul, in.u_star);
    const Matrix top = detail::shifted(sr, c_star + bt_r) * detail::shifted(sr, a_star);
    const Matrix bottom = detail::shifted(sl, c_star + bt_l) * detail::shifted(sl, a_star);
    const Vector rhs_top =
        detail::shifted(sr, sys.flux_jacobian(in.ur) + bt_r) * (detail::shifted(sr, char_matrix(sys, in.ur)) * in.gr);
    const Vector rhs_bottom =
        detail::shifted(sl, sys.flux_jacobian(in.ul) + bt_l) * (detail::shifted(sl, char_matrix(sys, in.ul)) * in.gl);
    return detail::solve_stacked(top, rhs_top, bottom, rhs_bottom);
}

/// U + t (xi I - A(U)) g.
inline Vector evolve_state(const System& sys, const Vector& u, const Vector& g, double xi, double t) {
    if (t == 0.0) return u;
    return u + t * (xi * g - char_matrix(sys, u) * g);
}

/// F* - (dt/2) A(U*)^2 dU*/dx.
inline Vector grp_flux_conservative(const System& sys, const Vector& f_star, const Vector& u_star,
                                    const Vector& grad_star, double dt) {
    const Matrix a = char_matrix(sys, u_star);
    return f_star - 0.5 * dt * (a * (a * grad_star));
}

inline std::pair<Vector, Vector> grp_fluctuations(const Vector& d_minus, const Vector& d_plus, const System& sys,
                                                  const Vector& u_star, const Vector& grad_star, double dt) {
    const Matrix a = char_matrix(sys, u_star);
    const Vector centre = 0.5 * dt * (a * (a * grad_star));
    return {d_minus - centre, d_plus + centre};
}

}  // namespace grp
