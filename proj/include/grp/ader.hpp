#pragma once

// Second-order space-time predictor with implicit treatment of stiff sources.
// Linear-in-time expansion represented by its values at t + dt/2 and t + dt.

#include "grp/system.hpp"

namespace grp {

struct AderState {
    Vector u_half, g_half;
    Vector u_one, g_one;
    int picard_iterations = 0;
    bool converged = false;
};

struct AderOptions {
    int max_picard = 25;
    double tol = 1e-10;
    double stiff_threshold = 1.0;  ///< dt ||dS/dU||_inf above this makes the gradient pair implicit
};

inline AderState ader_predict(const System& sys, const Vector& u0, const Vector& g0, double dt,
                              const AderOptions& opt = {}) {
    sys.require_admissible(u0);
    const Eigen::Index m = u0.size();
    constexpr double w4 = 4.0 / 6.0, w1 = 1.0 / 6.0;

    AderState a{u0, g0, u0, g0, 0, false};
    if (dt == 0.0) {
        a.converged = true;
        return a;
    }
    const double tol = opt.tol * (1.0 + inf_norm(u0));
    const Matrix id = Matrix::Identity(m, m);
    double change = 0.0;

    for (int pass = 1; pass <= opt.max_picard; ++pass) {
        const Matrix j_half = sys.source_jacobian(a.u_half);
        const Matrix j_one = sys.source_jacobian(a.u_one);

        // gradient pair
        if (dt * std::max(inf_norm(j_half), inf_norm(j_one)) > opt.stiff_threshold) {
            Matrix k(2 * m, 2 * m);
            k << id - w4 * dt * j_half, w1 * dt * j_one, -dt * j_half, id;
            Vector rhs(2 * m);
            rhs << g0, g0;
            const Vector g = linear_solve(k, rhs);
            a.g_half = g.head(m);
            a.g_one = g.tail(m);
        } else {
            const Vector gh = g0 + w4 * dt * (j_half * a.g_half) - w1 * dt * (j_one * a.g_one);
            const Vector go = g0 + dt * (j_half * a.g_half);
            a.g_half = gh;
            a.g_one = go;
        }

        // one Newton step for the states with the transport terms frozen
        const Vector t_half = char_matrix(sys, a.u_half) * a.g_half;
        const Vector t_one = char_matrix(sys, a.u_one) * a.g_one;
        const Vector s_half = sys.source(a.u_half) - j_half * a.u_half;
        const Vector s_one = sys.source(a.u_one) - j_one * a.u_one;
        Matrix k(2 * m, 2 * m);
        k << id - w4 * dt * j_half, w1 * dt * j_one, -dt * j_half, id;
        Vector rhs(2 * m);
        rhs << u0 + w4 * dt * s_half - w1 * dt * s_one - w4 * dt * t_half + w1 * dt * t_one,
            u0 + dt * s_half - dt * t_half;
        const Vector x = linear_solve(k, rhs);
        const Vector u_half = x.head(m), u_one = x.tail(m);

        change = inf_norm(Vector(u_half - a.u_half)) + inf_norm(Vector(u_one - a.u_one));
        a.u_half = u_half;
        a.u_one = u_one;
        a.picard_iterations = pass;
        sys.require_admissible(a.u_half);
        sys.require_admissible(a.u_one);
        if (change <= tol) {
            a.converged = true;
            return a;
        }
    }
    throw ConvergenceError("ader_predict: Picard iteration did not converge", opt.max_picard, change);
}

/// State of the linear-in-time expansion at 0 <= t <= dt.
inline Vector fan_evaluate(const AderState& a, double t, double dt) {
    const double s = t / dt;
    return a.u_half * (2.0 - 2.0 * s) + a.u_one * (2.0 * s - 1.0);
}

enum class Side { Left, Right };

/// Half-time trace at a zone face: Right -> U^{1/2} + dx/2 g^{1/2}.
inline Vector cell_face_trace(const AderState& a, Side side, double dx) {
    return side == Side::Right ? Vector(a.u_half + 0.5 * dx * a.g_half) : Vector(a.u_half - 0.5 * dx * a.g_half);
}

}  // namespace grp
