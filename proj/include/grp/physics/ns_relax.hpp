#pragma once

// Compressible Navier-Stokes in Cattaneo relaxation form.
// U = (rho, rho u, E, psi1, psi2), W = (rho, u, p, psi1, psi2).
// psi1 relaxes to u_x and psi2 to T_x with time scale epsilon. No analytic
// eigensystem; the fields come from a numerical decomposition of C(U).

#include <cmath>

#include "grp/system.hpp"

namespace grp {

struct NsRelaxParams {
    double gamma = 1.4;
    double R = 1.0;
    double epsilon = 1e-4;
    double Pr = 0.72;
    double mu = 2.0;  ///< used when Sutherland is off
    bool sutherland = false;
    double mu0 = 1.716e-5, T0 = 273.15, beta = 1.5, s = 110.4;
    bool kappa_enabled = false;
};

/// Sutherland's law in the orientation (T + s)/(T0 + s).
inline double sutherland_viscosity(const NsRelaxParams& p, double T) {
    return p.mu0 * std::pow(T / p.T0, p.beta) * (T + p.s) / (p.T0 + p.s);
}

class NsRelaxSystem final : public System {
public:
    explicit NsRelaxSystem(NsRelaxParams p = {}) : p_(p) {
        if (!(p_.gamma > 1.0)) throw ConfigError("nsrelax: gamma must exceed 1");
        if (!(p_.epsilon > 0.0)) throw ConfigError("nsrelax: epsilon must be positive");
        if (!(p_.Pr > 0.0)) throw ConfigError("nsrelax: Pr must be positive");
        if (!(p_.R > 0.0)) throw ConfigError("nsrelax: R must be positive");
        if (!(p_.mu >= 0.0)) throw ConfigError("nsrelax: mu must be non-negative");
    }

    std::string name() const override { return "nsrelax"; }
    int size() const override { return 5; }
    Parameters parameters() const override {
        return {{"gamma", p_.gamma},   {"R", p_.R},   {"epsilon", p_.epsilon},
                {"Pr", p_.Pr},         {"mu", p_.mu}, {"sutherland", p_.sutherland ? 1.0 : 0.0},
                {"mu0", p_.mu0},       {"T0", p_.T0}, {"beta", p_.beta},
                {"s", p_.s},           {"kappa", p_.kappa_enabled ? 1.0 : 0.0}};
    }
    const NsRelaxParams& params() const { return p_; }

    double pressure(const Vector& u) const { return (p_.gamma - 1.0) * (u(2) - 0.5 * u(1) * u(1) / u(0)); }
    double temperature(double rho, double p) const { return p / (p_.R * rho); }

    double viscosity(double T) const { return p_.sutherland ? sutherland_viscosity(p_, T) : p_.mu; }
    double viscosity_derivative(double T) const {
        if (!p_.sutherland) return 0.0;
        // d/dT of mu0 (T/T0)^beta (T+s)/(T0+s)
        const double mu = sutherland_viscosity(p_, T);
        return mu * (p_.beta / T + 1.0 / (T + p_.s));
    }
    double conductivity(double T) const {
        if (!p_.kappa_enabled) return 0.0;
        return viscosity(T) * p_.gamma * cv() / p_.Pr;
    }
    double conductivity_derivative(double T) const {
        if (!p_.kappa_enabled) return 0.0;
        return viscosity_derivative(T) * p_.gamma * cv() / p_.Pr;
    }
    double cv() const { return p_.R / (p_.gamma - 1.0); }

    Vector flux(const Vector& u) const override {
        const double rho = u(0), vx = u(1) / rho, p = pressure(u);
        const double T = temperature(rho, p);
        const double tau = 4.0 * viscosity(T) * u(3) / 3.0;
        Vector f(5);
        f << u(1), u(1) * vx + p - tau, vx * (u(2) + p - tau) + conductivity(T) * u(4), -vx / p_.epsilon,
            -T / p_.epsilon;
        return f;
    }

    Matrix flux_jacobian(const Vector& u) const override {
        const Vector w = cons_to_prim(u);
        return flux_prim_jacobian(w) * prim_cons_jacobian(w);
    }

    bool has_stiff_source() const override { return true; }
    Vector source(const Vector& u) const override {
        Vector s = Vector::Zero(5);
        s(3) = -u(3) / p_.epsilon;
        s(4) = -u(4) / p_.epsilon;
        return s;
    }
    Matrix source_jacobian(const Vector& /*u*/) const override {
        Matrix j = Matrix::Zero(5, 5);
        j(3, 3) = j(4, 4) = -1.0 / p_.epsilon;
        return j;
    }

    std::vector<EigenField> eigenfields(const Vector& u) const override {
        EigenDecomposition eig;
        try {
            eig = eigen_general(flux_jacobian(u));
        } catch (const HyperbolicityError&) {
            return {};  // defective (u = 0) or near-complex: no correction at this face
        }
        if (!(eig.condition < 1e8)) return {};
        std::vector<EigenField> out;
        const Eigen::Index m = eig.values.size();
        for (Eigen::Index p = 0; p < m; ++p) {
            const bool interior = p > 0 && p < m - 1;
            out.push_back({eig.values(p), eig.left.row(p).transpose(), eig.right.col(p),
                           interior ? FieldKind::LinearlyDegenerate : FieldKind::GenuinelyNonlinear});
        }
        return out;
    }

    std::pair<double, double> eigenvalue_bounds(const Vector& u) const override {
        const Vector lambda = real_eigenvalues(flux_jacobian(u));
        return {lambda(0), lambda(lambda.size() - 1)};
    }

    Vector prim_to_cons(const Vector& w) const override {
        Vector u(5);
        u << w(0), w(0) * w(1), w(2) / (p_.gamma - 1.0) + 0.5 * w(0) * w(1) * w(1), w(3), w(4);
        return u;
    }

    Vector cons_to_prim(const Vector& u) const override {
        Vector w(5);
        w << u(0), u(1) / u(0), pressure(u), u(3), u(4);
        return w;
    }

    Matrix cons_prim_jacobian(const Vector& w) const override {
        Matrix j = Matrix::Identity(5, 5);
        j(1, 0) = w(1), j(1, 1) = w(0);
        j(2, 0) = 0.5 * w(1) * w(1), j(2, 1) = w(0) * w(1), j(2, 2) = 1.0 / (p_.gamma - 1.0);
        return j;
    }

    std::vector<std::string> primitive_names() const override { return {"rho", "u", "p", "psi1", "psi2"}; }

    std::optional<std::string> admissibility(const Vector& u) const override {
        if (!(u(0) > 0.0)) return "density must be positive";
        if (!(pressure(u) > 0.0)) return "pressure must be positive";
        return std::nullopt;
    }

    ShockSensor shock_sensor(const Vector& u) const override { return {pressure(u), u(1) / u(0)}; }

    int apply_floors(Vector& u, double floor) const override {
        if (!u.allFinite()) throw AdmissibilityError("nsrelax: non-finite state");
        int n = 0;
        if (!(u(0) >= floor)) {
            u(0) = floor;
            ++n;
        }
        if (!(pressure(u) >= floor)) {
            u(2) = 0.5 * u(1) * u(1) / u(0) + floor / (p_.gamma - 1.0);
            ++n;
        }
        return n;
    }

    /// dF/dW, including the temperature dependence of mu and kappa.
    Matrix flux_prim_jacobian(const Vector& w) const {
        const double rho = w(0), vx = w(1), p = w(2), psi1 = w(3), psi2 = w(4);
        const double g = p_.gamma, g1 = g - 1.0, eps = p_.epsilon;
        const double T = temperature(rho, p);
        const double T_rho = -T / rho, T_p = 1.0 / (p_.R * rho);
        const double mu = viscosity(T), dmu = viscosity_derivative(T);
        const double kappa = conductivity(T), dkappa = conductivity_derivative(T);
        const double E = p / g1 + 0.5 * rho * vx * vx;
        const double tau = 4.0 * mu * psi1 / 3.0;
        Matrix d = Matrix::Zero(5, 5);
        d.row(0) << vx, rho, 0, 0, 0;
        d.row(1) << vx * vx - (4.0 / 3.0) * psi1 * dmu * T_rho, 2 * rho * vx, 1.0 - (4.0 / 3.0) * psi1 * dmu * T_p,
            -4.0 * mu / 3.0, 0;
        d.row(2) << vx * (0.5 * vx * vx - (4.0 / 3.0) * psi1 * dmu * T_rho) + psi2 * dkappa * T_rho,
            E + p - tau + rho * vx * vx, vx * (g / g1 - (4.0 / 3.0) * psi1 * dmu * T_p) + psi2 * dkappa * T_p,
            -4.0 * mu * vx / 3.0, kappa;
        d.row(3) << 0, -1.0 / eps, 0, 0, 0;
        d.row(4) << -T_rho / eps, 0, -T_p / eps, 0, 0;
        return d;
    }

    /// dW/dU.
    Matrix prim_cons_jacobian(const Vector& w) const {
        const double rho = w(0), vx = w(1), g1 = p_.gamma - 1.0;
        Matrix j = Matrix::Identity(5, 5);
        j(1, 0) = -vx / rho, j(1, 1) = 1.0 / rho;
        j.row(2) << 0.5 * g1 * vx * vx, -g1 * vx, g1, 0, 0;
        return j;
    }

private:
    NsRelaxParams p_;
};

}  // namespace grp
