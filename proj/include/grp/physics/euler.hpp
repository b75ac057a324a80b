#pragma once

// 1D Euler with transverse velocities. U = (rho, rho u, rho v, rho w, E),
// W = (rho, u, v, w, p).

#include <cmath>

#include "grp/system.hpp"

namespace grp {

struct EulerParams {
    double gamma = 1.4;
};

class EulerSystem final : public System {
public:
    explicit EulerSystem(EulerParams p = {}) : p_(p) {
        if (!(p_.gamma > 1.0)) throw ConfigError("euler: gamma must exceed 1");
    }

    std::string name() const override { return "euler"; }
    int size() const override { return 5; }
    Parameters parameters() const override { return {{"gamma", p_.gamma}}; }
    double gamma() const { return p_.gamma; }

    double pressure(const Vector& u) const {
        const double ke = 0.5 * (u(1) * u(1) + u(2) * u(2) + u(3) * u(3)) / u(0);
        return (p_.gamma - 1.0) * (u(4) - ke);
    }

    double sound_speed(const Vector& u) const { return std::sqrt(p_.gamma * pressure(u) / u(0)); }

    Vector flux(const Vector& u) const override {
        const double rho = u(0), vx = u(1) / rho, p = pressure(u);
        Vector f(5);
        f << u(1), u(1) * vx + p, u(2) * vx, u(3) * vx, (u(4) + p) * vx;
        return f;
    }

    Matrix flux_jacobian(const Vector& u) const override {
        const double g1 = p_.gamma - 1.0;
        const double rho = u(0), vx = u(1) / rho, vy = u(2) / rho, vz = u(3) / rho;
        const double q2 = vx * vx + vy * vy + vz * vz;
        const double h = (u(4) + pressure(u)) / rho;
        Matrix c(5, 5);
        c << 0, 1, 0, 0, 0,
             0.5 * g1 * q2 - vx * vx, (3.0 - p_.gamma) * vx, -g1 * vy, -g1 * vz, g1,
             -vx * vy, vy, vx, 0, 0,
             -vx * vz, vz, 0, vx, 0,
             vx * (0.5 * g1 * q2 - h), h - g1 * vx * vx, -g1 * vx * vy, -g1 * vx * vz, p_.gamma * vx;
        return c;
    }

    std::vector<EigenField> eigenfields(const Vector& u) const override {
        const double rho = u(0), vx = u(1) / rho, vy = u(2) / rho, vz = u(3) / rho;
        const double q2 = vx * vx + vy * vy + vz * vz;
        const double c = sound_speed(u);
        const double h = (u(4) + pressure(u)) / rho;
        Matrix r(5, 5);
        // columns: u-c, entropy, shear y, shear z, u+c
        r << 1, 1, 0, 0, 1,
             vx - c, vx, 0, 0, vx + c,
             vy, vy, 1, 0, vy,
             vz, vz, 0, 1, vz,
             h - vx * c, 0.5 * q2, vy, vz, h + vx * c;
        Vector lambda(5);
        lambda << vx - c, vx, vx, vx, vx + c;
        using K = FieldKind;
        return fields_from_right_basis(lambda, r,
                                       {K::GenuinelyNonlinear, K::LinearlyDegenerate, K::LinearlyDegenerate,
                                        K::LinearlyDegenerate, K::GenuinelyNonlinear});
    }

    std::pair<double, double> eigenvalue_bounds(const Vector& u) const override {
        const double vx = u(1) / u(0), c = sound_speed(u);
        return {vx - c, vx + c};
    }

    Vector prim_to_cons(const Vector& w) const override {
        Vector u(5);
        const double rho = w(0);
        u << rho, rho * w(1), rho * w(2), rho * w(3),
            w(4) / (p_.gamma - 1.0) + 0.5 * rho * (w(1) * w(1) + w(2) * w(2) + w(3) * w(3));
        return u;
    }

    Vector cons_to_prim(const Vector& u) const override {
        Vector w(5);
        w << u(0), u(1) / u(0), u(2) / u(0), u(3) / u(0), pressure(u);
        return w;
    }

    Matrix cons_prim_jacobian(const Vector& w) const override {
        const double rho = w(0), vx = w(1), vy = w(2), vz = w(3);
        Matrix j = Matrix::Zero(5, 5);
        j(0, 0) = 1.0;
        j(1, 0) = vx, j(1, 1) = rho;
        j(2, 0) = vy, j(2, 2) = rho;
        j(3, 0) = vz, j(3, 3) = rho;
        j(4, 0) = 0.5 * (vx * vx + vy * vy + vz * vz);
        j(4, 1) = rho * vx, j(4, 2) = rho * vy, j(4, 3) = rho * vz;
        j(4, 4) = 1.0 / (p_.gamma - 1.0);
        return j;
    }

    std::vector<std::string> primitive_names() const override { return {"rho", "u", "v", "w", "p"}; }

    std::optional<std::string> admissibility(const Vector& u) const override {
        if (!(u(0) > 0.0)) return "density must be positive";
        if (!(pressure(u) > 0.0)) return "pressure must be positive";
        return std::nullopt;
    }

    ShockSensor shock_sensor(const Vector& u) const override { return {pressure(u), u(1) / u(0)}; }

    int apply_floors(Vector& u, double floor) const override {
        if (!u.allFinite()) throw AdmissibilityError("euler: non-finite state");
        int n = 0;
        if (!(u(0) >= floor)) {
            u(0) = floor;
            ++n;
        }
        if (!(pressure(u) >= floor)) {
            const double ke = 0.5 * (u(1) * u(1) + u(2) * u(2) + u(3) * u(3)) / u(0);
            u(4) = ke + floor / (p_.gamma - 1.0);
            ++n;
        }
        return n;
    }

private:
    EulerParams p_;
};

}  // namespace grp
