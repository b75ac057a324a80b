#pragma once

// Ideal MHD in Gaussian units, Bx held as a parameter.
// U = (rho, rho u, rho v, rho w, E, By, Bz), W = (rho, u, v, w, p, By, Bz).
// Eigenvectors follow Roe & Balsara, built in primitive variables with
// rationalized b = B / sqrt(4 pi) and mapped to the conserved basis.

#include <cmath>
#include <numbers>

#include "grp/system.hpp"

namespace grp {

struct MhdParams {
    double gamma = 5.0 / 3.0;
    double bx = 0.0;
};

class MhdSystem final : public System {
public:
    static constexpr double four_pi = 4.0 * std::numbers::pi;

    explicit MhdSystem(MhdParams p = {}) : p_(p) {
        if (!(p_.gamma > 1.0)) throw ConfigError("mhd: gamma must exceed 1");
        if (!std::isfinite(p_.bx)) throw ConfigError("mhd: bx must be finite");
    }

    std::string name() const override { return "mhd"; }
    int size() const override { return 7; }
    Parameters parameters() const override { return {{"gamma", p_.gamma}, {"bx", p_.bx}}; }
    double bx() const { return p_.bx; }

    double pressure(const Vector& u) const {
        const double ke = 0.5 * (u(1) * u(1) + u(2) * u(2) + u(3) * u(3)) / u(0);
        const double me = (p_.bx * p_.bx + u(5) * u(5) + u(6) * u(6)) / (2.0 * four_pi);
        return (p_.gamma - 1.0) * (u(4) - ke - me);
    }

    Vector flux(const Vector& u) const override {
        const double rho = u(0), vx = u(1) / rho, vy = u(2) / rho, vz = u(3) / rho;
        const double bx = p_.bx, by = u(5), bz = u(6);
        const double p = pressure(u);
        const double pm = (bx * bx + by * by + bz * bz) / (2.0 * four_pi);
        const double vb = vx * bx + vy * by + vz * bz;
        Vector f(7);
        f << u(1),
             u(1) * vx + p + pm - bx * bx / four_pi,
             u(2) * vx - bx * by / four_pi,
             u(3) * vx - bx * bz / four_pi,
             (u(4) + p + pm) * vx - bx * vb / four_pi,
             vx * by - vy * bx,
             vx * bz - vz * bx;
        return f;
    }

    Matrix flux_jacobian(const Vector& u) const override {
        const Vector w = cons_to_prim(u);
        return flux_prim_jacobian(w) * prim_cons_jacobian(w);
    }

    std::vector<EigenField> eigenfields(const Vector& u) const override {
        const Vector w = cons_to_prim(u);
        const double rho = w(0), vx = w(1), p = w(4);
        const double sq = std::sqrt(four_pi);
        const double bx = p_.bx / sq, by = w(5) / sq, bz = w(6) / sq;
        const auto s = speeds(rho, p, bx, by, bz);

        const double bt = std::hypot(by, bz);
        double beta_y = 1.0 / std::numbers::sqrt2, beta_z = 1.0 / std::numbers::sqrt2;
        if (bt > 1e-12 * std::max(1.0, std::abs(bx))) {
            beta_y = by / bt;
            beta_z = bz / bt;
        }
        double alpha_f = 1.0, alpha_s = 0.0;
        const double gap = s.cf2 - s.cs2;
        if (gap > 1e-12 * s.cf2) {
            alpha_f = std::sqrt(std::clamp((s.a2 - s.cs2) / gap, 0.0, 1.0));
            alpha_s = std::sqrt(std::clamp((s.cf2 - s.a2) / gap, 0.0, 1.0));
        }
        const double sgn = bx >= 0.0 ? 1.0 : -1.0;
        const double a = std::sqrt(s.a2), cf = std::sqrt(s.cf2), cs = std::sqrt(s.cs2), ca = std::sqrt(s.ca2);
        const double sr = std::sqrt(rho), gp = p_.gamma * p;

        Matrix rp = Matrix::Zero(7, 7);
        auto put = [&](int col, double d0, double d1, double d2, double d3, double d4, double d5, double d6) {
            rp(0, col) = d0, rp(1, col) = d1, rp(2, col) = d2, rp(3, col) = d3, rp(4, col) = d4;
            rp(5, col) = d5 * sq, rp(6, col) = d6 * sq;  // back to Gaussian B
        };
        for (int k = 0; k < 2; ++k) {
            const double e = k == 0 ? -1.0 : 1.0;  // -1: left-going
            const int fast = k == 0 ? 0 : 6, alfven = k == 0 ? 1 : 5, slow = k == 0 ? 2 : 4;
            put(fast, rho * alpha_f, e * alpha_f * cf, -e * alpha_s * cs * beta_y * sgn,
                -e * alpha_s * cs * beta_z * sgn, alpha_f * gp, alpha_s * sr * a * beta_y,
                alpha_s * sr * a * beta_z);
            put(slow, rho * alpha_s, e * alpha_s * cs, e * alpha_f * cf * beta_y * sgn,
                e * alpha_f * cf * beta_z * sgn, alpha_s * gp, -alpha_f * sr * a * beta_y,
                -alpha_f * sr * a * beta_z);
            put(alfven, 0, 0, -beta_z, beta_y, 0, e * sgn * sr * beta_z, -e * sgn * sr * beta_y);
        }
        put(3, 1, 0, 0, 0, 0, 0, 0);

        Vector lambda(7);
        lambda << vx - cf, vx - ca, vx - cs, vx, vx + cs, vx + ca, vx + cf;
        using K = FieldKind;
        const K gnl = K::GenuinelyNonlinear, ld = K::LinearlyDegenerate;
        return fields_from_right_basis(lambda, cons_prim_jacobian(w) * rp, {gnl, ld, gnl, ld, gnl, ld, gnl});
    }

    std::pair<double, double> eigenvalue_bounds(const Vector& u) const override {
        const double sq = std::sqrt(four_pi);
        const double rho = u(0), vx = u(1) / rho;
        const auto s = speeds(rho, pressure(u), p_.bx / sq, u(5) / sq, u(6) / sq);
        const double cf = std::sqrt(s.cf2);
        return {vx - cf, vx + cf};
    }

    Vector prim_to_cons(const Vector& w) const override {
        const double rho = w(0);
        Vector u(7);
        u << rho, rho * w(1), rho * w(2), rho * w(3),
            w(4) / (p_.gamma - 1.0) + 0.5 * rho * (w(1) * w(1) + w(2) * w(2) + w(3) * w(3)) +
                (p_.bx * p_.bx + w(5) * w(5) + w(6) * w(6)) / (2.0 * four_pi),
            w(5), w(6);
        return u;
    }

    Vector cons_to_prim(const Vector& u) const override {
        Vector w(7);
        w << u(0), u(1) / u(0), u(2) / u(0), u(3) / u(0), pressure(u), u(5), u(6);
        return w;
    }

    Matrix cons_prim_jacobian(const Vector& w) const override {
        const double rho = w(0), vx = w(1), vy = w(2), vz = w(3);
        Matrix j = Matrix::Zero(7, 7);
        j(0, 0) = 1.0;
        j(1, 0) = vx, j(1, 1) = rho;
        j(2, 0) = vy, j(2, 2) = rho;
        j(3, 0) = vz, j(3, 3) = rho;
        j(4, 0) = 0.5 * (vx * vx + vy * vy + vz * vz);
        j(4, 1) = rho * vx, j(4, 2) = rho * vy, j(4, 3) = rho * vz;
        j(4, 4) = 1.0 / (p_.gamma - 1.0);
        j(4, 5) = w(5) / four_pi, j(4, 6) = w(6) / four_pi;
        j(5, 5) = 1.0, j(6, 6) = 1.0;
        return j;
    }

    std::vector<std::string> primitive_names() const override {
        return {"rho", "u", "v", "w", "p", "By", "Bz"};
    }

    std::optional<std::string> admissibility(const Vector& u) const override {
        if (!(u(0) > 0.0)) return "density must be positive";
        if (!(pressure(u) > 0.0)) return "pressure must be positive";
        return std::nullopt;
    }

    ShockSensor shock_sensor(const Vector& u) const override { return {pressure(u), u(1) / u(0)}; }

    int apply_floors(Vector& u, double floor) const override {
        if (!u.allFinite()) throw AdmissibilityError("mhd: non-finite state");
        int n = 0;
        if (!(u(0) >= floor)) {
            u(0) = floor;
            ++n;
        }
        if (!(pressure(u) >= floor)) {
            const double ke = 0.5 * (u(1) * u(1) + u(2) * u(2) + u(3) * u(3)) / u(0);
            const double me = (p_.bx * p_.bx + u(5) * u(5) + u(6) * u(6)) / (2.0 * four_pi);
            u(4) = ke + me + floor / (p_.gamma - 1.0);
            ++n;
        }
        return n;
    }

    /// dF/dW.
    Matrix flux_prim_jacobian(const Vector& w) const {
        const double rho = w(0), vx = w(1), vy = w(2), vz = w(3), p = w(4);
        const double bx = p_.bx, by = w(5), bz = w(6);
        const double b2 = bx * bx + by * by + bz * bz;
        const double q2 = vx * vx + vy * vy + vz * vz;
        const double g = p_.gamma, g1 = g - 1.0;
        Matrix d = Matrix::Zero(7, 7);
        d.row(0) << vx, rho, 0, 0, 0, 0, 0;
        d.row(1) << vx * vx, 2 * rho * vx, 0, 0, 1, by / four_pi, bz / four_pi;
        d.row(2) << vx * vy, rho * vy, rho * vx, 0, 0, -bx / four_pi, 0;
        d.row(3) << vx * vz, rho * vz, 0, rho * vx, 0, 0, -bx / four_pi;
        d.row(4) << 0.5 * vx * q2,
            p * g / g1 + 0.5 * rho * q2 + b2 / four_pi + rho * vx * vx - bx * bx / four_pi,
            rho * vx * vy - bx * by / four_pi,
            rho * vx * vz - bx * bz / four_pi,
            vx * g / g1,
            2 * vx * by / four_pi - bx * vy / four_pi,
            2 * vx * bz / four_pi - bx * vz / four_pi;
        d.row(5) << 0, by, -bx, 0, 0, vx, 0;
        d.row(6) << 0, bz, 0, -bx, 0, 0, vx;
        return d;
    }

    /// dW/dU.
    Matrix prim_cons_jacobian(const Vector& w) const {
        const double rho = w(0), vx = w(1), vy = w(2), vz = w(3);
        const double g1 = p_.gamma - 1.0;
        Matrix j = Matrix::Zero(7, 7);
        j(0, 0) = 1.0;
        j(1, 0) = -vx / rho, j(1, 1) = 1.0 / rho;
        j(2, 0) = -vy / rho, j(2, 2) = 1.0 / rho;
        j(3, 0) = -vz / rho, j(3, 3) = 1.0 / rho;
        j.row(4) << 0.5 * g1 * (vx * vx + vy * vy + vz * vz), -g1 * vx, -g1 * vy, -g1 * vz, g1,
            -g1 * w(5) / four_pi, -g1 * w(6) / four_pi;
        j(5, 5) = 1.0, j(6, 6) = 1.0;
        return j;
    }

private:
    struct Speeds {
        double a2, ca2, cf2, cs2;
    };

    // rationalized field components
    Speeds speeds(double rho, double p, double bx, double by, double bz) const {
        Speeds s{};
        s.a2 = p_.gamma * p / rho;
        s.ca2 = bx * bx / rho;
        const double sum = s.a2 + (bx * bx + by * by + bz * bz) / rho;
        const double disc = std::sqrt(std::max(0.0, sum * sum - 4.0 * s.a2 * s.ca2));
        s.cf2 = 0.5 * (sum + disc);
        s.cs2 = s.cf2 > 0.0 ? s.a2 * s.ca2 / s.cf2 : 0.0;  // product of roots, no cancellation
        return s;
    }

    MhdParams p_;
};

}  // namespace grp
