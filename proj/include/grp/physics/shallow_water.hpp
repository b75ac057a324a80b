#pragma once

// Single-layer shallow water with bathymetry and Manning friction.
// U = (h, hu, hv, b), W = (h, u, v, b). The bottom-slope term gh b_x is the
// non-conservative product; friction is the (possibly stiff) source.

#include <cmath>

#include "grp/system.hpp"

namespace grp {

struct SweParams {
    double g = 9.81;
    double n_manning = 0.0;
};

class ShallowWaterSystem final : public System {
public:
    static constexpr double dry_depth = 1e-10;

    explicit ShallowWaterSystem(SweParams p = {}) : p_(p) {
        if (!(p_.g > 0.0)) throw ConfigError("swe: g must be positive");
        if (!(p_.n_manning >= 0.0)) throw ConfigError("swe: Manning coefficient must be non-negative");
    }

    std::string name() const override { return "swe"; }
    int size() const override { return 4; }
    Parameters parameters() const override { return {{"g", p_.g}, {"n_manning", p_.n_manning}}; }
    double g() const { return p_.g; }

    Vector flux(const Vector& u) const override {
        const auto [vx, vy] = velocity(u);
        Vector f(4);
        f << u(1), u(1) * vx + 0.5 * p_.g * u(0) * u(0), u(1) * vy, 0.0;
        return f;
    }

    Matrix flux_jacobian(const Vector& u) const override {
        const auto [vx, vy] = velocity(u);
        Matrix c = Matrix::Zero(4, 4);
        c.row(0) << 0, 1, 0, 0;
        c.row(1) << p_.g * u(0) - vx * vx, 2 * vx, 0, 0;
        c.row(2) << -vx * vy, vy, vx, 0;
        return c;
    }

    bool has_nonconservative() const override { return true; }
    Matrix nonconservative_matrix(const Vector& u) const override {
        Matrix b = Matrix::Zero(4, 4);
        b(1, 3) = p_.g * u(0);
        return b;
    }

    bool has_stiff_source() const override { return p_.n_manning > 0.0; }

    Vector source(const Vector& u) const override {
        Vector s = Vector::Zero(4);
        if (p_.n_manning == 0.0 || u(0) < dry_depth) return s;
        const auto [vx, vy] = velocity(u);
        const double k = p_.g * p_.n_manning * p_.n_manning * std::hypot(vx, vy) / std::cbrt(u(0));
        s(1) = -k * vx;
        s(2) = -k * vy;
        return s;
    }

    // Exact derivative of the source in conserved variables (h, hu, hv).
    Matrix source_jacobian(const Vector& u) const override {
        Matrix j = Matrix::Zero(4, 4);
        if (p_.n_manning == 0.0 || u(0) < dry_depth) return j;
        const auto [vx, vy] = velocity(u);
        const double speed = std::hypot(vx, vy);
        if (speed < 1e-14) return j;
        const double h = u(0);
        const double k = p_.g * p_.n_manning * p_.n_manning / std::cbrt(h);
        j(1, 0) = (7.0 / 3.0) * k * vx * speed / h;
        j(2, 0) = (7.0 / 3.0) * k * vy * speed / h;
        j(1, 1) = -k * (2 * vx * vx + vy * vy) / (speed * h);
        j(1, 2) = -k * vx * vy / (speed * h);
        j(2, 1) = j(1, 2);
        j(2, 2) = -k * (vx * vx + 2 * vy * vy) / (speed * h);
        return j;
    }

    std::vector<EigenField> eigenfields(const Vector& u) const override {
        if (u(0) < dry_depth) return {};
        const auto [vx, vy] = velocity(u);
        const double c = std::sqrt(p_.g * u(0));
        const double c2 = c * c;
        const bool resonant = std::abs(vx * vx - c2) < 1e-8 * c2;

        std::vector<EigenField> out;
        auto add = [&](double lambda, Vector r, Vector l, FieldKind kind) {
            const double n = l.dot(r);
            out.push_back({lambda, l / n, std::move(r), kind});
        };
        if (!(resonant && vx > 0))
            add(vx - c, make_vector({1, vx - c, vy, 0}),
                make_vector({(c + vx) / (2 * c), -1 / (2 * c), 0, -c / (2 * (vx - c))}), FieldKind::GenuinelyNonlinear);
        if (!resonant)
            add(0.0, make_vector({1, 0, vy, (vx * vx - c2) / c2}), make_vector({0, 0, 0, c2 / (vx * vx + c2)}),
                FieldKind::LinearlyDegenerate);
        add(vx, make_vector({0, 0, 1, 0}), make_vector({-vy, 0, 1, 0}), FieldKind::LinearlyDegenerate);
        if (!(resonant && vx < 0))
            add(vx + c, make_vector({1, vx + c, vy, 0}),
                make_vector({(c - vx) / (2 * c), 1 / (2 * c), 0, c / (2 * (vx + c))}), FieldKind::GenuinelyNonlinear);
        std::stable_sort(out.begin(), out.end(),
                         [](const EigenField& a, const EigenField& b) { return a.eigenvalue < b.eigenvalue; });
        return out;
    }

    // The stationary bathymetry wave is part of every fan.
    std::pair<double, double> eigenvalue_bounds(const Vector& u) const override {
        const auto [vx, vy] = velocity(u);
        const double c = std::sqrt(p_.g * std::max(u(0), 0.0));
        return {std::min(vx - c, 0.0), std::max(vx + c, 0.0)};
    }

    Vector prim_to_cons(const Vector& w) const override { return make_vector({w(0), w(0) * w(1), w(0) * w(2), w(3)}); }

    Vector cons_to_prim(const Vector& u) const override {
        const auto [vx, vy] = velocity(u);
        return make_vector({u(0), vx, vy, u(3)});
    }

    Matrix cons_prim_jacobian(const Vector& w) const override {
        Matrix j = Matrix::Identity(4, 4);
        j(1, 0) = w(1), j(1, 1) = w(0);
        j(2, 0) = w(2), j(2, 2) = w(0);
        return j;
    }

    std::vector<std::string> primitive_names() const override { return {"h", "u", "v", "b"}; }

    std::optional<std::string> admissibility(const Vector& u) const override {
        if (!(u(0) >= 0.0)) return "depth must be non-negative";
        // a dry state has no velocity, so it cannot carry more than ~dry_depth * 1 m/s
        if (u(0) < dry_depth && std::hypot(u(1), u(2)) > dry_depth) return "dry state carries momentum";
        return std::nullopt;
    }

    ShockSensor shock_sensor(const Vector& u) const override { return {u(0), velocity(u).first}; }

    int apply_floors(Vector& u, double floor) const override {
        if (!u.allFinite()) throw AdmissibilityError("swe: non-finite state");
        int n = 0;
        if (u(0) < 0.0) {
            u(0) = floor;
            ++n;
        }
        if (u(0) < dry_depth) u(1) = u(2) = 0.0;
        return n;
    }

    /// (u, v), zero in dry cells.
    std::pair<double, double> velocity(const Vector& u) const {
        if (u(0) < dry_depth) return {0.0, 0.0};
        return {u(1) / u(0), u(2) / u(0)};
    }

private:
    SweParams p_;
};

}  // namespace grp
