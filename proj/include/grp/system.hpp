#pragma once

// The pluggable contract a hyperbolic system implements:
//
//     dU/dt + dF(U)/dx + B(U) dU/dx = S(U),      A(U) = C(U) + B(U),  C = dF/dU.
//
// Everything downstream (Riemann machinery, GRP gradients, ADER, the schemes)
// talks to a physics system only through this interface.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grp/error.hpp"
#include "grp/linalg.hpp"

namespace grp {

enum class FieldKind { GenuinelyNonlinear, LinearlyDegenerate };

/// One characteristic field, vectors in the conserved-variable basis.
struct EigenField {
    double eigenvalue = 0.0;
    Vector left;
    Vector right;
    FieldKind kind = FieldKind::GenuinelyNonlinear;
};

/// Which fields the HLLI correction works on.
struct WaveSelection {
    enum class Kind { All, LinearlyDegenerate, Explicit, None };
    Kind kind = Kind::LinearlyDegenerate;
    std::vector<int> indices;  ///< only for Kind::Explicit; indexes the ascending field list

    static WaveSelection all() { return {Kind::All, {}}; }
    static WaveSelection none() { return {Kind::None, {}}; }
    static WaveSelection linearly_degenerate() { return {Kind::LinearlyDegenerate, {}}; }
    static WaveSelection only(std::vector<int> idx) { return {Kind::Explicit, std::move(idx)}; }
};

/// Scalar the flattener looks at (pressure or depth) and the normal velocity.
struct ShockSensor {
    double indicator = 1.0;
    double normal_velocity = 0.0;
};

using Parameters = std::map<std::string, double>;

class System {
public:
    virtual ~System() = default;

    virtual std::string name() const = 0;
    virtual int size() const = 0;
    virtual Parameters parameters() const = 0;

    virtual Vector flux(const Vector& u) const = 0;
    /// C(U) = dF/dU.
    virtual Matrix flux_jacobian(const Vector& u) const = 0;

    virtual bool has_nonconservative() const { return false; }
    virtual Matrix nonconservative_matrix(const Vector& u) const {
        return Matrix::Zero(u.size(), u.size());
    }

    virtual bool has_stiff_source() const { return false; }
    virtual Vector source(const Vector& u) const { return Vector::Zero(u.size()); }
    virtual Matrix source_jacobian(const Vector& u) const { return Matrix::Zero(u.size(), u.size()); }

    /// Fields the system can provide at U, ascending in eigenvalue, biorthonormal.
    /// May return fewer than M fields where some are singular (resonance, dry states).
    virtual std::vector<EigenField> eigenfields(const Vector& u) const = 0;

    /// Smallest and largest characteristic speed at U.
    virtual std::pair<double, double> eigenvalue_bounds(const Vector& u) const = 0;

    virtual Vector prim_to_cons(const Vector& w) const = 0;
    virtual Vector cons_to_prim(const Vector& u) const = 0;
    /// dU/dW evaluated at primitive state W.
    virtual Matrix cons_prim_jacobian(const Vector& w) const = 0;
    virtual std::vector<std::string> primitive_names() const = 0;

    /// nullopt when admissible, otherwise a human-readable reason.
    virtual std::optional<std::string> admissibility(const Vector& u) const = 0;

    virtual ShockSensor shock_sensor(const Vector& u) const = 0;

    /// Scheme-level positivity policy; returns how many quantities were floored.
    virtual int apply_floors(Vector& /*u*/, double /*floor*/) const { return 0; }

    double max_signal_speed(const Vector& u) const {
        const auto [lo, hi] = eigenvalue_bounds(u);
        return std::max(std::abs(lo), std::abs(hi));
    }

    void require_admissible(const Vector& u) const {
        if (u.size() != size()) throw DimensionError(name() + ": state has wrong length");
        if (!u.allFinite()) throw AdmissibilityError(name() + ": non-finite state");
        if (auto why = admissibility(u)) throw AdmissibilityError(name() + ": " + *why);
    }
};

using SystemPtr = std::shared_ptr<const System>;

/// A(U) = C(U) + B(U).
inline Matrix char_matrix(const System& sys, const Vector& u) {
    sys.require_admissible(u);
    Matrix a = sys.flux_jacobian(u);
    if (sys.has_nonconservative()) a += sys.nonconservative_matrix(u);
    return a;
}

/// Largest |C_ij - dF_i/dU_j| against central differences with step h (scaled by
/// max(1, |U_j|) per component).
inline double check_jacobian(const System& sys, const Vector& u, double h) {
    const Matrix c = sys.flux_jacobian(u);
    double worst = 0.0;
    for (int j = 0; j < u.size(); ++j) {
        const double step = h * std::max(1.0, std::abs(u(j)));
        Vector up = u, dn = u;
        up(j) += step;
        dn(j) -= step;
        const Vector column = (sys.flux(up) - sys.flux(dn)) / (2.0 * step);
        worst = std::max(worst, (c.col(j) - column).cwiseAbs().maxCoeff());
    }
    return worst;
}

/// The subset of fields requested for the HLLI correction.
inline std::vector<EigenField> eigensystem(const System& sys, const Vector& u,
                                           const WaveSelection& subset) {
    if (subset.kind == WaveSelection::Kind::None) return {};
    sys.require_admissible(u);
    std::vector<EigenField> fields = sys.eigenfields(u);
    switch (subset.kind) {
        case WaveSelection::Kind::All:
            return fields;
        case WaveSelection::Kind::LinearlyDegenerate: {
            std::erase_if(fields, [](const EigenField& f) { return f.kind != FieldKind::LinearlyDegenerate; });
            return fields;
        }
        case WaveSelection::Kind::Explicit: {
            std::vector<EigenField> picked;
            for (int i : subset.indices)
                if (i >= 0 && i < static_cast<int>(fields.size())) picked.push_back(fields[static_cast<std::size_t>(i)]);
            return picked;
        }
        case WaveSelection::Kind::None:
            break;
    }
    return {};
}

/// Builds fields from a right-eigenvector matrix (columns) and eigenvalues; left
/// vectors are the rows of its inverse, so the pair is biorthonormal.
inline std::vector<EigenField> fields_from_right_basis(const Vector& lambda, const Matrix& right,
                                                       const std::vector<FieldKind>& kinds) {
    const Matrix left = inverse(right);
    std::vector<EigenField> fields(static_cast<std::size_t>(lambda.size()));
    for (Eigen::Index p = 0; p < lambda.size(); ++p) {
        auto& f = fields[static_cast<std::size_t>(p)];
        f.eigenvalue = lambda(p);
        f.right = right.col(p);
        f.left = left.row(p).transpose();
        f.kind = kinds[static_cast<std::size_t>(p)];
    }
    std::stable_sort(fields.begin(), fields.end(),
                     [](const EigenField& a, const EigenField& b) { return a.eigenvalue < b.eigenvalue; });
    return fields;
}

}  // namespace grp
