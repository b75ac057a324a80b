#pragma once

// Constant-coefficient system U_t + C U_x + B U_x = K U. Not registered with
// the CLI; it is the reference system for closed-form checks.

#include "grp/system.hpp"

namespace grp {

class LinearSystem final : public System {
public:
    /// b may be empty (no non-conservative part); k may be empty (no source).
    LinearSystem(Matrix c, Matrix b = {}, Matrix k = {}, bool treat_as_stiff = false)
        : c_(std::move(c)), b_(std::move(b)), k_(std::move(k)), stiff_(treat_as_stiff) {
        const auto m = c_.rows();
        if (c_.cols() != m) throw DimensionError("linear: C must be square");
        if (b_.size() == 0) b_ = Matrix::Zero(m, m);
        if (k_.size() == 0) k_ = Matrix::Zero(m, m);
        if (b_.rows() != m || b_.cols() != m || k_.rows() != m || k_.cols() != m)
            throw DimensionError("linear: B and K must match C");
        noncons_ = !b_.isZero(0.0);
        const Vector lam = real_eigenvalues(c_ + b_);
        lo_ = lam(0);
        hi_ = lam(lam.size() - 1);
    }

    std::string name() const override { return "linear"; }
    int size() const override { return static_cast<int>(c_.rows()); }
    Parameters parameters() const override { return {}; }

    Vector flux(const Vector& u) const override { return c_ * u; }
    Matrix flux_jacobian(const Vector&) const override { return c_; }
    bool has_nonconservative() const override { return noncons_; }
    Matrix nonconservative_matrix(const Vector&) const override { return b_; }
    bool has_stiff_source() const override { return stiff_ || !k_.isZero(0.0); }
    Vector source(const Vector& u) const override { return k_ * u; }
    Matrix source_jacobian(const Vector&) const override { return k_; }

    std::vector<EigenField> eigenfields(const Vector&) const override {
        const auto e = eigen_general(c_ + b_);
        std::vector<EigenField> out;
        for (Eigen::Index p = 0; p < e.values.size(); ++p)
            out.push_back({e.values(p), e.left.row(p).transpose(), e.right.col(p), FieldKind::LinearlyDegenerate});
        return out;
    }
    std::pair<double, double> eigenvalue_bounds(const Vector&) const override { return {lo_, hi_}; }

    Vector prim_to_cons(const Vector& w) const override { return w; }
    Vector cons_to_prim(const Vector& u) const override { return u; }
    Matrix cons_prim_jacobian(const Vector& w) const override { return Matrix::Identity(w.size(), w.size()); }
    std::vector<std::string> primitive_names() const override {
        std::vector<std::string> n;
        for (int i = 0; i < size(); ++i) n.push_back("q" + std::to_string(i));
        return n;
    }
    std::optional<std::string> admissibility(const Vector&) const override { return std::nullopt; }
    ShockSensor shock_sensor(const Vector& u) const override { return {1.0, u(0)}; }

private:
    Matrix c_, b_, k_;
    bool stiff_ = false, noncons_ = false;
    double lo_ = 0.0, hi_ = 0.0;
};

}  // namespace grp
