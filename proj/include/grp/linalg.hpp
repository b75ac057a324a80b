#pragma once

// Small dense linear algebra for the face-local kernels. Sizes are tiny
// (M <= 8, stacked systems 2M x M), so everything is dynamic-size Eigen.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "grp/error.hpp"

namespace grp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct LinalgTolerances {
    /// linear_solve: pivot below this fraction of ||A||_inf is singular.
    double singular_pivot = 1e-14;
    /// least_squares: singular values below this fraction of the largest are truncated.
    double rank_cut = 1e-10;
    /// eigen_general: imaginary parts above this fraction of the spectral radius are fatal.
    double imaginary_part = 1e-8;
};

inline const LinalgTolerances& default_linalg_tolerances() {
    static const LinalgTolerances tol{};
    return tol;
}

/// Row-major construction with the finiteness check of the DenseMatrix contract.
inline Matrix dense_matrix(int rows, int cols, std::initializer_list<double> entries) {
    if (rows < 1 || cols < 1 || static_cast<int>(entries.size()) != rows * cols)
        throw DimensionError("dense_matrix: entry count does not match rows x cols");
    Matrix a(rows, cols);
    auto it = entries.begin();
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j, ++it) {
            if (!std::isfinite(*it)) throw DimensionError("dense_matrix: non-finite entry");
            a(i, j) = *it;
        }
    return a;
}

inline Vector make_vector(std::initializer_list<double> entries) {
    Vector v(static_cast<Eigen::Index>(entries.size()));
    std::copy(entries.begin(), entries.end(), v.data());
    return v;
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

inline double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// Maximum absolute row sum.
inline double inf_norm(const Matrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff();
}

inline Vector mat_vec(const Matrix& a, const Vector& x) {
    if (a.cols() != x.size()) throw DimensionError("mat_vec: A.cols != length(x)");
    return a * x;
}

/// Gaussian elimination with partial pivoting.
inline Vector linear_solve(const Matrix& a, const Vector& b,
                           const LinalgTolerances& tol = default_linalg_tolerances()) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw DimensionError("linear_solve: matrix is not square");
    if (b.size() != n) throw DimensionError("linear_solve: length(b) != rows");

    Matrix lu = a;
    Vector x = b;
    const double threshold = tol.singular_pivot * inf_norm(a);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index pivot = k;
        for (Eigen::Index i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) pivot = i;
        if (!(std::abs(lu(pivot, k)) > threshold))
            throw SingularMatrixError("linear_solve: singular matrix");
        if (pivot != k) {
            lu.row(k).swap(lu.row(pivot));
            std::swap(x(k), x(pivot));
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const double factor = lu(i, k) / lu(k, k);
            if (factor == 0.0) continue;
            lu.row(i).tail(n - k) -= factor * lu.row(k).tail(n - k);
            x(i) -= factor * x(k);
        }
    }
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        double s = x(k);
        for (Eigen::Index j = k + 1; j < n; ++j) s -= lu(k, j) * x(j);
        x(k) = s / lu(k, k);
    }
    return x;
}

/// Inverse through repeated linear_solve; throws SingularMatrixError like linear_solve.
inline Matrix inverse(const Matrix& a, const LinalgTolerances& tol = default_linalg_tolerances()) {
    const Eigen::Index n = a.rows();
    Matrix inv(n, n);
    for (Eigen::Index j = 0; j < n; ++j) inv.col(j) = linear_solve(a, Vector::Unit(n, j), tol);
    return inv;
}

struct LeastSquaresReport {
    Vector solution;
    double residual_norm = 0.0;
    int effective_rank = 0;
    double condition_estimate = 1.0;
};

/// Minimizes ||A x - b||_2. Full-rank problems go through a pivoted Householder QR;
/// when the numerical rank drops below cols the minimum-norm minimizer comes from a
/// truncated SVD. Rank deficiency is reported, never thrown.
inline LeastSquaresReport least_squares(const Matrix& a, const Vector& b,
                                        const LinalgTolerances& tol = default_linalg_tolerances()) {
    if (a.rows() < a.cols()) throw DimensionError("least_squares: rows < cols");
    if (b.size() != a.rows()) throw DimensionError("least_squares: length(b) != rows");

    LeastSquaresReport report;
    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    qr.setThreshold(tol.rank_cut);
    const auto& r = qr.matrixR();
    const double r_max = a.cols() > 0 ? std::abs(r(0, 0)) : 0.0;

    if (r_max > 0.0 && qr.rank() == a.cols()) {
        report.solution = qr.solve(b);
        report.effective_rank = static_cast<int>(a.cols());
        const double r_min = std::abs(r(a.cols() - 1, a.cols() - 1));
        report.condition_estimate = r_min > 0.0 ? r_max / r_min : std::numeric_limits<double>::infinity();
    } else {
        Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Vector& sigma = svd.singularValues();
        const double cut = tol.rank_cut * (sigma.size() > 0 ? sigma(0) : 0.0);
        Vector x = Vector::Zero(a.cols());
        int rank = 0;
        for (Eigen::Index k = 0; k < sigma.size(); ++k) {
            if (!(sigma(k) > cut)) break;
            x += svd.matrixV().col(k) * (svd.matrixU().col(k).dot(b) / sigma(k));
            ++rank;
        }
        report.solution = x;
        report.effective_rank = rank;
        report.condition_estimate = std::numeric_limits<double>::infinity();
    }
    report.residual_norm = (a * report.solution - b).norm();
    return report;
}

struct EigenDecomposition {
    Vector values;  ///< ascending
    Matrix right;   ///< columns are right eigenvectors
    Matrix left;    ///< rows are left eigenvectors, left * right = I
    double condition = 1.0;  ///< ||R||_1 ||L||_1 of the returned basis
};

namespace detail {

// Parlett-Reinsch balancing: returns D such that D^{-1} A D has comparable row and
// column norms. Scaling factors are powers of two, so balancing is exact.
inline Vector balance(Matrix& a) {
    const Eigen::Index n = a.rows();
    Vector d = Vector::Ones(n);
    constexpr double radix = 2.0;
    bool converged = false;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            const double s = c + r;
            double f = 1.0;
            double g = r / radix;
            while (c < g) {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix * radix;
            }
            if ((c + r) / f < 0.95 * s) {
                converged = false;
                d(i) *= f;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
    return d;
}

}  // namespace detail

/// Real eigendecomposition of a general square matrix with (assumed) real spectrum.
/// Eigenvalues ascend; left/right bases are biorthonormal (l^p . r^q = delta_pq).
inline EigenDecomposition eigen_general(const Matrix& a,
                                        const LinalgTolerances& tol = default_linalg_tolerances()) {
    if (a.rows() != a.cols()) throw DimensionError("eigen_general: matrix is not square");
    if (!a.allFinite()) throw DimensionError("eigen_general: non-finite entry");
    const Eigen::Index n = a.rows();

    Matrix balanced = a;
    const Vector scale = detail::balance(balanced);

    Eigen::EigenSolver<Matrix> solver(balanced, true);
    if (solver.info() != Eigen::Success) throw HyperbolicityError("eigen_general: QR iteration failed");

    const auto& lambda = solver.eigenvalues();
    double radius = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) radius = std::max(radius, std::abs(lambda(k)));
    for (Eigen::Index k = 0; k < n; ++k)
        if (std::abs(lambda(k).imag()) > tol.imaginary_part * std::max(radius, 1e-300))
            throw HyperbolicityError("eigen_general: complex eigenvalue");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index p, Eigen::Index q) { return lambda(p).real() < lambda(q).real(); });

    EigenDecomposition out;
    out.values.resize(n);
    out.right.resize(n, n);
    const auto vectors = solver.eigenvectors();
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.values(k) = lambda(src).real();
        Vector v = scale.asDiagonal() * vectors.col(src).real();
        const double norm = v.norm();
        if (norm > 0.0) v /= norm;
        out.right.col(k) = v;
    }
    try {
        out.left = inverse(out.right, tol);
    } catch (const SingularMatrixError&) {
        throw HyperbolicityError("eigen_general: eigenvectors are not complete (defective matrix)");
    }
    out.condition = out.right.cwiseAbs().colwise().sum().maxCoeff() *
                    out.left.cwiseAbs().colwise().sum().maxCoeff();
    return out;
}

/// Eigenvalues only (ascending), for wave-speed bounds where vectors are not needed.
/// Defective matrices are fine here; complex spectra still throw.
inline Vector real_eigenvalues(const Matrix& a,
                               const LinalgTolerances& tol = default_linalg_tolerances()) {
    if (a.rows() != a.cols()) throw DimensionError("real_eigenvalues: matrix is not square");
    if (!a.allFinite()) throw DimensionError("real_eigenvalues: non-finite entry");
    Matrix balanced = a;
    detail::balance(balanced);
    Eigen::EigenSolver<Matrix> solver(balanced, false);
    if (solver.info() != Eigen::Success) throw HyperbolicityError("real_eigenvalues: QR iteration failed");
    const auto& lambda = solver.eigenvalues();
    double radius = 0.0;
    for (Eigen::Index k = 0; k < lambda.size(); ++k) radius = std::max(radius, std::abs(lambda(k)));
    // Defective clusters split into O(sqrt(eps)) complex pairs, so the tolerance here
    // is looser than the eigenvector path.
    const double imag_tol = std::max(tol.imaginary_part, 1e-6);
    Vector values(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        if (std::abs(lambda(k).imag()) > imag_tol * std::max(radius, 1e-300))
            throw HyperbolicityError("real_eigenvalues: complex eigenvalue");
        values(k) = lambda(k).real();
    }
    std::sort(values.data(), values.data() + values.size());
    return values;
}

}  // namespace grp
