#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "pcurv/errors.hpp"
#include "pcurv/types.hpp"

namespace pcurv {

template <typename Scalar>
struct EigenPairT {
    VectorX<Scalar> values;   // ascending
    MatrixX<Scalar> vectors;  // orthonormal columns, vectors.col(j) <-> values[j]
};

using EigenPair = EigenPairT<Real>;

namespace detail {

/// Fixes each eigenvector's sign so its largest-magnitude component is
/// nonnegative (first such component on ties). Keeps results identical
/// across platforms and runs.
template <typename Scalar>
void canonicalize_signs(MatrixX<Scalar>& vectors) {
    for (Index j = 0; j < vectors.cols(); ++j) {
        Index imax = 0;
        Scalar amax = 0;
        for (Index i = 0; i < vectors.rows(); ++i) {
            const Scalar a = std::abs(vectors(i, j));
            if (a > amax) {
                amax = a;
                imax = i;
            }
        }
        if (vectors(imax, j) < Scalar(0)) vectors.col(j) = -vectors.col(j);
    }
}

}  // namespace detail

/// Eigendecomposition of a small (dim <= 10) symmetric matrix by cyclic
/// Jacobi rotations. Eigenvalues ascending, eigenvectors orthonormal with
/// canonical signs.
template <typename Derived>
EigenPairT<typename Derived::Scalar> sym_eigen(const Eigen::MatrixBase<Derived>& M) {
    using Scalar = typename Derived::Scalar;
    const Index n = M.rows();
    require(n > 0 && M.cols() == n, ErrorCode::DimensionMismatch, "sym_eigen: square matrix expected");
    require(n <= kMaxAmbientDim, ErrorCode::InvalidInput, "sym_eigen: dim > 10");
    require(M.allFinite(), ErrorCode::InvalidInput, "sym_eigen: non-finite entries");

    MatrixX<Scalar> A = (M + M.transpose()) / Scalar(2);
    MatrixX<Scalar> V = MatrixX<Scalar>::Identity(n, n);

    const Scalar scale = A.norm();
    const Scalar tol = scale * Scalar(1e-15);
    constexpr int kMaxSweeps = 64;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        Scalar off = 0;
        for (Index p = 0; p < n; ++p)
            for (Index q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
        if (std::sqrt(Scalar(2) * off) <= tol) break;

        for (Index p = 0; p < n; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const Scalar apq = A(p, q);
                if (std::abs(apq) <= scale * std::numeric_limits<Scalar>::epsilon() * Scalar(0.01))
                    continue;
                const Scalar theta = (A(q, q) - A(p, p)) / (Scalar(2) * apq);
                const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                                 (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
                const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
                const Scalar s = t * c;
                const Scalar tau = s / (Scalar(1) + c);

                const Scalar app = A(p, p), aqq = A(q, q);
                A(p, p) = app - t * apq;
                A(q, q) = aqq + t * apq;
                A(p, q) = A(q, p) = Scalar(0);
                for (Index r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const Scalar arp = A(r, p), arq = A(r, q);
                        A(r, p) = A(p, r) = arp - s * (arq + tau * arp);
                        A(r, q) = A(q, r) = arq + s * (arp - tau * arq);
                    }
                    const Scalar vrp = V(r, p), vrq = V(r, q);
                    V(r, p) = vrp - s * (vrq + tau * vrp);
                    V(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    // sort ascending, carry vectors
    EigenPairT<Scalar> out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        if (A(a, a) != A(b, b)) return A(a, a) < A(b, b);
        return a < b;
    });
    for (Index j = 0; j < n; ++j) {
        out.values[j] = A(order[static_cast<std::size_t>(j)], order[static_cast<std::size_t>(j)]);
        out.vectors.col(j) = V.col(order[static_cast<std::size_t>(j)]);
    }
    detail::canonicalize_signs(out.vectors);
    return out;
}

template <typename Scalar>
struct LlsResultT {
    MatrixX<Scalar> S;        // m x m
    bool ridge_used = false;  // regularized or truncated inverse was needed
};

using LlsResult = LlsResultT<Real>;

/// Weighted least squares for the shape operator: solves
///   S = -Xi W Delta^T (Delta W Delta^T)^-1
/// with Xi, Delta m x n and W = diag(weights). When Delta W Delta^T is
/// singular or has condition number above 1e12 the inverse is replaced by
/// (Delta W Delta^T + ridge I)^-1 and the fallback is reported. A negative
/// `ridge` value (or none) selects the scale-invariant default
/// 1e-10 * trace / m; an explicit ridge of 0 falls back to a pseudo-inverse
/// when needed.
template <typename DerivedXi, typename DerivedDelta>
LlsResultT<typename DerivedXi::Scalar> weingarten_lls(
    const Eigen::MatrixBase<DerivedXi>& Xi, const Eigen::MatrixBase<DerivedDelta>& Delta,
    const VectorX<typename DerivedXi::Scalar>& weights,
    std::optional<typename DerivedXi::Scalar> ridge = std::nullopt) {
    using Scalar = typename DerivedXi::Scalar;
    const Index m = Delta.rows();
    const Index n = Delta.cols();
    require(Xi.rows() == m && Xi.cols() == n, ErrorCode::DimensionMismatch,
            "weingarten_lls: Xi and Delta shapes differ");
    require(weights.size() == n, ErrorCode::DimensionMismatch,
            "weingarten_lls: weight count != column count");
    require((weights.array() >= Scalar(0)).all(), ErrorCode::InvalidInput,
            "weingarten_lls: negative weight");
    require(weights.sum() > Scalar(0), ErrorCode::AllWeightsZero, "weingarten_lls: trace(W) = 0");

    const MatrixX<Scalar> DW = Delta * weights.asDiagonal();
    const MatrixX<Scalar> A = DW * Delta.transpose();          // m x m, PSD
    const MatrixX<Scalar> B = -(Xi * weights.asDiagonal()) * Delta.transpose();

    const auto eig = sym_eigen(A);
    const Scalar lmax = eig.values[m - 1];
    const Scalar lmin = eig.values[0];
    constexpr Scalar kCondLimit = Scalar(1e12);
    const bool degenerate = !(lmin > 0) || lmax > kCondLimit * lmin;

    LlsResultT<Scalar> out;
    out.ridge_used = degenerate;
    if (!degenerate) {
        out.S = B * (eig.vectors * eig.values.cwiseInverse().asDiagonal() * eig.vectors.transpose());
        return out;
    }

    Scalar lambda;
    if (ridge.has_value() && *ridge >= Scalar(0)) {
        lambda = *ridge;
    } else {
        lambda = Scalar(1e-10) * A.trace() / static_cast<Scalar>(m);
    }
    VectorX<Scalar> inv(m);
    for (Index j = 0; j < m; ++j) {
        const Scalar d = eig.values[j] + lambda;
        inv[j] = (d > lmax * std::numeric_limits<Scalar>::epsilon()) ? Scalar(1) / d : Scalar(0);
    }
    out.S = B * (eig.vectors * inv.asDiagonal() * eig.vectors.transpose());
    return out;
}

}  // namespace pcurv
