#pragma once

#include <vector>

#include "pcurv/linalg.hpp"
#include "pcurv/neighborhood.hpp"
#include "pcurv/point_cloud.hpp"

namespace pcurv {

/// Orthonormal split of R^N at a point: N-m normal directions and m tangent
/// directions. `eigenvalues` keeps the full ascending spectrum of whichever
/// matrix produced the frame, as a diagnostic.
struct TangentFrame {
    Matrix normal_basis;   // N x (N-m)
    Matrix tangent_basis;  // N x m
    Vector eigenvalues;    // N

    Index ambient_dim() const { return tangent_basis.rows(); }
    Index intrinsic_dim() const { return tangent_basis.cols(); }
    Index codim() const { return normal_basis.cols(); }

    /// The single unit normal; only meaningful in codimension 1.
    Vector normal() const {
        require(codim() == 1, ErrorCode::CodimensionNotOne, "frame has codimension != 1");
        return normal_basis.col(0);
    }
};

using FrameField = std::vector<TangentFrame>;

/// PCA frame at point `i`: eigenvectors of the weighted covariance of the
/// neighborhood under `spec`. The N-m smallest-eigenvalue directions span
/// the normal space (least local spread), the m largest the tangent space.
/// In codimension 1 the normal is oriented away from the weighted
/// neighborhood mean; a zero dot keeps the canonical eigenvector sign.
inline TangentFrame pca_frame(const PointCloud& cloud, const KdTree& index, Index i,
                              const NeighborhoodSpec& spec, Index m) {
    const Index dim = cloud.dim();
    require(m >= 1 && m < dim, ErrorCode::InvalidParams, "intrinsic dim must satisfy 1 <= m < N");
    const WeightedNeighbors nb = index.neighbors(i, spec);

    Index informative = 0;
    for (Index t = 0; t < nb.count(); ++t)
        if (nb.distances[static_cast<std::size_t>(t)] > 0) ++informative;
    require(informative >= m, ErrorCode::DegenerateNeighborhood,
            "fewer than m non-collapsed neighbors");

    Vector mean = Vector::Zero(dim);
    Real wsum = 0;
    for (Index t = 0; t < nb.count(); ++t) {
        const Real w = nb.weights[static_cast<std::size_t>(t)];
        mean += w * cloud.points.col(nb.indices[static_cast<std::size_t>(t)]);
        wsum += w;
    }
    mean /= wsum;

    Matrix cov = Matrix::Zero(dim, dim);
    for (Index t = 0; t < nb.count(); ++t) {
        const Vector d = cloud.points.col(nb.indices[static_cast<std::size_t>(t)]) - mean;
        cov.noalias() += nb.weights[static_cast<std::size_t>(t)] * d * d.transpose();
    }

    const EigenPair eig = sym_eigen(cov);
    TangentFrame frame;
    frame.eigenvalues = eig.values;
    frame.normal_basis = eig.vectors.leftCols(dim - m);
    frame.tangent_basis = eig.vectors.rightCols(m);
    if (dim - m == 1) {
        const Real d = frame.normal_basis.col(0).dot(cloud.points.col(i) - mean);
        if (d < 0) frame.normal_basis.col(0) = -frame.normal_basis.col(0);
    }
    return frame;
}

inline TangentFrame pca_frame(const PointCloud& cloud, Index i, const NeighborhoodSpec& spec,
                              Index m) {
    return pca_frame(cloud, KdTree(cloud), i, spec, m);
}

/// Frame from a (convolved) VCM tensor. The VCM concentrates mass along the
/// normal cone, so the N-m LARGEST eigenvalue directions span the normal
/// space and the m smallest the tangent space -- the reverse of the PCA
/// ordering.
inline TangentFrame vcm_frame(const Matrix& convolved_vcm, Index m) {
    const Index dim = convolved_vcm.rows();
    require(dim == convolved_vcm.cols(), ErrorCode::DimensionMismatch, "square tensor expected");
    require(m >= 1 && m < dim, ErrorCode::InvalidParams, "intrinsic dim must satisfy 1 <= m < N");
    require(convolved_vcm.allFinite(), ErrorCode::InvalidInput, "non-finite tensor");

    const EigenPair eig = sym_eigen(convolved_vcm);
    TangentFrame frame;
    frame.eigenvalues = eig.values;
    frame.tangent_basis = eig.vectors.leftCols(m);
    // normal columns ordered by descending mass
    frame.normal_basis = eig.vectors.rightCols(dim - m).rowwise().reverse();
    return frame;
}

/// Sign-flips codimension-1 normals so that <n_i, reference_i> >= 0; a zero
/// dot keeps the original sign. References with zero norm are left alone.
inline FrameField align_frames(FrameField frames, const Matrix& references) {
    require(static_cast<Index>(frames.size()) == references.cols(), ErrorCode::LengthMismatch,
            "one reference per frame required");
    for (std::size_t i = 0; i < frames.size(); ++i) {
        require(frames[i].codim() == 1, ErrorCode::CodimensionNotOne,
                "align_frames requires codimension 1");
        const Real d = frames[i].normal_basis.col(0).dot(references.col(static_cast<Index>(i)));
        if (d < 0) frames[i].normal_basis.col(0) = -frames[i].normal_basis.col(0);
    }
    return frames;
}

/// Per-point PCA frames over the whole cloud. Throws on the first failing
/// point; per-point error capture is the estimator drivers' job.
inline FrameField pca_frames(const PointCloud& cloud, const KdTree& index,
                             const NeighborhoodSpec& spec, Index m) {
    FrameField frames;
    frames.reserve(static_cast<std::size_t>(cloud.size()));
    for (Index i = 0; i < cloud.size(); ++i) frames.push_back(pca_frame(cloud, index, i, spec, m));
    return frames;
}

}  // namespace pcurv
