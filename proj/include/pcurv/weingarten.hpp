#pragma once

#include <cstdint>
#include <vector>

#include "pcurv/linalg.hpp"
#include "pcurv/normals.hpp"
#include "pcurv/parallel.hpp"
#include "pcurv/vcm.hpp"

namespace pcurv {

struct PointFlags {
    bool failed = false;            // no operator could be produced
    ErrorCode error = ErrorCode::Ok;
    bool ridge_used = false;
    bool insufficient_neighbors = false;  // fewer than m neighbors survived masking
    Index neighbor_count = 0;

    /// Clean points are the ones metrics may average over.
    bool clean() const { return !failed && !insufficient_neighbors; }
};

/// Per-point m x m shape operator expressed in that point's tangent basis,
/// with diagnostics. Failed points carry a zero matrix and a flag, never NaN.
struct ShapeOperatorField {
    std::vector<Matrix> operators;
    std::vector<PointFlags> flags;
    Index intrinsic_dim = 0;

    Index size() const { return static_cast<Index>(operators.size()); }
};

struct WmeOptions {
    /// Sign-align each neighbor normal against the center normal before
    /// differencing. Estimated normal fields carry arbitrary per-point signs;
    /// unaligned differences corrupt the regression.
    bool align_neighbor_normals = true;
    std::optional<Real> ridge;  // forwarded to weingarten_lls
    int workers = 0;
};

/// Weingarten map estimation by weighted least squares over normal
/// differences: per point, gather neighbors under `mask_spec`, project
/// position and normal differences onto the tangent basis and solve
///   S = -Xi W Delta^T (Delta W Delta^T)^-1,
/// then symmetrize. Frames must cover every point and have codimension 1.
inline ShapeOperatorField wme(const PointCloud& cloud, const FrameField& frames,
                              const NeighborhoodSpec& mask_spec, const WmeOptions& options = {}) {
    const Index n = cloud.size();
    require(static_cast<Index>(frames.size()) == n, ErrorCode::LengthMismatch,
            "one frame per point required");
    require(!frames.empty() && frames[0].codim() == 1, ErrorCode::CodimensionNotOne,
            "wme requires codimension-1 frames");
    const Index m = frames[0].intrinsic_dim();
    const KdTree index(cloud);

    ShapeOperatorField field;
    field.intrinsic_dim = m;
    field.operators.assign(static_cast<std::size_t>(n), Matrix::Zero(m, m));
    field.flags.assign(static_cast<std::size_t>(n), PointFlags{});

    parallel_for(
        n,
        [&](Index i) {
            auto& flags = field.flags[static_cast<std::size_t>(i)];
            WeightedNeighbors nb;
            try {
                nb = index.neighbors(i, mask_spec);
            } catch (const Error& e) {
                flags.failed = true;
                flags.error = e.code();
                return;
            }
            const Index k = nb.count();
            flags.neighbor_count = k;
            flags.insufficient_neighbors = k < m;

            const Matrix& tangent = frames[static_cast<std::size_t>(i)].tangent_basis;
            const Vector zeta_i = frames[static_cast<std::size_t>(i)].normal_basis.col(0);
            Matrix delta(m, k), xi(m, k);
            Vector weights(k);
            for (Index t = 0; t < k; ++t) {
                const Index j = nb.indices[static_cast<std::size_t>(t)];
                Vector zeta_j = frames[static_cast<std::size_t>(j)].normal_basis.col(0);
                if (options.align_neighbor_normals && zeta_j.dot(zeta_i) < 0) zeta_j = -zeta_j;
                delta.col(t) = tangent.transpose() * (cloud.points.col(j) - cloud.points.col(i));
                xi.col(t) = tangent.transpose() * (zeta_j - zeta_i);
                weights[t] = nb.weights[static_cast<std::size_t>(t)];
            }
            try {
                LlsResult lls = weingarten_lls(xi, delta, weights, options.ridge);
                field.operators[static_cast<std::size_t>(i)] =
                    ((lls.S + lls.S.transpose()) / 2.0).eval();
                flags.ridge_used = lls.ridge_used;
            } catch (const Error& e) {
                flags.failed = true;
                flags.error = e.code();
            }
        },
        options.workers);
    return field;
}

struct VwmeResult {
    ShapeOperatorField operators;
    FrameField frames;        // VCM eigenframes, mean-offset oriented
    TensorField convolved;    // the smoothed tensor field behind the frames
};

/// VCM-framed Weingarten estimation: Monte-Carlo VCM, local convolution
/// under `conv_spec`, eigenframes of the smoothed tensors (normals oriented
/// along the convolved mean offset), then the same least-squares pipeline as
/// wme under `mask_spec`.
inline VwmeResult vwme(const PointCloud& cloud, Real R, std::int64_t vcm_samples,
                       std::uint64_t seed, const NeighborhoodSpec& conv_spec,
                       const NeighborhoodSpec& mask_spec, Index m,
                       const WmeOptions& options = {}) {
    require(vcm_samples >= 1, ErrorCode::InvalidParams, "need at least one VCM sample");
    McvcmOptions mc;
    mc.workers = options.workers;
    const TensorField raw = mcvcm(cloud, R, vcm_samples, seed, mc);
    TensorField conv = convolve_vcm(raw, cloud, conv_spec);

    VwmeResult out;
    out.frames.reserve(static_cast<std::size_t>(cloud.size()));
    for (Index i = 0; i < cloud.size(); ++i)
        out.frames.push_back(vcm_frame(conv.tensors[static_cast<std::size_t>(i)], m));
    if (cloud.dim() - m == 1) out.frames = align_frames(std::move(out.frames), conv.mean_offsets);
    out.operators = wme(cloud, out.frames, mask_spec, options);
    out.convolved = std::move(conv);
    return out;
}

/// Curvature quantities derived from a shape operator field: H = tr(S)/m,
/// K = det(S), principal curvatures ascending with their directions mapped
/// back to ambient coordinates through the tangent basis.
struct CurvatureField {
    Vector mean_curvature;        // n
    Vector gaussian_curvature;    // n
    Matrix principal;             // m x n, ascending per column
    std::vector<Matrix> directions;  // per point N x m
    std::vector<PointFlags> flags;

    Index size() const { return mean_curvature.size(); }
};

inline CurvatureField curvatures(const ShapeOperatorField& field, const FrameField& frames) {
    const Index n = field.size();
    require(static_cast<Index>(frames.size()) == n, ErrorCode::LengthMismatch,
            "one frame per operator required");
    const Index m = field.intrinsic_dim;

    CurvatureField out;
    out.mean_curvature.setZero(n);
    out.gaussian_curvature.setZero(n);
    out.principal.setZero(m, n);
    out.directions.assign(static_cast<std::size_t>(n), Matrix());
    out.flags = field.flags;

    for (Index i = 0; i < n; ++i) {
        const Matrix& S = field.operators[static_cast<std::size_t>(i)];
        out.mean_curvature[i] = S.trace() / static_cast<Real>(m);
        out.gaussian_curvature[i] = S.determinant();
        const EigenPair eig = sym_eigen((S + S.transpose()) / 2.0);
        out.principal.col(i) = eig.values;
        out.directions[static_cast<std::size_t>(i)] =
            frames[static_cast<std::size_t>(i)].tangent_basis * eig.vectors;
    }
    return out;
}

}  // namespace pcurv
