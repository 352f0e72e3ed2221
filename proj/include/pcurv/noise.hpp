#pragma once

#include "pcurv/errors.hpp"
#include "pcurv/point_cloud.hpp"
#include "pcurv/rng.hpp"

namespace pcurv {

enum class NoiseKind { Gaussian, Uniform };

/// Additive per-coordinate noise: gaussian N(0, scale^2) or uniform
/// U(-scale, scale), independent per coordinate. The input is left
/// untouched; output is deterministic in the seed.
inline PointCloud add_noise(const PointCloud& cloud, NoiseKind kind, Real scale,
                            std::uint64_t seed) {
    require(scale >= 0, ErrorCode::NegativeScale, "noise scale must be nonnegative");
    Matrix pts = cloud.points;
    CounterRng rng(seed, /*stream=*/1);
    const Index n = pts.cols();
    const Index d = pts.rows();
    if (kind == NoiseKind::Gaussian) {
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < d; ++j) pts(j, i) += scale * rng.next_gaussian_pair().first;
    } else {
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < d; ++j) pts(j, i) += scale * (2.0 * rng.next_real() - 1.0);
    }
    return PointCloud(std::move(pts));
}

}  // namespace pcurv
