#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pcurv/point_cloud.hpp"
#include "pcurv/weingarten.hpp"

namespace pcurv {

inline Real cosine_similarity(const Vector& a, const Vector& b) {
    const Real na = a.norm(), nb = b.norm();
    require(na > 0 && nb > 0, ErrorCode::ZeroVector, "cosine of a zero vector");
    return a.dot(b) / (na * nb);
}

inline Real abs_cosine_similarity(const Vector& a, const Vector& b) {
    return std::abs(cosine_similarity(a, b));
}

enum class MseMode { Signed, Absolute };

/// Mean squared mean-curvature error over the points whose flags are clean;
/// failed points are the caller's failure-rate business, never silently
/// averaged in.
inline Real curvature_mse(const CurvatureField& estimated, const GroundTruth& truth,
                          MseMode mode) {
    require(truth.has_mean(), ErrorCode::InvalidInput, "ground truth lacks mean curvature");
    require(estimated.size() == truth.mean_curvature.size(), ErrorCode::LengthMismatch,
            "field lengths differ");
    Real sum = 0;
    Index used = 0;
    for (Index i = 0; i < estimated.size(); ++i) {
        if (!estimated.flags[static_cast<std::size_t>(i)].clean()) continue;
        const Real e = estimated.mean_curvature[i];
        const Real t = truth.mean_curvature[i];
        const Real d = mode == MseMode::Signed ? e - t : std::abs(e) - std::abs(t);
        sum += d * d;
        ++used;
    }
    require(used > 0, ErrorCode::EmptyInput, "no clean points to average");
    return sum / static_cast<Real>(used);
}

/// Same contract for Gaussian curvature.
inline Real gaussian_curvature_mse(const CurvatureField& estimated, const GroundTruth& truth,
                                   MseMode mode) {
    require(truth.has_gauss(), ErrorCode::InvalidInput, "ground truth lacks Gaussian curvature");
    require(estimated.size() == truth.gaussian_curvature.size(), ErrorCode::LengthMismatch,
            "field lengths differ");
    Real sum = 0;
    Index used = 0;
    for (Index i = 0; i < estimated.size(); ++i) {
        if (!estimated.flags[static_cast<std::size_t>(i)].clean()) continue;
        const Real e = estimated.gaussian_curvature[i];
        const Real t = truth.gaussian_curvature[i];
        const Real d = mode == MseMode::Signed ? e - t : std::abs(e) - std::abs(t);
        sum += d * d;
        ++used;
    }
    require(used > 0, ErrorCode::EmptyInput, "no clean points to average");
    return sum / static_cast<Real>(used);
}

inline Real failure_rate(const std::vector<PointFlags>& flags) {
    if (flags.empty()) return 0;
    Index bad = 0;
    for (const auto& f : flags)
        if (!f.clean()) ++bad;
    return static_cast<Real>(bad) / static_cast<Real>(flags.size());
}

struct Summary {
    Real mean = 0;
    Real median = 0;
    Real stddev = 0;
    std::vector<Index> counts;  // histogram over [min, max], equal widths
    std::vector<Real> edges;    // counts.size() + 1 edges
};

inline Summary summarize(const std::vector<Real>& values, Index bins) {
    require(!values.empty(), ErrorCode::EmptyInput, "summarize needs at least one value");
    require(bins >= 1, ErrorCode::InvalidParams, "need at least one bin");
    Summary s;
    const Index n = static_cast<Index>(values.size());
    for (Real v : values) s.mean += v;
    s.mean /= static_cast<Real>(n);
    Real var = 0;
    for (Real v : values) var += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(var / static_cast<Real>(n));

    std::vector<Real> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    s.median = n % 2 ? sorted[static_cast<std::size_t>(n / 2)]
                     : (sorted[static_cast<std::size_t>(n / 2 - 1)] +
                        sorted[static_cast<std::size_t>(n / 2)]) /
                           2.0;

    const Real lo = sorted.front();
    const Real hi = sorted.back();
    s.counts.assign(static_cast<std::size_t>(bins), 0);
    s.edges.resize(static_cast<std::size_t>(bins) + 1);
    const Real width = hi > lo ? (hi - lo) / static_cast<Real>(bins) : 1.0;
    for (Index b = 0; b <= bins; ++b)
        s.edges[static_cast<std::size_t>(b)] = lo + width * static_cast<Real>(b);
    for (Real v : values) {
        Index b = static_cast<Index>((v - lo) / width);
        b = std::clamp<Index>(b, 0, bins - 1);
        ++s.counts[static_cast<std::size_t>(b)];
    }
    return s;
}

}  // namespace pcurv
