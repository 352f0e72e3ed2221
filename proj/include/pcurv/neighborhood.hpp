#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <variant>
#include <vector>

#include "pcurv/errors.hpp"
#include "pcurv/point_cloud.hpp"
#include "pcurv/types.hpp"

namespace pcurv {

/// Weight-assignment rule over a cloud. Exactly one variant is active.
struct NeighborhoodSpec {
    struct Knn {
        Index k;
    };
    struct EpsBall {
        Real eps;
    };
    struct GaussianKernel {
        Real bandwidth;
        Real cutoff;  // in multiples of the bandwidth
    };

    std::variant<Knn, EpsBall, GaussianKernel> variant;

    static NeighborhoodSpec knn(Index k) {
        require(k >= 1, ErrorCode::InvalidParams, "kNN requires k >= 1");
        return {Knn{k}};
    }
    static NeighborhoodSpec eps_ball(Real eps) {
        require(eps > 0, ErrorCode::InvalidParams, "eps-ball requires eps > 0");
        return {EpsBall{eps}};
    }
    static NeighborhoodSpec gaussian(Real bandwidth, Real cutoff = 3.0) {
        require(bandwidth > 0 && cutoff > 0, ErrorCode::InvalidParams,
                "gaussian kernel requires positive bandwidth and cutoff");
        return {GaussianKernel{bandwidth, cutoff}};
    }
};

/// Neighbor indices (query point excluded) sorted by distance, ties by
/// index; weights are 1 for indicator specs, exp(-d^2 / 2h^2) for the
/// gaussian kernel.
struct WeightedNeighbors {
    std::vector<Index> indices;
    std::vector<Real> weights;
    std::vector<Real> distances;

    Index count() const { return static_cast<Index>(indices.size()); }
};

/// Exact spatial index over a cloud. Median-split k-d tree; all queries are
/// exact and deterministic (distance ties broken by point index).
class KdTree {
  public:
    explicit KdTree(const PointCloud& cloud) : pts_(cloud.points) {
        const Index n = pts_.cols();
        perm_.resize(static_cast<std::size_t>(n));
        std::iota(perm_.begin(), perm_.end(), Index{0});
        nodes_.reserve(static_cast<std::size_t>(2 * n / kLeafSize + 2));
        root_ = build(0, n);
    }

    Index size() const { return pts_.cols(); }
    Index dim() const { return pts_.rows(); }

    /// Index of the cloud point nearest to an arbitrary query position.
    Index nearest(const Vector& q) const {
        Best best{std::numeric_limits<Real>::infinity(), -1};
        nearest_rec(root_, q, best);
        return best.index;
    }

    /// Number of cloud points within closed distance `radius` of `q`.
    Index count_within(const Vector& q, Real radius) const {
        Index count = 0;
        count_rec(root_, q, radius * radius, count);
        return count;
    }

    /// Neighbors of cloud point `i` under `spec`; `i` itself is excluded.
    WeightedNeighbors neighbors(Index i, const NeighborhoodSpec& spec) const {
        require(i >= 0 && i < size(), ErrorCode::InvalidInput, "query index out of range");
        const Vector q = pts_.col(i);
        WeightedNeighbors out;

        if (const auto* knn = std::get_if<NeighborhoodSpec::Knn>(&spec.variant)) {
            if (size() == 1) fail(ErrorCode::NoNeighbors, "cloud has a single point");
            require(knn->k < size(), ErrorCode::InsufficientPoints,
                    "kNN requires k < point count (query point excluded)");
            auto heap = knn_search(q, i, knn->k);
            std::sort(heap.begin(), heap.end());
            for (const auto& [d2, idx] : heap) {
                out.indices.push_back(idx);
                out.weights.push_back(1.0);
                out.distances.push_back(std::sqrt(d2));
            }
            return out;
        }

        Real radius = 0;
        bool gaussian = false;
        Real h = 0;
        if (const auto* ball = std::get_if<NeighborhoodSpec::EpsBall>(&spec.variant)) {
            radius = ball->eps;
        } else {
            const auto& g = std::get<NeighborhoodSpec::GaussianKernel>(spec.variant);
            radius = g.cutoff * g.bandwidth;
            h = g.bandwidth;
            gaussian = true;
        }
        std::vector<std::pair<Real, Index>> found;  // (d2, index), strict d < radius
        radius_search(root_, q, i, radius * radius, found);
        if (found.empty())
            fail(ErrorCode::SingletonPoint, "empty neighborhood at point " + std::to_string(i));
        std::sort(found.begin(), found.end());
        for (const auto& [d2, idx] : found) {
            out.indices.push_back(idx);
            out.weights.push_back(gaussian ? std::exp(-d2 / (2.0 * h * h)) : 1.0);
            out.distances.push_back(std::sqrt(d2));
        }
        return out;
    }

  private:
    static constexpr Index kLeafSize = 12;

    struct Node {
        Index axis = -1;  // -1 for leaves
        Real split = 0;
        Index begin = 0, end = 0;  // leaf range into perm_
        Index left = -1, right = -1;
    };

    struct Best {
        Real d2;
        Index index;
    };

    Index build(Index begin, Index end) {
        Node node;
        node.begin = begin;
        node.end = end;
        const Index count = end - begin;
        if (count <= kLeafSize) {
            nodes_.push_back(node);
            return static_cast<Index>(nodes_.size()) - 1;
        }
        // widest-extent axis
        Vector lo = pts_.col(perm_[static_cast<std::size_t>(begin)]);
        Vector hi = lo;
        for (Index t = begin + 1; t < end; ++t) {
            const auto col = pts_.col(perm_[static_cast<std::size_t>(t)]);
            lo = lo.cwiseMin(col);
            hi = hi.cwiseMax(col);
        }
        Index axis = 0;
        (hi - lo).maxCoeff(&axis);
        const Index mid = begin + count / 2;
        auto key = [&](Index a, Index b) {
            const Real va = pts_(axis, a), vb = pts_(axis, b);
            if (va != vb) return va < vb;
            return a < b;
        };
        std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end, key);
        node.axis = axis;
        node.split = pts_(axis, perm_[static_cast<std::size_t>(mid)]);
        const Index self = static_cast<Index>(nodes_.size());
        nodes_.push_back(node);
        const Index left = build(begin, mid);
        const Index right = build(mid, end);
        nodes_[static_cast<std::size_t>(self)].left = left;
        nodes_[static_cast<std::size_t>(self)].right = right;
        return self;
    }

    void nearest_rec(Index ni, const Vector& q, Best& best) const {
        const Node& node = nodes_[static_cast<std::size_t>(ni)];
        if (node.axis < 0) {
            for (Index t = node.begin; t < node.end; ++t) {
                const Index idx = perm_[static_cast<std::size_t>(t)];
                const Real d2 = (pts_.col(idx) - q).squaredNorm();
                if (d2 < best.d2 || (d2 == best.d2 && idx < best.index)) best = {d2, idx};
            }
            return;
        }
        const Real diff = q[node.axis] - node.split;
        const Index near = diff < 0 ? node.left : node.right;
        const Index far = diff < 0 ? node.right : node.left;
        nearest_rec(near, q, best);
        if (diff * diff <= best.d2) nearest_rec(far, q, best);
    }

    void count_rec(Index ni, const Vector& q, Real r2, Index& count) const {
        const Node& node = nodes_[static_cast<std::size_t>(ni)];
        if (node.axis < 0) {
            for (Index t = node.begin; t < node.end; ++t) {
                const Index idx = perm_[static_cast<std::size_t>(t)];
                if ((pts_.col(idx) - q).squaredNorm() <= r2) ++count;
            }
            return;
        }
        const Real diff = q[node.axis] - node.split;
        const Index near = diff < 0 ? node.left : node.right;
        const Index far = diff < 0 ? node.right : node.left;
        count_rec(near, q, r2, count);
        if (diff * diff <= r2) count_rec(far, q, r2, count);
    }

    void radius_search(Index ni, const Vector& q, Index self, Real r2,
                       std::vector<std::pair<Real, Index>>& found) const {
        const Node& node = nodes_[static_cast<std::size_t>(ni)];
        if (node.axis < 0) {
            for (Index t = node.begin; t < node.end; ++t) {
                const Index idx = perm_[static_cast<std::size_t>(t)];
                if (idx == self) continue;
                const Real d2 = (pts_.col(idx) - q).squaredNorm();
                if (d2 < r2) found.emplace_back(d2, idx);
            }
            return;
        }
        const Real diff = q[node.axis] - node.split;
        const Index near = diff < 0 ? node.left : node.right;
        const Index far = diff < 0 ? node.right : node.left;
        radius_search(near, q, self, r2, found);
        if (diff * diff < r2) radius_search(far, q, self, r2, found);
    }

    std::vector<std::pair<Real, Index>> knn_search(const Vector& q, Index self, Index k) const {
        // max-heap on (d2, index); an equal-distance smaller index wins
        std::vector<std::pair<Real, Index>> heap;
        heap.reserve(static_cast<std::size_t>(k));
        knn_rec(root_, q, self, k, heap);
        return heap;
    }

    void knn_rec(Index ni, const Vector& q, Index self, Index k,
                 std::vector<std::pair<Real, Index>>& heap) const {
        const Node& node = nodes_[static_cast<std::size_t>(ni)];
        if (node.axis < 0) {
            for (Index t = node.begin; t < node.end; ++t) {
                const Index idx = perm_[static_cast<std::size_t>(t)];
                if (idx == self) continue;
                const std::pair<Real, Index> cand{(pts_.col(idx) - q).squaredNorm(), idx};
                if (static_cast<Index>(heap.size()) < k) {
                    heap.push_back(cand);
                    std::push_heap(heap.begin(), heap.end());
                } else if (cand < heap.front()) {
                    std::pop_heap(heap.begin(), heap.end());
                    heap.back() = cand;
                    std::push_heap(heap.begin(), heap.end());
                }
            }
            return;
        }
        const Real diff = q[node.axis] - node.split;
        const Index near = diff < 0 ? node.left : node.right;
        const Index far = diff < 0 ? node.right : node.left;
        knn_rec(near, q, self, k, heap);
        if (static_cast<Index>(heap.size()) < k || diff * diff <= heap.front().first)
            knn_rec(far, q, self, k, heap);
    }

    Matrix pts_;
    std::vector<Index> perm_;
    std::vector<Node> nodes_;
    Index root_ = 0;
};

/// Convenience entry point matching the one-shot call shape.
inline KdTree build_index(const PointCloud& cloud) { return KdTree(cloud); }

inline WeightedNeighbors neighbors(const KdTree& index, Index i, const NeighborhoodSpec& spec) {
    return index.neighbors(i, spec);
}

}  // namespace pcurv
