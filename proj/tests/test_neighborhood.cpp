#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "pcurv/neighborhood.hpp"
#include "pcurv/rng.hpp"

using namespace pcurv;

namespace {

PointCloud random_cloud(CounterRng& rng, Index n, Index dim) {
    Matrix pts(dim, n);
    for (Index i = 0; i < pts.size(); ++i) pts.data()[i] = 4.0 * rng.next_real() - 2.0;
    return PointCloud{pts};
}

/// Linear-scan oracle with the same ordering and weight rules.
WeightedNeighbors brute_neighbors(const PointCloud& cloud, Index i, const NeighborhoodSpec& spec) {
    std::vector<std::pair<Real, Index>> all;
    for (Index j = 0; j < cloud.size(); ++j) {
        if (j == i) continue;
        all.emplace_back((cloud.points.col(j) - cloud.points.col(i)).squaredNorm(), j);
    }
    std::sort(all.begin(), all.end());
    WeightedNeighbors out;
    if (const auto* knn = std::get_if<NeighborhoodSpec::Knn>(&spec.variant)) {
        for (Index t = 0; t < knn->k && t < static_cast<Index>(all.size()); ++t) {
            out.indices.push_back(all[static_cast<std::size_t>(t)].second);
            out.weights.push_back(1.0);
            out.distances.push_back(std::sqrt(all[static_cast<std::size_t>(t)].first));
        }
        return out;
    }
    Real radius = 0, h = 0;
    bool gaussian = false;
    if (const auto* ball = std::get_if<NeighborhoodSpec::EpsBall>(&spec.variant)) {
        radius = ball->eps;
    } else {
        const auto& g = std::get<NeighborhoodSpec::GaussianKernel>(spec.variant);
        radius = g.cutoff * g.bandwidth;
        h = g.bandwidth;
        gaussian = true;
    }
    for (const auto& [d2, j] : all) {
        if (d2 >= radius * radius) break;
        out.indices.push_back(j);
        out.weights.push_back(gaussian ? std::exp(-d2 / (2 * h * h)) : 1.0);
        out.distances.push_back(std::sqrt(d2));
    }
    return out;
}

}  // namespace

TEST_CASE("two-point cloud kNN") {
    Matrix pts(2, 2);
    pts << 0, 1, 0, 0;
    const PointCloud cloud{pts};
    const KdTree index(cloud);
    const auto nb = index.neighbors(0, NeighborhoodSpec::knn(1));
    REQUIRE(nb.count() == 1);
    CHECK(nb.indices[0] == 1);
    CHECK(nb.weights[0] == 1.0);
}

TEST_CASE("gaussian kernel weight at unit distance") {
    Matrix pts(2, 2);
    pts << 0, 1, 0, 0;
    const KdTree index{PointCloud{pts}};
    const auto nb = index.neighbors(0, NeighborhoodSpec::gaussian(1.0));
    REQUIRE(nb.count() == 1);
    CHECK(nb.weights[0] == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("epsilon below minimum gap raises SingletonPoint") {
    Matrix pts(2, 3);
    pts << 0, 1, 2, 0, 0, 0;
    const KdTree index{PointCloud{pts}};
    try {
        static_cast<void>(index.neighbors(1, NeighborhoodSpec::eps_ball(0.5)));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingletonPoint);
    }
}

TEST_CASE("single-point cloud has no neighbors; oversized k is rejected") {
    const KdTree one{PointCloud{Matrix::Zero(3, 1)}};
    try {
        static_cast<void>(one.neighbors(0, NeighborhoodSpec::knn(1)));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoNeighbors);
    }

    Matrix pts(2, 3);
    pts << 0, 1, 2, 0, 0, 0;
    const KdTree index{PointCloud{pts}};
    try {
        static_cast<void>(index.neighbors(0, NeighborhoodSpec::knn(3)));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientPoints);
    }
}

TEST_CASE("spec parameters must be positive") {
    CHECK_THROWS_AS(static_cast<void>(NeighborhoodSpec::knn(0)), Error);
    CHECK_THROWS_AS(static_cast<void>(NeighborhoodSpec::eps_ball(0.0)), Error);
    CHECK_THROWS_AS(static_cast<void>(NeighborhoodSpec::gaussian(-1.0)), Error);
}

TEST_CASE("queries match the brute-force oracle on random clouds") {
    CounterRng rng(99);
    for (int rep = 0; rep < 100; ++rep) {
        const Index dim = 2 + static_cast<Index>(rng.next_below(3));
        const Index n = 2 + static_cast<Index>(rng.next_below(499));
        const PointCloud cloud = random_cloud(rng, n, dim);
        const KdTree index(cloud);
        const Index i = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n)));

        const Index k = 1 + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n - 1)));
        const auto spec_k = NeighborhoodSpec::knn(k);
        const auto got_k = index.neighbors(i, spec_k);
        const auto want_k = brute_neighbors(cloud, i, spec_k);
        REQUIRE(got_k.indices == want_k.indices);
        CHECK(got_k.count() == k);

        const Real eps = 0.2 + 2.0 * rng.next_real();
        const auto spec_e = NeighborhoodSpec::eps_ball(eps);
        WeightedNeighbors got_e, want_e;
        bool threw_got = false, threw_want = false;
        try {
            got_e = index.neighbors(i, spec_e);
        } catch (const Error&) {
            threw_got = true;
        }
        want_e = brute_neighbors(cloud, i, spec_e);
        threw_want = want_e.indices.empty();
        REQUIRE(threw_got == threw_want);
        if (!threw_got) REQUIRE(got_e.indices == want_e.indices);

        const auto spec_g = NeighborhoodSpec::gaussian(0.5 + rng.next_real());
        try {
            const auto got_g = index.neighbors(i, spec_g);
            const auto want_g = brute_neighbors(cloud, i, spec_g);
            REQUIRE(got_g.indices == want_g.indices);
            for (std::size_t t = 0; t < got_g.weights.size(); ++t)
                CHECK(got_g.weights[t] == doctest::Approx(want_g.weights[t]));
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::SingletonPoint);
            CHECK(brute_neighbors(cloud, i, spec_g).indices.empty());
        }
    }
}

TEST_CASE("ball counts are monotone in the radius and kNN counts exact") {
    CounterRng rng(123);
    const PointCloud cloud = random_cloud(rng, 200, 3);
    const KdTree index(cloud);
    Index prev = 0;
    for (Real eps : {0.1, 0.4, 0.8, 1.6, 3.2}) {
        Index count = 0;
        try {
            count = index.neighbors(7, NeighborhoodSpec::eps_ball(eps)).count();
        } catch (const Error&) {
            count = 0;
        }
        CHECK(count >= prev);
        prev = count;
    }
    for (Index k : {1, 5, 50, 199}) CHECK(index.neighbors(7, NeighborhoodSpec::knn(k)).count() == k);
}

TEST_CASE("nearest and count_within handle arbitrary query points") {
    Matrix pts(1, 2);
    pts << -1.0, 1.0;
    const KdTree index{PointCloud{pts}};
    Vector q(1);
    q << 0.25;
    CHECK(index.nearest(q) == 1);
    q << -0.25;
    CHECK(index.nearest(q) == 0);
    q << 0.0;  // exact tie goes to the smaller index
    CHECK(index.nearest(q) == 0);
    CHECK(index.count_within(q, 1.0) == 2);   // closed ball
    CHECK(index.count_within(q, 0.99) == 0);
}

TEST_CASE("repeated builds answer identically") {
    CounterRng rng(5);
    const PointCloud cloud = random_cloud(rng, 150, 3);
    const KdTree a(cloud), b(cloud);
    for (Index i = 0; i < cloud.size(); i += 7) {
        const auto na = a.neighbors(i, NeighborhoodSpec::knn(5));
        const auto nb = b.neighbors(i, NeighborhoodSpec::knn(5));
        CHECK(na.indices == nb.indices);
    }
}
