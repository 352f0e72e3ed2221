#include <cmath>

#include "doctest.h"
#include "pcurv/surfaces.hpp"

using namespace pcurv;

namespace {

// Independent finite-difference route: second-order central differences on
// the parameterization, first/second fundamental forms, S = I^-1 II.
struct FdCurvature {
    Vector point;
    Vector normal;  // oriented outward
    Real mean;
    Real gauss;
};

Vector torus_point(Real R, Real r, Real theta, Real phi) {
    Vector p(3);
    p << (R + r * std::cos(theta)) * std::cos(phi), (R + r * std::cos(theta)) * std::sin(phi),
        r * std::sin(theta);
    return p;
}

FdCurvature torus_fd_oracle(Real R, Real r, Real theta, Real phi) {
    const Real h = 1e-5;
    auto f = [&](Real t, Real p) { return torus_point(R, r, t, p); };
    const Vector ft = (f(theta + h, phi) - f(theta - h, phi)) / (2 * h);
    const Vector fp = (f(theta, phi + h) - f(theta, phi - h)) / (2 * h);
    const Vector ftt = (f(theta + h, phi) - 2 * f(theta, phi) + f(theta - h, phi)) / (h * h);
    const Vector fpp = (f(theta, phi + h) - 2 * f(theta, phi) + f(theta, phi - h)) / (h * h);
    const Vector ftp = (f(theta + h, phi + h) - f(theta + h, phi - h) - f(theta - h, phi + h) +
                        f(theta - h, phi - h)) /
                       (4 * h * h);

    Vector n(3);
    n << ft[1] * fp[2] - ft[2] * fp[1], ft[2] * fp[0] - ft[0] * fp[2],
        ft[0] * fp[1] - ft[1] * fp[0];
    n.normalize();

    const Real E = ft.dot(ft), F = ft.dot(fp), G = fp.dot(fp);
    const Real e = ftt.dot(n), ff = ftp.dot(n), g = fpp.dot(n);
    const Real det_i = E * G - F * F;
    const Real H = (e * G - 2 * ff * F + g * E) / (2 * det_i);
    const Real K = (e * g - ff * ff) / det_i;

    // orient outward: compare against the implicit gradient direction
    const Vector p = f(theta, phi);
    const Real rho = std::hypot(p[0], p[1]);
    Vector grad(3);
    grad << 2 * (rho - R) * p[0] / rho, 2 * (rho - R) * p[1] / rho, 2 * p[2];
    grad.normalize();
    const Real sign = n.dot(grad) >= 0 ? 1.0 : -1.0;
    // report H in the convex-positive convention used by the samplers
    return {p, sign * n, -sign * H, K};
}

}  // namespace

TEST_CASE("torus oracle reproduces the outer-equator reference values") {
    const auto fd = torus_fd_oracle(2.0, 1.0, 0.0, 0.0);
    CHECK(fd.point[0] == doctest::Approx(3.0));
    CHECK(fd.point[1] == doctest::Approx(0.0));
    CHECK(fd.normal[0] == doctest::Approx(1.0));
    CHECK(fd.mean == doctest::Approx(2.0 / 3.0).epsilon(1e-5));
    CHECK(fd.gauss == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
    // top of the tube is parabolic
    CHECK(std::abs(torus_fd_oracle(2.0, 1.0, M_PI / 2, 0.3).gauss) < 1e-5);
}

TEST_CASE("sampled torus labels agree with the finite-difference oracle") {
    TorusParams params;
    const auto sampled = sample_torus(100, params, 77);
    for (Index i = 0; i < sampled.cloud.size(); ++i) {
        const Vector p = sampled.cloud.point(i);
        const Real rho = std::hypot(p[0], p[1]);
        const Real theta = std::atan2(p[2], rho - params.major_radius);
        const Real phi = std::atan2(p[1], p[0]);
        const auto fd = torus_fd_oracle(params.major_radius, params.minor_radius, theta, phi);
        CHECK((fd.point - p).norm() < 1e-9);
        CHECK((fd.normal - sampled.truth.normals.col(i)).norm() < 1e-5);
        CHECK(sampled.truth.mean_curvature[i] == doctest::Approx(fd.mean).epsilon(1e-5));
        CHECK(sampled.truth.gaussian_curvature[i] == doctest::Approx(fd.gauss).epsilon(1e-5));
    }
}

TEST_CASE("torus normals match the implicit-surface gradient") {
    TorusParams params;
    const auto sampled = sample_torus(200, params, 3);
    for (Index i = 0; i < sampled.cloud.size(); ++i) {
        const Vector p = sampled.cloud.point(i);
        const Real rho = std::hypot(p[0], p[1]);
        Vector grad(3);
        grad << 2 * (rho - params.major_radius) * p[0] / rho,
            2 * (rho - params.major_radius) * p[1] / rho, 2 * p[2];
        grad.normalize();
        CHECK((grad - sampled.truth.normals.col(i)).norm() < 1e-10);
        CHECK(std::abs(sampled.truth.normals.col(i).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("torus sampling is deterministic per seed") {
    TorusParams params = torus_sectional_params();
    const auto a = sample_torus(1000, params, 42);
    const auto b = sample_torus(1000, params, 42);
    CHECK(a.cloud.points == b.cloud.points);
    CHECK(a.truth.normals == b.truth.normals);
    const auto c = sample_torus(1000, params, 43);
    CHECK(a.cloud.points != c.cloud.points);
}

TEST_CASE("torus parameter validation") {
    TorusParams bad;
    bad.minor_radius = 3.0;
    CHECK_THROWS_AS(static_cast<void>(sample_torus(10, bad, 1)), Error);
    TorusParams empty;
    empty.phi_max = 0.0;
    CHECK_THROWS_AS(static_cast<void>(sample_torus(10, empty, 1)), Error);
    CHECK_THROWS_AS(static_cast<void>(sample_torus(0, TorusParams{}, 1)), Error);
}

TEST_CASE("area-uniform sampling shifts tube-angle mass outward") {
    TorusParams pu;
    TorusParams au;
    au.area_uniform = true;
    const Index n = 20000;
    const auto a = sample_torus(n, pu, 9);
    const auto b = sample_torus(n, au, 9);
    auto mean_cos_theta = [&](const SampledSurface& s) {
        Real acc = 0;
        for (Index i = 0; i < n; ++i) acc += s.truth.normals.col(i).head(2).norm() *
                                              (s.truth.gaussian_curvature[i] >= 0 ? 1.0 : -1.0);
        return acc / static_cast<Real>(n);
    };
    CHECK(std::abs(mean_cos_theta(a)) < 0.05);
    CHECK(mean_cos_theta(b) > 0.1);
}

TEST_CASE("hypersphere samples sit on the sphere with the stated labels") {
    const auto s = sample_hypersphere(500, 5, 1.0, 4);
    for (Index i = 0; i < s.cloud.size(); ++i) {
        CHECK(std::abs(s.cloud.point(i).norm() - 1.0) < 1e-12);
        CHECK(s.truth.mean_curvature[i] == 1.0);
    }
    const auto t = sample_hypersphere(50, 3, 2.0, 4);
    CHECK(t.truth.shape_operator[0].isApprox(Matrix::Identity(2, 2) * 0.5));
    CHECK(t.truth.gaussian_curvature[0] == doctest::Approx(0.25));
    CHECK_THROWS_AS(static_cast<void>(sample_hypersphere(10, 1, 1.0, 1)), Error);
    CHECK_THROWS_AS(static_cast<void>(sample_hypersphere(10, 3, -1.0, 1)), Error);
}

TEST_CASE("hypersphere coordinate means vanish as n grows") {
    const Index n = 100000;
    const auto s = sample_hypersphere(n, 4, 1.0, 12);
    const Vector mean = s.cloud.points.rowwise().mean();
    for (Index d = 0; d < 4; ++d) CHECK(std::abs(mean[d]) < 4.0 / std::sqrt(static_cast<Real>(n)));
}
