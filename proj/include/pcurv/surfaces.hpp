#pragma once

#include <cmath>
#include <utility>

#include "pcurv/errors.hpp"
#include "pcurv/point_cloud.hpp"
#include "pcurv/rng.hpp"

namespace pcurv {

inline constexpr Real kTwoPi = 2.0 * M_PI;

struct TorusParams {
    Real major_radius = 2.0;
    Real minor_radius = 1.0;
    Real theta_max = kTwoPi;  // tube angle range [0, theta_max)
    Real phi_max = kTwoPi;    // axial angle range [0, phi_max)
    bool area_uniform = false;

    void validate() const {
        require(minor_radius > 0 && major_radius > minor_radius, ErrorCode::InvalidParams,
                "torus requires 0 < rmin < Rmaj");
        require(theta_max > 0 && theta_max <= kTwoPi && phi_max > 0 && phi_max <= kTwoPi,
                ErrorCode::InvalidParams, "angle ranges must lie in (0, 2*pi]");
    }
};

/// Default sectional extent: a 3/4 torus (phi in [0, 3*pi/2]) with boundary.
inline TorusParams torus_sectional_params() {
    TorusParams p;
    p.phi_max = 1.5 * M_PI;
    return p;
}

struct SampledSurface {
    PointCloud cloud;
    GroundTruth truth;
};

/// Samples a torus embedded in R^3 uniformly in parameter space (or by
/// surface area with `area_uniform`), with outward unit normals, mean and
/// Gaussian curvature, and the shape operator in the (e_theta, e_phi)
/// tangent basis.
inline SampledSurface sample_torus(Index n, const TorusParams& p, std::uint64_t seed) {
    require(n >= 1, ErrorCode::InvalidParams, "need n >= 1 samples");
    p.validate();
    const Real R = p.major_radius;
    const Real r = p.minor_radius;

    Matrix pts(3, n);
    GroundTruth truth;
    truth.normals.resize(3, n);
    truth.mean_curvature.resize(n);
    truth.gaussian_curvature.resize(n);
    truth.shape_operator.resize(static_cast<std::size_t>(n));

    CounterRng rng(seed);
    for (Index i = 0; i < n; ++i) {
        Real theta;
        if (p.area_uniform) {
            // area density is proportional to R + r*cos(theta); rejection keeps it exact
            for (;;) {
                theta = p.theta_max * rng.next_real();
                const Real accept = (R + r * std::cos(theta)) / (R + r);
                if (rng.next_real() < accept) break;
            }
        } else {
            theta = p.theta_max * rng.next_real();
        }
        const Real phi = p.phi_max * rng.next_real();
        const Real ct = std::cos(theta), st = std::sin(theta);
        const Real cp = std::cos(phi), sp = std::sin(phi);
        pts.col(i) << (R + r * ct) * cp, (R + r * ct) * sp, r * st;
        truth.normals.col(i) << ct * cp, ct * sp, st;
        truth.mean_curvature[i] = (R + 2.0 * r * ct) / (2.0 * r * (R + r * ct));
        truth.gaussian_curvature[i] = ct / (r * (R + r * ct));
        Matrix S(2, 2);
        S << 1.0 / r, 0.0, 0.0, ct / (R + r * ct);
        truth.shape_operator[static_cast<std::size_t>(i)] = S;
    }
    return {PointCloud(std::move(pts)), std::move(truth)};
}

/// Samples the sphere of radius rho in R^N uniformly (normalized gaussian
/// draws). Normals point outward; H = 1/rho, K = (1/rho)^(N-1), shape
/// operator (1/rho) * I in any tangent basis.
inline SampledSurface sample_hypersphere(Index n, Index ambient_dim, Real rho, std::uint64_t seed) {
    require(n >= 1, ErrorCode::InvalidParams, "need n >= 1 samples");
    require(ambient_dim >= 2 && ambient_dim <= kMaxAmbientDim, ErrorCode::InvalidParams,
            "ambient dimension out of range");
    require(rho > 0, ErrorCode::InvalidParams, "radius must be positive");

    Matrix pts(ambient_dim, n);
    GroundTruth truth;
    truth.normals.resize(ambient_dim, n);
    truth.mean_curvature = Vector::Constant(n, 1.0 / rho);
    truth.gaussian_curvature = Vector::Constant(n, std::pow(1.0 / rho, ambient_dim - 1));
    truth.shape_operator.assign(static_cast<std::size_t>(n),
                                Matrix::Identity(ambient_dim - 1, ambient_dim - 1) / rho);

    CounterRng rng(seed);
    Vector g(ambient_dim);
    for (Index i = 0; i < n; ++i) {
        Real norm = 0;
        do {
            rng.fill_gaussian(g);
            norm = g.norm();
        } while (norm == 0);
        truth.normals.col(i) = g / norm;
        pts.col(i) = rho * truth.normals.col(i);
    }
    return {PointCloud(std::move(pts)), std::move(truth)};
}

}  // namespace pcurv
