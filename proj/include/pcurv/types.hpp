#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace pcurv {

using Real = double;
using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<Real>;
using Vector = VectorX<Real>;

// Ambient dimensions handled by the estimators. All dense kernels assume
// matrices no larger than this.
inline constexpr Index kMaxAmbientDim = 10;

}  // namespace pcurv
