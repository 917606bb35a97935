#pragma once

#include <complex>

#include <Eigen/Dense>

namespace risopt {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kSpeedOfLight = 3.0e8;

}  // namespace risopt
