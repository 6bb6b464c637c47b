#pragma once
// Multivector fields F = (F0, F1, F2, F3) of 3D space: scalar, vector,
// bivector (identified with a vector) and pseudoscalar parts.
//
// Cartesian storage order: [F0 | F1x F1y F1z | F2x F2y F2z | F3].
// Frame storage order on the surface (the density order):
//   1 F0, 2 nu.F2, 3 tau.F2, 4 theta.F2, 5 F3, 6 nu.F1, 7 tau.F1, 8 theta.F1
// (zero-based 0..7 in code).

#include <Eigen/Dense>

namespace eddy {

using Mat8 = Eigen::Matrix<double, 8, 8>;
using Vec3 = Eigen::Vector3d;

// Left Clifford multiplication by the vector a:
//   a F = [a.F1 ; a F0 - a x F2 ; a x F1 + a F3 ; a.F2]
inline Mat8 clifford_left(const Vec3& a) {
  Mat8 L = Mat8::Zero();
  for (int i = 0; i < 3; ++i) {
    L(0, 1 + i) = a(i);
    L(1 + i, 0) = a(i);
    L(4 + i, 7) = a(i);
    L(7, 4 + i) = a(i);
  }
  // cross-product matrix [a]x
  Eigen::Matrix3d X;
  X << 0, -a(2), a(1), a(2), 0, -a(0), -a(1), a(0), 0;
  L.block<3, 3>(1, 4) = -X;
  L.block<3, 3>(4, 1) = X;
  return L;
}

// Map from frame components to Cartesian components for the frame
// {nu, tau, theta} given as Cartesian unit vectors.
inline Mat8 frame_to_cartesian(const Vec3& nu, const Vec3& tau, const Vec3& th) {
  Mat8 Q = Mat8::Zero();
  Q(0, 0) = 1.0;
  Q(7, 4) = 1.0;
  Q.block<3, 1>(4, 1) = nu;
  Q.block<3, 1>(4, 2) = tau;
  Q.block<3, 1>(4, 3) = th;
  Q.block<3, 1>(1, 5) = nu;
  Q.block<3, 1>(1, 6) = tau;
  Q.block<3, 1>(1, 7) = th;
  return Q;
}

// Frame vectors at azimuth phi for meridional components (rho, z).
inline Vec3 meridional(double vr, double vz, double c, double s) { return Vec3(vr * c, vr * s, vz); }
inline Vec3 azimuthal(double c, double s) { return Vec3(-s, c, 0.0); }

} // namespace eddy
