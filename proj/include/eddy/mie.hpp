#pragma once
// Transmission problem for the unit sphere with the incident field
// partial_wave(): exact solution by l = 1, m = 0 vector spherical waves.
//
// With M[f] = f(r) sin(t) phi^ and a region wavenumber k,
//   TE:  E = M[f],                 B = curl M[f] / (ik)
//   TM:  E = curl M[f] / k,        B = -i M[f]
// where B = H outside and B = H / khat inside. The incident field is
// TE + TM with f = c j1(k- r), c = sqrt(3/(8 pi)).

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "incident.hpp"
#include "specfun.hpp"

namespace eddy {

struct MieCoefficients {
  cdouble k_minus, k_plus;
  cdouble aM, aN; // scattered (h1) amplitudes, TE and TM
  cdouble tM, tN; // transmitted (j1) amplitudes
  double cond_M = 0.0, cond_N = 0.0;
};

namespace detail {

// radial pieces of a mode f(r) = z_1(k r): value, f/r and (r f)'/r
struct RadialMode {
  cdouble f, f_over_r, drf_over_r;
};

inline RadialMode bessel_mode(cdouble k, double r) {
  cdouble z = k * r;
  cdouble jz = j1_over_z(z);
  cdouble j0 = spherical_bessel_j(0, z);
  return {z * jz, k * jz, k * (j0 - jz)};
}

inline RadialMode hankel_mode(cdouble k, double r) {
  cdouble z = k * r;
  cdouble h0 = spherical_hankel1(0, z), h1 = spherical_hankel1(1, z);
  return {h1, k * h1 / z, k * (h0 - h1 / z)};
}

// (z f)' at z for the two kinds
inline cdouble dzj1(cdouble z) { return z * spherical_bessel_j(0, z) - spherical_bessel_j(1, z); }
inline cdouble dzh1(cdouble z) { return z * spherical_hankel1(0, z) - spherical_hankel1(1, z); }

// 2x2 solve with column equilibration (the h1 column is huge for small k-)
inline std::pair<cdouble, cdouble> solve2(cdouble a11, cdouble a12, cdouble a21, cdouble a22, cdouble b1, cdouble b2,
                                          double& cond) {
  Eigen::Matrix2cd A;
  A << a11, a12, a21, a22;
  Eigen::Vector2d cs(A.col(0).cwiseAbs().maxCoeff(), A.col(1).cwiseAbs().maxCoeff());
  if (!(cs.minCoeff() > 0.0)) throw std::runtime_error("Mie interface system is singular");
  A.col(0) /= cs(0);
  A.col(1) /= cs(1);
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(A);
  auto s = svd.singularValues();
  if (!(s(1) > 1e-300)) throw std::runtime_error("Mie interface system is singular");
  cond = s(0) / s(1);
  Eigen::Vector2cd x = A.partialPivLu().solve(Eigen::Vector2cd(b1, b2));
  return {x(0) / cs(0), x(1) / cs(1)};
}

// E and B for TE/TM fields with amplitude amp and radial mode m, at (rho, z)
inline void add_te(cdouble amp, cdouble k, const RadialMode& m, double st, double ct, CVec3& E, CVec3& B) {
  const double c = std::sqrt(3.0 / (8.0 * std::numbers::pi));
  E(1) += amp * c * m.f * st;
  // curl M[f] = r^ 2 f cos/r - t^ (rf)' sin / r
  cdouble cr = 2.0 * c * m.f_over_r * ct, ct_ = -c * m.drf_over_r * st;
  cdouble s = amp / (I1 * k);
  B(0) += s * (cr * st + ct_ * ct);
  B(2) += s * (cr * ct - ct_ * st);
}

inline void add_tm(cdouble amp, cdouble k, const RadialMode& m, double st, double ct, CVec3& E, CVec3& B) {
  const double c = std::sqrt(3.0 / (8.0 * std::numbers::pi));
  cdouble cr = 2.0 * c * m.f_over_r * ct, ct_ = -c * m.drf_over_r * st;
  cdouble s = amp / k;
  E(0) += s * (cr * st + ct_ * ct);
  E(2) += s * (cr * ct - ct_ * st);
  B(1) += -I1 * amp * c * m.f * st;
}

} // namespace detail

inline MieCoefficients mie_solve(cdouble km, cdouble kp) {
  MieCoefficients m;
  m.k_minus = km;
  m.k_plus = kp;
  cdouble j1m = spherical_bessel_j(1, km), h1m = spherical_hankel1(1, km), j1p = spherical_bessel_j(1, kp);
  cdouble dj1m = detail::dzj1(km), dh1m = detail::dzh1(km), dj1p = detail::dzj1(kp);
  // TE: E_phi and H_theta continuous (khat/k+ = 1/k-)
  //   tM j1(k+) - aM h1(k-) = j1(k-),   tM (zj1)'(k+) - aM (zh1)'(k-) = (zj1)'(k-)
  auto te = detail::solve2(j1p, -h1m, dj1p, -dh1m, j1m, dj1m, m.cond_M);
  m.tM = te.first;
  m.aM = te.second;
  // TM: E_theta and H_phi continuous
  //   tN (zj1)'(k+)/k+ - aN (zh1)'(k-)/k- = (zj1)'(k-)/k-,   khat tN j1(k+) - aN h1(k-) = j1(k-)
  cdouble kh = kp / km;
  auto tm = detail::solve2(dj1p / kp, -dh1m / km, kh * j1p, -h1m, dj1m / km, j1m, m.cond_N);
  m.tN = tm.first;
  m.aN = tm.second;
  return m;
}

struct MieField {
  bool interior = false;
  EHField field; // transmitted (interior) or scattered (exterior)
};

// Field on the given side of the sphere; points on r = 1 are allowed.
inline MieField mie_fields(const MieCoefficients& m, double rho, double z, bool interior) {
  double r = std::hypot(rho, z);
  MieField out;
  out.interior = interior;
  double st = r > 0 ? rho / r : 0.0, ct = r > 0 ? z / r : 1.0;
  CVec3 E = CVec3::Zero(), B = CVec3::Zero();
  if (out.interior) {
    auto md = detail::bessel_mode(m.k_plus, r);
    detail::add_te(m.tM, m.k_plus, md, st, ct, E, B);
    detail::add_tm(m.tN, m.k_plus, md, st, ct, E, B);
    out.field.E = E;
    out.field.H = (m.k_plus / m.k_minus) * B;
  } else {
    auto md = detail::hankel_mode(m.k_minus, r);
    detail::add_te(m.aM, m.k_minus, md, st, ct, E, B);
    detail::add_tm(m.aN, m.k_minus, md, st, ct, E, B);
    out.field.E = E;
    out.field.H = B;
  }
  return out;
}

inline MieField mie_fields(const MieCoefficients& m, double rho, double z) {
  return mie_fields(m, rho, z, std::hypot(rho, z) < 1.0);
}

// Interior-side and exterior-side (incident + scattered) fields on r = 1
// at polar angle t, for interface residual checks.
inline std::pair<EHField, EHField> mie_interface_fields(const MieCoefficients& m, double t) {
  double rho = std::sin(t), z = std::cos(t);
  CVec3 Ei = CVec3::Zero(), Bi = CVec3::Zero(), Eo = CVec3::Zero(), Bo = CVec3::Zero();
  double st = rho, ct = z;
  auto mi = detail::bessel_mode(m.k_plus, 1.0);
  detail::add_te(m.tM, m.k_plus, mi, st, ct, Ei, Bi);
  detail::add_tm(m.tN, m.k_plus, mi, st, ct, Ei, Bi);
  auto mo = detail::hankel_mode(m.k_minus, 1.0);
  detail::add_te(m.aM, m.k_minus, mo, st, ct, Eo, Bo);
  detail::add_tm(m.aN, m.k_minus, mo, st, ct, Eo, Bo);
  EHField inc = partial_wave(m.k_minus, rho, z);
  EHField in{Ei, (m.k_plus / m.k_minus) * Bi}, out{Eo + inc.E, Bo + inc.H};
  return {in, out};
}

} // namespace eddy
