#pragma once
// Axisymmetric incident fields and their traces on Gamma.
//
// Fields are returned in cylindrical components (rho, theta, z), which at
// azimuth phi = 0 coincide with Cartesian (x, y, z).

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "geometry.hpp"
#include "specfun.hpp"

namespace eddy {

using CVec3 = Eigen::Vector3cd;

struct EHField {
  CVec3 E = CVec3::Zero(), H = CVec3::Zero();
};

enum class IncidentKind { partial_wave, zcoil, custom };

inline std::string incident_name(IncidentKind k) {
  switch (k) {
  case IncidentKind::partial_wave: return "partial-wave";
  case IncidentKind::zcoil: return "zcoil";
  default: return "custom";
  }
}

inline IncidentKind parse_incident(const std::string& s) {
  if (s == "partial-wave" || s == "partial_wave" || s == "pw") return IncidentKind::partial_wave;
  if (s == "zcoil" || s == "z-coil") return IncidentKind::zcoil;
  throw std::invalid_argument("unknown incident field: " + s);
}

namespace detail {

// j1(z)/z, regular at z = 0
inline cdouble j1_over_z(cdouble z) {
  if (std::abs(z) < 0.5) {
    cdouble t = 1.0 / 3.0, s = t, q = -0.5 * z * z;
    for (int m = 1; m < 30; ++m) {
      t *= q / (double(m) * (2 * m + 3));
      s += t;
      if (std::abs(t) < 1e-18) break;
    }
    return s;
  }
  return spherical_bessel_j(1, z) / z;
}

} // namespace detail

// Sum of the two lowest axisymmetric spherical vector waves:
//   G = sqrt(3/(8 pi)) j1(k|x|) rho/|x| theta^,  E = G + curl G / k,  H = -i E.
inline EHField partial_wave(cdouble k, double rho, double z) {
  const double c = std::sqrt(3.0 / (8.0 * std::numbers::pi));
  double r = std::hypot(rho, z);
  EHField f;
  if (r == 0.0) {
    f.E = CVec3(0.0, 0.0, 2.0 * c / 3.0);
    f.H = -I1 * f.E;
    return f;
  }
  double st = rho / r, ct = z / r;
  cdouble kr = k * r;
  cdouble jz = detail::j1_over_z(kr);
  cdouble j0 = spherical_bessel_j(0, kr);
  cdouble j1 = kr * jz;
  cdouble Er = c * 2.0 * ct * jz;    // radial part of curl G / k
  cdouble Et = -c * st * (j0 - jz);  // polar part of curl G / k
  f.E(0) = Er * st + Et * ct;
  f.E(2) = Er * ct - Et * st;
  f.E(1) = c * j1 * st;
  f.H = -I1 * f.E;
  return f;
}

// Field of an infinite magnetic line source on the axis:
//   E = i c2 H1(k rho) theta^,  H = c2 H0(k rho) z^,  c2 = 1/|H1(k)|.
inline EHField zcoil(cdouble k, double rho, double /*z*/) {
  if (!(rho > 0.0)) throw std::domain_error("zcoil: field undefined on the axis");
  cdouble c2 = 1.0 / std::abs(hankel1(1, k));
  EHField f;
  f.E(1) = I1 * c2 * hankel1(1, k * rho);
  f.H(2) = c2 * hankel1(0, k * rho);
  return f;
}

struct IncidentField {
  IncidentKind kind = IncidentKind::partial_wave;
  cdouble k = 1.0;
  std::function<EHField(double, double)> custom;

  EHField operator()(double rho, double z) const {
    switch (kind) {
    case IncidentKind::partial_wave: return partial_wave(k, rho, z);
    case IncidentKind::zcoil: return zcoil(k, rho, z);
    default:
      if (!custom) throw std::logic_error("custom incident field without evaluator");
      return custom(rho, z);
    }
  }
};

// Maxwell trace in density order: (0, nu.H, tau.H, theta.H, 0, nu.E, tau.E, theta.E)
inline Eigen::VectorXcd trace_f0(const IncidentField& inc, const PanelMesh& mesh) {
  const int N = int(mesh.size());
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(8 * N);
  for (int i = 0; i < N; ++i) {
    const Node& n = mesh.nodes[i];
    EHField e = inc(n.rho, n.z);
    f(1 * N + i) = n.nu[0] * e.H(0) + n.nu[1] * e.H(2);
    f(2 * N + i) = n.tau[0] * e.H(0) + n.tau[1] * e.H(2);
    f(3 * N + i) = e.H(1);
    f(5 * N + i) = n.nu[0] * e.E(0) + n.nu[1] * e.E(2);
    f(6 * N + i) = n.tau[0] * e.E(0) + n.tau[1] * e.E(2);
    f(7 * N + i) = e.E(1);
  }
  return f;
}

} // namespace eddy
