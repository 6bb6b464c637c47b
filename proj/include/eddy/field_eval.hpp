#pragma once
// Fields from a solved density: volume Cauchy integrals at targets in
// Omega+ / Omega-, surface jump checks, accuracy digits and the
// conditioning of the density-to-field map.
//
// Volume targets: each source panel is bisected until every piece is no
// longer than its distance to the target (times kVolumeRatio), then a
// 16-point Gauss rule is used on the piece with the density interpolated
// from the panel nodes.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cauchy.hpp"
#include "incident.hpp"
#include "system.hpp"

namespace eddy {

using Vec8c = Eigen::Matrix<cdouble, 8, 1>;

enum class Region { interior, exterior, boundary };

inline std::string region_name(Region r) {
  switch (r) {
  case Region::interior: return "interior";
  case Region::exterior: return "exterior";
  default: return "boundary";
  }
}

inline constexpr double kVolumeRatio = 1.5;

struct RegionInfo {
  Region region = Region::exterior;
  double distance = 0.0; // to Gamma in the meridian half-plane
  double panel_length = 0.0;
  bool near = false;     // within one panel length
};

// Closest point on the generating curve decides the side: the normal points
// into Omega-.
inline RegionInfo classify_point(const PanelMesh& mesh, double rho, double z, double on_tol = 1e-10) {
  RegionInfo info;
  double best = std::numeric_limits<double>::infinity(), tb = 0.0;
  int pb = 0;
  for (std::size_t p = 0; p < mesh.panels.size(); ++p) {
    auto [d, t] = detail::panel_distance(mesh.curve, mesh.panels[p], rho, z);
    if (d < best) {
      best = d;
      tb = t;
      pb = int(p);
    }
  }
  info.distance = best;
  info.panel_length = mesh.panel_length(pb);
  info.near = best < info.panel_length;
  if (best <= on_tol * mesh.curve.diameter()) {
    info.region = Region::boundary;
    return info;
  }
  Vec2 r = mesh.curve.pos(tb), nu = mesh.curve.normal(tb);
  double side = (rho - r[0]) * nu[0] + (z - r[1]) * nu[1];
  if (std::abs(side) < 0.5 * best) {
    // closest point at a curve end on the axis: fall back to the z-order
    Vec2 ra = mesh.curve.pos(mesh.curve.s0), rb = mesh.curve.pos(mesh.curve.s1);
    double zlo = std::min(ra[1], rb[1]), zhi = std::max(ra[1], rb[1]);
    info.region = (z > zlo && z < zhi && rho < r[0]) ? Region::interior : Region::exterior;
    return info;
  }
  info.region = side < 0.0 ? Region::interior : Region::exterior;
  return info;
}

// Cauchy integral C_k g at a meridian-plane target, Cartesian multivector
// components [F0 | F1 xyz | F2 xyz | F3] at phi = 0.
inline Vec8c cauchy_volume(const PanelMesh& mesh, const VectorXcd& g, cdouble k, double rho, double z) {
  const int N = int(mesh.size());
  const int p = mesh.order;
  const GeneratingCurve& curve = mesh.curve;
  CauchyFamily fam;
  fam.ks = {k};
  fam.volume = true;
  PanelBasis basis(p);
  const Rule& gl = gauss_legendre(16);
  std::vector<double> ell(p);
  PairGeometry pg;
  pg.x.rho = rho;
  pg.x.z = z;
  CauchyFamily::KMat K;
  Vec8c acc = Vec8c::Zero();
  Eigen::Matrix<cdouble, 8, Eigen::Dynamic> gp(8, p);

  auto piece = [&](const Panel& P, double a, double b) {
    double half = 0.5 * (b - a);
    for (std::size_t q = 0; q < gl.size(); ++q) {
      double t = 0.5 * (a + b) + half * gl.x[q];
      pg.y = detail::curve_point(curve, t);
      pg.drho = pg.y.rho - rho;
      pg.dz = pg.y.z - z;
      modal_kernel(fam, pg, &K);
      basis.eval(2.0 * (t - P.a) / (P.b - P.a) - 1.0, ell.data());
      Vec8c gv = Vec8c::Zero();
      for (int j = 0; j < p; ++j) gv += gp.col(j) * ell[j];
      acc += K * gv * (gl.w[q] * half * pg.y.rho * curve.speed(t));
    }
  };
  // arclength of a parameter interval, from the speed at three points
  auto arc = [&](double a, double b) {
    return (b - a) * (curve.speed(a) + 4.0 * curve.speed(0.5 * (a + b)) + curve.speed(b)) / 6.0;
  };

  for (std::size_t pi = 0; pi < mesh.panels.size(); ++pi) {
    const Panel& P = mesh.panels[pi];
    for (int j = 0; j < p; ++j)
      for (int c = 0; c < 8; ++c) gp(c, j) = g(c * N + P.first + j);
    std::vector<std::pair<double, double>> stack{{P.a, P.b}};
    int guard = 0;
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      Panel sub{a, b, P.first};
      double d = detail::panel_distance(curve, sub, rho, z).first;
      if (arc(a, b) <= kVolumeRatio * d || ++guard > 4000) piece(P, a, b);
      else {
        double m = 0.5 * (a + b);
        stack.push_back({a, m});
        stack.push_back({m, b});
      }
    }
  }
  return 0.5 * acc;
}

struct FieldTarget {
  double x = 0.0, z = 0.0; // Cartesian, meridian plane y = 0 (x < 0 mirrored)
  RegionInfo info;
  Vec8c F = Vec8c::Zero(); // multivector of the representation at (|x|, z)
  CVec3 E = CVec3::Zero(), H = CVec3::Zero(); // Cartesian, scattered outside
  bool evaluated = false;
};

struct FieldSolution {
  Formulation form = Formulation::B_aug0;
  Wavenumbers wn;
  std::optional<cdouble> cRD_h, cRN_h;
  std::vector<FieldTarget> targets;
  int nx = 0, nz = 0; // grid shape, when the targets form a grid
};

// Cylindrical (rho, theta, z) vector at phi = 0 seen at x < 0 (phi = pi).
inline CVec3 mirror_vector(const CVec3& v, double x) {
  if (x >= 0.0) return v;
  return CVec3(-v(0), -v(1), v(2));
}

inline void fill_fields(FieldTarget& t, const Wavenumbers& wn) {
  CVec3 F1(t.F(1), t.F(2), t.F(3)), F2(t.F(4), t.F(5), t.F(6));
  t.E = mirror_vector(F1, t.x);
  if (t.info.region == Region::interior) t.H = mirror_vector(wn.khat() * F2, t.x);
  else t.H = mirror_vector(F2, t.x);
}

inline FieldSolution evaluate_fields(const AssembledSystem& S, const VectorXcd& h,
                                     const std::vector<std::pair<double, double>>& pts) {
  const PanelMesh& mesh = *S.mesh;
  FieldSolution out;
  out.form = S.form;
  out.wn = S.wn;
  if (S.cRD) out.cRD_h = ((*S.cRD) * h)(0);
  if (S.cRN) out.cRN_h = ((*S.cRN) * h)(0);
  VectorXcd gp = interior_density(S, h), gm = exterior_density(S, h);
  out.targets.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    FieldTarget& t = out.targets[i];
    t.x = pts[i].first;
    t.z = pts[i].second;
    double rho = std::abs(t.x);
    t.info = classify_point(mesh, rho, t.z);
    if (t.info.region == Region::boundary) continue; // flagged, use the surface traces
    if (t.info.region == Region::interior) t.F = cauchy_volume(mesh, gp, S.wn.k_plus, rho, t.z);
    else t.F = cauchy_volume(mesh, gm, S.wn.k_minus, rho, t.z);
    fill_fields(t, S.wn);
    t.evaluated = true;
  }
  return out;
}

// Uniform nx x nz grid on [x0, x1] x [z0, z1], row-major in z.
inline std::vector<std::pair<double, double>> grid_points(double x0, double x1, double z0, double z1, int nx, int nz) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(std::size_t(nx) * nz);
  for (int iz = 0; iz < nz; ++iz)
    for (int ix = 0; ix < nx; ++ix)
      pts.push_back({x0 + (x1 - x0) * ix / std::max(1, nx - 1), z0 + (z1 - z0) * iz / std::max(1, nz - 1)});
  return pts;
}

inline FieldSolution evaluate_grid(const AssembledSystem& S, const VectorXcd& h, int nx = 100, int nz = 100,
                                   double half_width = 2.0) {
  FieldSolution f = evaluate_fields(S, h, grid_points(-half_width, half_width, -half_width, half_width, nx, nz));
  f.nx = nx;
  f.nz = nz;
  return f;
}

// ---------------------------------------------------------------------------
// Field scales on Gamma and accuracy digits

struct BoundaryScales {
  double Ep = 0.0, Em_total = 0.0, Hp = 0.0, Hm_total = 0.0, Em = 0.0;
};

inline double frame_max(const VectorXcd& v, int c0, int N, cdouble s = 1.0) {
  double m = 0.0;
  for (int i = 0; i < N; ++i) {
    double a = 0.0;
    for (int c = c0; c < c0 + 3; ++c) a += std::norm(s * v(c * N + i));
    m = std::max(m, std::sqrt(a));
  }
  return m;
}

inline BoundaryScales boundary_scales(const SurfaceTraces& tr, const VectorXcd& f0, const Wavenumbers& wn, int N) {
  BoundaryScales b;
  b.Ep = frame_max(tr.Fp, 5, N);
  b.Hp = frame_max(tr.Fp, 1, N, wn.khat());
  VectorXcd tot = tr.Fm + f0;
  b.Em_total = frame_max(tot, 5, N);
  b.Hm_total = frame_max(tot, 1, N);
  b.Em = frame_max(tr.Fm, 5, N);
  return b;
}

struct Digits {
  std::array<double, 4> eps{}; // E+, E-, H+, H-
  std::array<std::optional<int>, 4> digits;

  static std::string label(int i) {
    static const char* n[4] = {"E+", "E-", "H+", "H-"};
    return n[i];
  }
  int min_digits() const {
    int m = 99;
    for (auto& d : digits)
      if (d) m = std::min(m, *d);
    return m;
  }
};

inline int digits_from_error(double eps) {
  if (eps <= 0.0) return 16;
  return std::min(16, int(-std::round(std::log10(eps))));
}

// Max-norm errors over the targets, relative to the boundary scales of the
// reference. Both solutions must share the target list.
inline Digits accuracy_digits(const FieldSolution& sol, const FieldSolution& ref, const BoundaryScales& scales) {
  if (sol.targets.size() != ref.targets.size()) throw std::invalid_argument("accuracy_digits: target lists differ");
  std::array<double, 4> err{0.0, 0.0, 0.0, 0.0};
  std::array<bool, 4> seen{false, false, false, false};
  for (std::size_t i = 0; i < sol.targets.size(); ++i) {
    const FieldTarget &a = sol.targets[i], &b = ref.targets[i];
    if (!a.evaluated || !b.evaluated || a.info.region != b.info.region) continue;
    int o = a.info.region == Region::interior ? 0 : 1;
    err[o] = std::max(err[o], (a.E - b.E).norm());
    err[o + 2] = std::max(err[o + 2], (a.H - b.H).norm());
    seen[o] = seen[o + 2] = true;
  }
  std::array<double, 4> den{scales.Ep, scales.Em_total, scales.Hp, scales.Hm_total};
  Digits d;
  for (int i = 0; i < 4; ++i) {
    if (!(den[i] > 0.0) || !seen[i]) {
      d.eps[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    d.eps[i] = err[i] / den[i];
    d.digits[i] = digits_from_error(d.eps[i]);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Surface checks

struct JumpReport {
  double tangential_E = 0.0;  // max |nu x (E+ - E0 - E-)| / max |E0 + E-|
  double tangential_H = 0.0;  // same for H
  double normal_jump = 0.0;   // max |khat^2 nu.E+ / nu.(E0 + E-) - 1| where the denominator is O(1)
  bool normal_defined = false; // false when nu.(E0 + E-) vanishes identically (azimuthal E)
  double flux_E_minus = 0.0;  // |int nu.E- dGamma| / (|Gamma| max |E0 + E-|)
  double helmholtz = 0.0;     // max |F0|, |F3| of both traces / field scale
};

inline JumpReport jump_checks(const SurfaceTraces& tr, const VectorXcd& f0, const PanelMesh& mesh,
                              const Wavenumbers& wn) {
  const int N = int(mesh.size());
  const cdouble kh = wn.khat();
  JumpReport r;
  VectorXcd tot = tr.Fm + f0;
  BoundaryScales sc = boundary_scales(tr, f0, wn, N);
  double nden = 0.0;
  for (int i = 0; i < N; ++i) nden = std::max(nden, std::abs(tot(5 * N + i)));
  r.normal_defined = nden > 1e-8 * sc.Em_total;
  double flux = 0.0;
  cdouble fl = 0.0;
  for (int i = 0; i < N; ++i) {
    for (int c : {6, 7}) r.tangential_E = std::max(r.tangential_E, std::abs(tr.Fp(c * N + i) - tot(c * N + i)));
    for (int c : {2, 3})
      r.tangential_H = std::max(r.tangential_H, std::abs(kh * tr.Fp(c * N + i) - tot(c * N + i)));
    cdouble den = tot(5 * N + i);
    if (r.normal_defined && std::abs(den) >= 0.1 * nden)
      r.normal_jump = std::max(r.normal_jump, std::abs(kh * kh * tr.Fp(5 * N + i) / den - 1.0));
    fl += mesh.nodes[i].w * tr.Fm(5 * N + i);
    flux += mesh.nodes[i].w;
    for (int c : {0, 4})
      r.helmholtz = std::max(r.helmholtz, std::max(std::abs(tr.Fp(c * N + i)), std::abs(tr.Fm(c * N + i))));
  }
  r.tangential_E /= sc.Em_total;
  r.tangential_H /= sc.Hm_total;
  r.flux_E_minus = sc.Em_total > 0.0 ? std::abs(fl) / (flux * sc.Em_total) : 0.0;
  r.helmholtz /= std::max(sc.Em_total, sc.Hm_total);
  return r;
}

// ---------------------------------------------------------------------------
// Density-to-field maps

// Matrix of h |-> F+ traces and h |-> F- traces (frame components).
inline std::pair<MatrixXcd, MatrixXcd> trace_maps(const AssembledSystem& S, const OperatorSet& ops) {
  const int N = int(S.mesh->size());
  const int n8 = 8 * N;
  MatrixXcd Gp = MatrixXcd::Zero(n8, n8), Gm = MatrixXcd::Zero(n8, n8);
  for (int c = 0; c < 8; ++c)
    for (int i = 0; i < N; ++i) {
      Gp(c * N + i, c * N + i) = S.par.Np[c];
      Gm(c * N + i, c * N + i) = S.par.Pp[c];
    }
  if (S.cRN) Gp += (S.wn.sigma() / (S.wn.khat() * S.wn.khat())) * S.e8 * (*S.cRN);
  if (S.cRD) Gm += unit_density(*S.mesh, 5) * (*S.cRD);
  return {hardy_matrix(+1, ops.Ep) * Gp, -hardy_matrix(-1, ops.Em) * Gm};
}

// h |-> (khat^2/<s> E+, E-, H+, H-) on Gamma
inline MatrixXcd field_map(const AssembledSystem& S, const OperatorSet& ops) {
  const int N = int(S.mesh->size());
  auto [Tp, Tm] = trace_maps(S, ops);
  const cdouble kh = S.wn.khat();
  MatrixXcd F(12 * N, 8 * N);
  F.middleRows(0, 3 * N) = (kh * kh / S.wn.sigma()) * Tp.middleRows(5 * N, 3 * N);
  F.middleRows(3 * N, 3 * N) = Tm.middleRows(5 * N, 3 * N);
  F.middleRows(6 * N, 3 * N) = kh * Tp.middleRows(1 * N, 3 * N);
  F.middleRows(9 * N, 3 * N) = Tm.middleRows(1 * N, 3 * N);
  return F;
}

inline double condition_number(const MatrixXcd& A) {
  Eigen::BDCSVD<MatrixXcd> svd(A);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

inline Eigen::VectorXd singular_values(const MatrixXcd& A) {
  Eigen::BDCSVD<MatrixXcd> svd(A);
  return svd.singularValues();
}

} // namespace eddy
