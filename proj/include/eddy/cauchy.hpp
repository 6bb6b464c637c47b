#pragma once
// Nystrom discretization of mode-0 boundary operators on a panel mesh.
//
// Far panels use the plain panel rule. A target closer than kNearFactor
// panel lengths to a source panel gets product-integration weights
//     W_ij = int_panel K(x_i, y(t)) rho(t) |r'(t)| l_j(t) dt
// with l_j the Lagrange basis of the panel nodes, computed with tanh-sinh
// rules clustered at the (near-)singular point. On the target's own panel
// the principal value is taken by pairing t = s +- u.
//
// Densities are stored component-major: index c * N + i for component c
// at node i.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "geometry.hpp"
#include "modal.hpp"
#include "quadrature.hpp"

namespace eddy {

using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;

inline constexpr double kNearFactor = 0.7;

// Barycentric Lagrange basis of a panel's Gauss nodes.
struct PanelBasis {
  std::vector<double> x, lam;
  explicit PanelBasis(int order) {
    const Rule& g = gauss_legendre(order);
    x = g.x;
    lam.resize(order);
    for (int j = 0; j < order; ++j)
      lam[j] = (j % 2 ? -1.0 : 1.0) * std::sqrt((1.0 - x[j] * x[j]) * g.w[j]);
  }
  // values of all basis functions at xi in [-1, 1]
  void eval(double xi, double* out) const {
    int n = int(x.size());
    for (int j = 0; j < n; ++j)
      if (xi == x[j]) {
        for (int k = 0; k < n; ++k) out[k] = (k == j) ? 1.0 : 0.0;
        return;
      }
    double den = 0.0;
    for (int j = 0; j < n; ++j) {
      out[j] = lam[j] / (xi - x[j]);
      den += out[j];
    }
    for (int j = 0; j < n; ++j) out[j] /= den;
  }
};

// A quadrature point on a source panel: parameter offset h = t - s_ref
// (kept exactly) and weight in dt.
struct ParamPoint {
  double h, w;
};

namespace detail {

inline MeridianPoint curve_point(const GeneratingCurve& c, double t) {
  MeridianPoint p;
  Vec2 r = c.pos(t);
  p.rho = r[0];
  p.z = r[1];
  p.nu = c.normal(t);
  p.tau = c.tangent(t);
  return p;
}

inline double wrap_offset(const GeneratingCurve& c, double h) {
  if (!c.closed) return h;
  double per = c.s1 - c.s0;
  return std::remainder(h, per);
}

// tanh-sinh points on [lo, hi] given as offsets from s_ref; clustering at both ends
inline void endpoint_points(double lo_off, double hi_off, std::vector<ParamPoint>& pts) {
  const EndpointRule& r = tanh_sinh_rule();
  double len = hi_off - lo_off;
  for (std::size_t q = 0; q < r.size(); ++q) {
    double h = r.x[q] < 0.5 ? lo_off + len * r.x[q] : hi_off - len * r.xc[q];
    pts.push_back({h, len * r.w[q]});
  }
}

// minimum meridian distance from point (rho, z) to a panel, and where
inline std::pair<double, double> panel_distance(const GeneratingCurve& c, const Panel& P, double rho, double z) {
  const int ns = 24;
  double best = 1e300, tb = P.a;
  for (int k = 0; k <= ns; ++k) {
    double t = P.a + (P.b - P.a) * k / ns;
    Vec2 r = c.pos(t);
    double d = std::hypot(r[0] - rho, r[1] - z);
    if (d < best) {
      best = d;
      tb = t;
    }
  }
  // golden-section refinement on the bracketing sample interval
  double lo = std::max(P.a, tb - (P.b - P.a) / ns), hi = std::min(P.b, tb + (P.b - P.a) / ns);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  auto dist = [&](double t) {
    Vec2 r = c.pos(t);
    return std::hypot(r[0] - rho, r[1] - z);
  };
  double t1 = hi - gr * (hi - lo), t2 = lo + gr * (hi - lo);
  double f1 = dist(t1), f2 = dist(t2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      hi = t2;
      t2 = t1;
      f2 = f1;
      t1 = hi - gr * (hi - lo);
      f1 = dist(t1);
    } else {
      lo = t1;
      t1 = t2;
      f1 = f2;
      t2 = lo + gr * (hi - lo);
      f2 = dist(t2);
    }
  }
  double t = 0.5 * (lo + hi), d = dist(t);
  if (d < best) return {d, t};
  return {best, tb};
}

} // namespace detail

// Assemble the surface operator(s) of a kernel family on a mesh. Returns one
// (MO N) x (MI N) matrix per wavenumber of the family.
template <class Fam>
std::vector<MatrixXcd> assemble_surface(const Fam& fam, const PanelMesh& mesh) {
  constexpr int MO = Fam::MO, MI = Fam::MI;
  using KMat = typename Fam::KMat;
  const int N = int(mesh.size());
  const int nk = fam.nk();
  const int p = mesh.order;
  const GeneratingCurve& curve = mesh.curve;
  std::vector<MatrixXcd> out(nk, MatrixXcd::Zero(MO * N, MI * N));
  PanelBasis basis(p);
  std::vector<double> plen(mesh.panels.size());
  for (std::size_t q = 0; q < mesh.panels.size(); ++q) plen[q] = mesh.panel_length(int(q));

  std::vector<KMat> K(nk);
  std::vector<KMat> acc(std::size_t(nk) * p);
  std::vector<double> ell(p);
  std::vector<ParamPoint> pts;

  for (int i = 0; i < N; ++i) {
    const Node& ni = mesh.nodes[i];
    PairGeometry pg;
    pg.x = meridian_point(ni);
    for (std::size_t pi = 0; pi < mesh.panels.size(); ++pi) {
      const Panel& P = mesh.panels[pi];
      bool self = int(pi) == ni.panel;
      bool near = self;
      double tstar = 0.0;
      if (!self) {
        auto [d, t] = detail::panel_distance(curve, P, ni.rho, ni.z);
        near = d < kNearFactor * plen[pi];
        tstar = t;
      }
      if (!near) {
        for (int j = P.first; j < P.first + p; ++j) {
          const Node& nj = mesh.nodes[j];
          pg.y = meridian_point(nj);
          pg.drho = nj.rho - ni.rho;
          pg.dz = nj.z - ni.z;
          modal_kernel(fam, pg, K.data());
          double w = nj.rho * nj.wa;
          for (int q = 0; q < nk; ++q)
            for (int a = 0; a < MO; ++a)
              for (int b = 0; b < MI; ++b) out[q](a * N + i, b * N + j) = K[q](a, b) * w;
        }
        continue;
      }
      // quadrature points as offsets from s_i
      pts.clear();
      double s = ni.s;
      if (self) {
        double m = std::min(s - P.a, P.b - s);
        const EndpointRule& r = tanh_sinh_rule();
        for (std::size_t q = 0; q < r.size(); ++q) {
          double u = m * r.x[q];
          if (u < 1e-15 * (P.b - P.a)) continue;
          pts.push_back({u, m * r.w[q]});
          pts.push_back({-u, m * r.w[q]});
        }
        if (s - P.a < P.b - s) detail::endpoint_points(m, P.b - s, pts);
        else detail::endpoint_points(P.a - s, -m, pts);
      } else {
        double lo = detail::wrap_offset(curve, P.a - s);
        double hi = lo + (P.b - P.a);
        double ts = lo + (tstar - P.a);
        double tol = 1e-3 * (P.b - P.a);
        if (ts - lo < tol || hi - ts < tol) detail::endpoint_points(lo, hi, pts);
        else {
          detail::endpoint_points(lo, ts, pts);
          detail::endpoint_points(ts, hi, pts);
        }
      }
      for (auto& a : acc) a.setZero();
      for (const ParamPoint& pp : pts) {
        double t = s + pp.h;
        pg.y = detail::curve_point(curve, t);
        Vec2 dd = curve.diff(s, pp.h);
        pg.drho = dd[0];
        pg.dz = dd[1];
        modal_kernel(fam, pg, K.data());
        double W = pp.w * pg.y.rho * curve.speed(t);
        // position inside the panel
        double tp = detail::wrap_offset(curve, t - P.a);
        if (curve.closed && tp < -0.5 * (P.b - P.a)) tp += curve.s1 - curve.s0;
        double xi = (2.0 * tp) / (P.b - P.a) - 1.0;
        basis.eval(xi, ell.data());
        for (int q = 0; q < nk; ++q)
          for (int j = 0; j < p; ++j) acc[q * p + j] += K[q] * (W * ell[j]);
      }
      for (int q = 0; q < nk; ++q)
        for (int jj = 0; jj < p; ++jj) {
          int j = P.first + jj;
          for (int a = 0; a < MO; ++a)
            for (int b = 0; b < MI; ++b) out[q](a * N + i, b * N + j) = acc[q * p + jj](a, b);
        }
    }
  }
  return out;
}

// Singular Cauchy integrals E_k for several wavenumbers sharing one pass.
inline std::vector<MatrixXcd> assemble_Ek(const PanelMesh& mesh, const std::vector<cdouble>& ks) {
  CauchyFamily fam;
  fam.ks = ks;
  return assemble_surface(fam, mesh);
}

inline MatrixXcd assemble_Ek(const PanelMesh& mesh, cdouble k) { return assemble_Ek(mesh, std::vector<cdouble>{k})[0]; }

// E_0 - E_k assembled as one kernel, without cancellation as k -> 0.
inline MatrixXcd assemble_static_minus_Ek(const PanelMesh& mesh, cdouble k) {
  CauchyFamily fam;
  fam.ks = {k};
  fam.mode = CauchyFamily::Radial::static_minus;
  return assemble_surface(fam, mesh)[0];
}

// Standalone discretizations of named operators (N x N, or 2N x 2N for the
// tangential operators M and M*).
inline MatrixXcd assemble_named_op(NamedOp op, const PanelMesh& mesh, cdouble k) {
  if (op == NamedOp::M || op == NamedOp::M_star) {
    PotentialFamily<2> fam{op, k};
    return assemble_surface(fam, mesh)[0];
  }
  PotentialFamily<1> fam{op, k};
  return assemble_surface(fam, mesh)[0];
}

// The same operators with kernel (op at k = 0) - (op at k), for k -> 0.
inline MatrixXcd assemble_named_op_static_minus(NamedOp op, const PanelMesh& mesh, cdouble k) {
  if (op == NamedOp::M || op == NamedOp::M_star) {
    PotentialFamily<2> fam{op, k, true};
    return assemble_surface(fam, mesh)[0];
  }
  PotentialFamily<1> fam{op, k, true};
  return assemble_surface(fam, mesh)[0];
}

// Hardy projections (I +- E)/2 applied to a density.
inline VectorXcd hardy_project(int sign, const MatrixXcd& E, const VectorXcd& h) {
  return 0.5 * (h + double(sign) * (E * h));
}

inline MatrixXcd hardy_matrix(int sign, const MatrixXcd& E) {
  MatrixXcd P = double(sign) * E;
  P.diagonal().array() += 1.0;
  return 0.5 * P;
}

} // namespace eddy
