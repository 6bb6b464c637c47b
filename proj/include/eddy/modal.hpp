#pragma once
// Mode-0 azimuthal reduction of boundary kernels on surfaces of revolution.
//
// Every kernel handled here has the form
//     K(x, y) = sum_a g_a(|y - x|) A_a(x, y)
// with radial functions g_a and matrices A_a built from the frames at x and
// y and from d = y - x. With x in the meridian plane phi = 0 and y rotated
// by phi, each A_a is a trigonometric polynomial of degree <= 3 in phi, while
// g_a depends on cos(phi) only. Writing A_a(phi) = sum_n C_an cos(n phi)
// + odd terms, the modal kernel is
//     int_0^{2pi} K dphi = sum_a [ A_a(0) I_a0 - sum_{n=1..3} C_an I_an ],
//     I_a0 = int g_a dphi,   I_an = int g_a (1 - cos n phi) dphi.
// A_a(0) is evaluated directly, which keeps the leading singular behaviour
// free of cancellation; the C_an come from an exact 8-point DFT.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "clifford.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace eddy {

struct MeridianPoint {
  double rho = 0.0, z = 0.0;
  Vec2 nu{0.0, 0.0}, tau{0.0, 0.0};
};

inline MeridianPoint meridian_point(const Node& n) { return {n.rho, n.z, n.nu, n.tau}; }

struct PairGeometry {
  MeridianPoint x, y;
  double drho = 0.0, dz = 0.0; // y - x in the meridian plane, computed accurately
};

namespace detail {

inline constexpr int kMaxRadial = 12;

// Azimuthal moments of nf radial functions:
//   out[f][0] = int_0^{2pi} g_f dphi,  out[f][n] = int g_f (1 - cos n phi) dphi
template <class Radial>
void azimuthal_moments(double rx, double ry, double D, double kmax, int nf, const Radial& rad,
                       std::array<std::array<cdouble, 4>, kMaxRadial>& out) {
  const double pi = std::numbers::pi;
  for (int f = 0; f < nf; ++f) out[f] = {0.0, 0.0, 0.0, 0.0};
  const double B = 4.0 * rx * ry;
  std::array<cdouble, kMaxRadial> g;
  auto accumulate = [&](double phi, double w) {
    double sh = std::sin(0.5 * phi);
    double R = std::sqrt(D + B * sh * sh);
    rad(R, g.data());
    double c1 = 2.0 * sh * sh;
    double s1 = std::sin(phi);
    double c2 = 2.0 * s1 * s1;
    double s3 = std::sin(1.5 * phi);
    double c3 = 2.0 * s3 * s3;
    for (int f = 0; f < nf; ++f) {
      cdouble v = w * g[f];
      out[f][0] += v;
      out[f][1] += v * c1;
      out[f][2] += v * c2;
      out[f][3] += v * c3;
    }
  };
  // width of the peak at phi = 0 (distance of the complex singularity)
  double beta;
  if (B <= 0.0) beta = 1e300;
  else {
    double xx = D / (0.5 * B);
    beta = std::log1p(xx + std::sqrt(xx * (xx + 2.0)));
  }
  double omega = kmax * std::sqrt(rx * ry);
  if (beta > 0.3) {
    // periodic trapezoidal rule, exponentially convergent
    int M = int(40.0 / beta + 4.0 * omega + 16.0);
    M += M % 2;
    double h = 2.0 * pi / M;
    accumulate(0.0, h);
    accumulate(pi, h);
    for (int m = 1; m < M / 2; ++m) accumulate(m * h, 2.0 * h);
    return;
  }
  // dyadically graded Gauss-Legendre on [0, pi], doubled by symmetry
  const Rule& gl = gauss_legendre(16);
  double lmax = omega > 0.0 ? std::min(pi, 6.0 / omega) : pi;
  auto interval = [&](double a, double b) {
    int pieces = std::max(1, int(std::ceil((b - a) / lmax)));
    double len = (b - a) / pieces;
    for (int p = 0; p < pieces; ++p) {
      double lo = a + p * len;
      for (std::size_t q = 0; q < gl.size(); ++q)
        accumulate(lo + 0.5 * len * (gl.x[q] + 1.0), len * gl.w[q]); // 2 * len/2 * w
    }
  };
  double a = 0.0, b = std::min(beta, pi);
  while (true) {
    interval(a, b);
    if (b >= pi) break;
    a = b;
    b = std::min(2.0 * b, pi);
    if (pi - b < 0.5 * (b - a)) b = pi;
  }
}

} // namespace detail

// Evaluate the modal kernel of a family for all of its wavenumbers.
template <class Fam>
void modal_kernel(const Fam& fam, const PairGeometry& pg, typename Fam::KMat* out) {
  constexpr int NG = Fam::NG;
  using GMat = typename Fam::GMat;
  const double pi = std::numbers::pi;
  std::array<GMat, NG> A0, A, C1, C2, C3;
  fam.geometry(pg, 1.0, 0.0, A0);
  for (int a = 0; a < NG; ++a) {
    C1[a].setZero();
    C2[a].setZero();
    C3[a].setZero();
  }
  for (int m = 0; m < 8; ++m) {
    double phi = m * pi / 4.0;
    double c = std::cos(phi), s = std::sin(phi);
    if (m == 0) A = A0;
    else fam.geometry(pg, c, s, A);
    double w1 = 0.25 * c, w2 = 0.25 * std::cos(2.0 * phi), w3 = 0.25 * std::cos(3.0 * phi);
    for (int a = 0; a < NG; ++a) {
      C1[a] += w1 * A[a];
      C2[a] += w2 * A[a];
      C3[a] += w3 * A[a];
    }
  }
  const int nk = fam.nk();
  const int nf = nk * NG;
  std::array<std::array<cdouble, 4>, detail::kMaxRadial> mom;
  double D = pg.drho * pg.drho + pg.dz * pg.dz;
  detail::azimuthal_moments(pg.x.rho, pg.y.rho, D, fam.kmax(), nf,
                            [&](double R, cdouble* g) { fam.radial(R, g); }, mom);
  for (int q = 0; q < nk; ++q) {
    out[q].setZero();
    for (int a = 0; a < NG; ++a) {
      const auto& I = mom[q * NG + a];
      if (I[0] == cdouble(0.0) && I[1] == cdouble(0.0)) continue;
      out[q] += A0[a].template cast<cdouble>() * I[0];
      out[q] -= C1[a].template cast<cdouble>() * I[1];
      out[q] -= C2[a].template cast<cdouble>() * I[2];
      out[q] -= C3[a].template cast<cdouble>() * I[3];
    }
  }
}

// ---------------------------------------------------------------------------
// Radial functions. With d = y - x, R = |d| and Phi_k = e^{ikR}/(2 pi R):
//   g0 = ik Phi_k(R),   g1 = Phi_k'(R)/R = e^{ikR}(ikR - 1)/(2 pi R^3),
// so that grad Phi_k(y - x) = g1 d.

inline void radial_pair(cdouble k, double R, cdouble& g0, cdouble& g1) {
  const double inv2pi = 0.5 / std::numbers::pi;
  cdouble ikR = I1 * k * R;
  cdouble e = std::exp(ikR);
  g0 = I1 * k * e * inv2pi / R;
  g1 = e * (ikR - 1.0) * inv2pi / (R * R * R);
}

// The same pair for the difference kernel "k = 0 minus k", free of cancellation:
//   g0 = -ik Phi_k,  g1 = -(e^{ikR}(ikR - 1) + 1)/(2 pi R^3)
inline void radial_pair_static_minus(cdouble k, double R, cdouble& g0, cdouble& g1) {
  const double inv2pi = 0.5 / std::numbers::pi;
  cdouble x = I1 * k * R;
  cdouble e = std::exp(x);
  g0 = -I1 * k * e * inv2pi / R;
  cdouble f;
  if (std::abs(x) < 0.5) {
    // e^x (x - 1) + 1 = sum_{n>=2} (n-1) x^n / n!
    cdouble term = x; // x^n/n! at n = 1
    f = 0.0;
    for (int n = 2; n < 40; ++n) {
      term *= x / double(n);
      cdouble add = double(n - 1) * term;
      f += add;
      if (std::abs(add) < 1e-18 * std::abs(f)) break;
    }
  } else {
    f = e * (x - 1.0) + 1.0;
  }
  g1 = -f * inv2pi / (R * R * R);
}

// ---------------------------------------------------------------------------
// The Dirac-Cauchy kernel [ik Phi_k(y - x) - grad Phi_k(y - x)] nu(y) acting
// by Clifford multiplication on densities in frame components. On Gamma it
// yields the singular integral E_k (frame components at x); for volume
// targets it yields 2 x the Cauchy integral (Cartesian components at x).
struct CauchyFamily {
  static constexpr int MO = 8, MI = 8, NG = 2;
  using GMat = Eigen::Matrix<double, 8, 8>;
  using KMat = Eigen::Matrix<cdouble, 8, 8>;
  enum class Radial { helmholtz, static_minus };

  std::vector<cdouble> ks;
  bool volume = false;
  Radial mode = Radial::helmholtz;
  double scale = 1.0;

  int nk() const { return int(ks.size()); }
  double kmax() const {
    double m = 0.0;
    for (auto k : ks) m = std::max(m, std::abs(k));
    return m;
  }
  void geometry(const PairGeometry& pg, double c, double s, std::array<GMat, NG>& A) const {
    const MeridianPoint& x = pg.x;
    const MeridianPoint& y = pg.y;
    Vec3 nuy = meridional(y.nu[0], y.nu[1], c, s);
    Vec3 tauy = meridional(y.tau[0], y.tau[1], c, s);
    Vec3 thy = azimuthal(c, s);
    Mat8 Qy = frame_to_cartesian(nuy, tauy, thy);
    // d = y(phi) - x = (drho - rho_y (1 - cos phi), rho_y sin phi, dz)
    Vec3 d(pg.drho - y.rho * (1.0 - c), y.rho * s, pg.dz);
    Mat8 LQ = clifford_left(nuy) * Qy;
    Mat8 LdLQ = clifford_left(d) * LQ;
    if (volume) {
      A[0] = LQ;
      A[1] = -LdLQ;
    } else {
      Mat8 Qx = frame_to_cartesian(meridional(x.nu[0], x.nu[1], 1.0, 0.0),
                                   meridional(x.tau[0], x.tau[1], 1.0, 0.0), azimuthal(1.0, 0.0));
      A[0] = Qx.transpose() * LQ;
      A[1] = -Qx.transpose() * LdLQ;
    }
  }
  void radial(double R, cdouble* g) const {
    for (int q = 0; q < nk(); ++q) {
      if (mode == Radial::helmholtz) radial_pair(ks[q], R, g[2 * q], g[2 * q + 1]);
      else radial_pair_static_minus(ks[q], R, g[2 * q], g[2 * q + 1]);
      g[2 * q] *= scale;
      g[2 * q + 1] *= scale;
    }
  }
};

// Scalar and tangential operators of potential theory, in the conventions
//   K^nu'_k f(x) = pv int grad Phi_k(y-x) . nu(y) f(y) dGamma(y)
//   K^nu_k  f(x) = pv int grad Phi_k(y-x) . nu(x) f(y) dGamma(y)
//   K^tau_k f(x) = pv int grad Phi_k(y-x) . tau(x) f(y) dGamma(y)
//   S_k     f(x) = ik int Phi_k(y-x) f(y) dGamma(y)
//   M_k     f(x) = nu(x) x pv int grad Phi_k(y-x) x f(y) dGamma(y)
// and M*_k the real adjoint of M_k. Tangential fields use (tau, theta).
enum class NamedOp { K_nu_prime, K_nu, K_tau, S, M, M_star };

template <int DIM>
struct PotentialFamily {
  static constexpr int MO = DIM, MI = DIM, NG = 2;
  using GMat = Eigen::Matrix<double, DIM, DIM>;
  using KMat = Eigen::Matrix<cdouble, DIM, DIM>;
  NamedOp op;
  cdouble k;
  bool static_minus = false; // kernel of (op at k = 0) - (op at k)

  int nk() const { return 1; }
  double kmax() const { return std::abs(k); }
  void geometry(const PairGeometry& pg, double c, double s, std::array<GMat, NG>& A) const {
    const MeridianPoint& x = pg.x;
    const MeridianPoint& y = pg.y;
    Vec3 d(pg.drho - y.rho * (1.0 - c), y.rho * s, pg.dz);
    Vec3 nux = meridional(x.nu[0], x.nu[1], 1.0, 0.0);
    Vec3 taux = meridional(x.tau[0], x.tau[1], 1.0, 0.0);
    Vec3 thx = azimuthal(1.0, 0.0);
    Vec3 nuy = meridional(y.nu[0], y.nu[1], c, s);
    Vec3 tauy = meridional(y.tau[0], y.tau[1], c, s);
    Vec3 thy = azimuthal(c, s);
    A[0].setZero();
    A[1].setZero();
    if constexpr (DIM == 1) {
      switch (op) {
      case NamedOp::K_nu_prime: A[1](0, 0) = d.dot(nuy); break;
      case NamedOp::K_nu: A[1](0, 0) = d.dot(nux); break;
      case NamedOp::K_tau: A[1](0, 0) = d.dot(taux); break;
      case NamedOp::S: A[0](0, 0) = 1.0; break;
      default: break;
      }
    } else {
      std::array<Vec3, 2> ex{taux, thx}, ey{tauy, thy};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          if (op == NamedOp::M) A[1](i, j) = ex[i].dot(nux.cross(d.cross(ey[j])));
          else if (op == NamedOp::M_star) A[1](i, j) = -ey[j].dot(nuy.cross(d.cross(ex[i])));
        }
    }
  }
  void radial(double R, cdouble* g) const {
    if (static_minus) radial_pair_static_minus(k, R, g[0], g[1]);
    else radial_pair(k, R, g[0], g[1]);
  }
};

} // namespace eddy
