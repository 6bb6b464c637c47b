#pragma once
// Neumann eigenfields of genus-1 bodies and related tools:
//  * the static field of a circular current loop,
//  * the weight w = tau.H of the exterior PEC Neumann eigenfield,
//  * the eddy-current eigenfield (J, H) of an ordinary conductor,
//  * the excitation diagnostic d1_N f0,
//  * the augmented interior Neumann problem for the Helmholtz equation.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cauchy.hpp"
#include "clifford.hpp"
#include "field_eval.hpp"
#include "gmres.hpp"
#include "system.hpp"

namespace eddy {

// ---------------------------------------------------------------------------
// Circular current loop of radius a in the plane z = b, unit current,
// counter-clockwise about +z. Returns (H_rho, H_z).
struct LoopSource {
  double a = 1.0, b = 0.0;

  Vec2 field(double rho, double z) const {
    const double pi = std::numbers::pi;
    double zz = z - b;
    if (rho < 1e-12 * a) return {0.0, 0.5 * a * a / std::pow(a * a + zz * zz, 1.5)};
    double s = a * a + rho * rho + zz * zz;
    double al2 = s - 2.0 * a * rho, be2 = s + 2.0 * a * rho;
    if (!(al2 > 0.0)) throw std::domain_error("loop field evaluated on the wire");
    double be = std::sqrt(be2);
    double m = 1.0 - al2 / be2;
    auto [K, E] = elliptic_KE(m);
    double c = 1.0 / pi;
    double Hr = c * zz / (2.0 * al2 * be * rho) * (s * E - al2 * K);
    double Hz = c / (2.0 * al2 * be) * ((a * a - rho * rho - zz * zz) * E + al2 * K);
    return {Hr, Hz};
  }
};

// A loop on the core circle of a genus-1 body: the centroid of its cross-section.
inline LoopSource core_loop(const PanelMesh& mesh) {
  if (mesh.genus() != 1) throw std::invalid_argument("core loop needs a genus-1 surface");
  // centroid of the meridian cross-section by Green's theorem
  double A = 0.0, cr = 0.0, cz = 0.0;
  for (const Node& n : mesh.nodes) {
    Vec2 d = mesh.curve.d1(n.s);
    double ds = n.wa / n.speed;
    double cross = n.rho * d[1] - n.z * d[0];
    A += 0.5 * cross * ds;
    cr += n.rho * cross * ds / 3.0;
    cz += n.z * cross * ds / 3.0;
  }
  LoopSource L{cr / A, cz / A};
  if (classify_point(mesh, L.a, L.b).region != Region::interior)
    throw std::invalid_argument("cross-section centroid is not inside the body");
  return L;
}

// ---------------------------------------------------------------------------
// Weight function

struct WeightFunction {
  Eigen::VectorXd w;          // nodal, normalized: ave int w = 1
  Eigen::VectorXd w_alt;      // from the null vector of I + M_0, same normalization
  Eigen::VectorXd psi;        // single-layer density of the correction field
  double scale = 1.0;         // normalization factor applied to tau.H
  int gmres_iterations = 0;
  double gmres_residual = 0.0;
  double routes_deviation = 0.0;   // max |w - w_alt| / max |w|
  double null_residual = 0.0;      // |(I + M_0) f| / |f| of the null vector
  double normal_residual = 0.0;    // max |nu.H| / max |H| on Gamma
  double average = 0.0;            // ave int w after normalization
  double min_value = 0.0;
  double circulation = 0.0;        // of the loop field around the tube
  LoopSource loop;
};

// Line integral of the loop field along the generating curve (a poloidal cycle).
inline double loop_circulation(const PanelMesh& mesh, const LoopSource& L) {
  double c = 0.0;
  for (const Node& n : mesh.nodes) {
    Vec2 H = L.field(n.rho, n.z);
    c += (H[0] * n.tau[0] + H[1] * n.tau[1]) * n.wa;
  }
  return c;
}

inline WeightFunction compute_weight(const PanelMesh& mesh, const GmresOptions& opt = {}) {
  if (mesh.genus() != 1) throw std::invalid_argument("weight function needs a genus-1 surface");
  const int N = int(mesh.size());
  WeightFunction W;
  W.loop = core_loop(mesh);
  W.circulation = loop_circulation(mesh, W.loop);
  MatrixXcd Knu = assemble_named_op(NamedOp::K_nu, mesh, 0.0);
  MatrixXcd Ktau = assemble_named_op(NamedOp::K_tau, mesh, 0.0);
  VectorXcd nuH(N), tauH(N);
  for (int i = 0; i < N; ++i) {
    const Node& n = mesh.nodes[i];
    Vec2 H = W.loop.field(n.rho, n.z);
    nuH(i) = n.nu[0] * H[0] + n.nu[1] * H[1];
    tauH(i) = n.tau[0] * H[0] + n.tau[1] * H[1];
  }
  MatrixXcd A = Knu;
  A.diagonal().array() += 1.0;
  GmresOptions o = opt;
  o.tol = std::max(o.tol, 1e-14);
  GmresResult r = gmres(A, -nuH, o);
  W.gmres_iterations = r.iterations;
  W.gmres_residual = r.true_residual;
  VectorXcd w = tauH + Ktau * r.x;
  VectorXcd nres = nuH + A * r.x; // nu.H on Gamma
  Eigen::VectorXd mu = average_weights(mesh);
  double ave = (mu.cast<cdouble>().transpose() * w)(0).real();
  W.scale = 1.0 / ave;
  W.w = (w.real() * W.scale);
  W.psi = r.x.real() * W.scale;
  W.average = mu.dot(W.w);
  W.min_value = W.w.minCoeff();
  W.normal_residual = (nres.cwiseAbs().maxCoeff() * std::abs(W.scale)) / W.w.cwiseAbs().maxCoeff();
  if (!(W.min_value > 0.0)) throw std::runtime_error("weight function is not positive");

  // second route: null vector of I + M_0, by inverse iteration with shift 0
  MatrixXcd M = assemble_named_op(NamedOp::M, mesh, 0.0);
  M.diagonal().array() += 1.0;
  Eigen::PartialPivLU<MatrixXcd> lu(M);
  VectorXcd f = VectorXcd::Ones(2 * N);
  for (int it = 0; it < 5; ++it) {
    f = lu.solve(f);
    f /= f.norm();
    if ((M * f).norm() < 1e-10) break;
  }
  W.null_residual = (M * f).norm();
  VectorXcd th = f.segment(N, N);
  cdouble ath = (mu.cast<cdouble>().transpose() * th)(0);
  W.w_alt = (th / ath).real();
  W.routes_deviation = (W.w - W.w_alt).cwiseAbs().maxCoeff() / W.w.cwiseAbs().maxCoeff();
  return W;
}

// ---------------------------------------------------------------------------
// Excitation of the Neumann eigenfield by an incident trace

struct ExcitationReport {
  cdouble d1N = 0.0;
  double f0_max = 0.0;
  double ratio = 0.0;
};

inline ExcitationReport excitation_diagnostic(const VectorXcd& f0, const WeightFunction& W, const PanelMesh& mesh,
                                              const Wavenumbers& wn) {
  const int N = int(mesh.size());
  Eigen::VectorXd mu = average_weights(mesh);
  ExcitationReport e;
  cdouble s = 0.0;
  for (int i = 0; i < N; ++i) s += mu(i) * W.w(i) * f0(7 * N + i);
  e.d1N = wn.khat() * wn.khat() / wn.sigma() * s;
  for (int i = 0; i < N; ++i) {
    double a = 0.0;
    for (int c = 0; c < 8; ++c) a += std::norm(f0(c * N + i));
    e.f0_max = std::max(e.f0_max, std::sqrt(a));
  }
  e.ratio = std::abs(e.d1N) / e.f0_max;
  return e;
}

// ---------------------------------------------------------------------------
// Eigenfields on a meridian grid

// Density g with L(nu) g = [m0 | 0 | m2 theta^ | 0] in frame components, so that
// the static Cauchy integral of g gives F1 = grad S[m0] - curl S[m2 theta^]
// (S the single layer with kernel 1/(4 pi |x - y|)).
inline VectorXcd scalar_vector_density(const PanelMesh& mesh, const Eigen::VectorXd& m0, const Eigen::VectorXd& m2) {
  const int N = int(mesh.size());
  VectorXcd g = VectorXcd::Zero(8 * N);
  for (int i = 0; i < N; ++i) {
    const Node& n = mesh.nodes[i];
    Vec3 nu = meridional(n.nu[0], n.nu[1], 1.0, 0.0), tau = meridional(n.tau[0], n.tau[1], 1.0, 0.0);
    Vec3 th = azimuthal(1.0, 0.0);
    Eigen::Matrix<double, 8, 1> m = Eigen::Matrix<double, 8, 1>::Zero();
    m(0) = m0(i);
    m.segment<3>(4) = m2(i) * th;
    Eigen::Matrix<double, 8, 1> gc = clifford_left(nu) * m;
    Eigen::Matrix<double, 8, 1> gf = frame_to_cartesian(nu, tau, th).transpose() * gc;
    for (int c = 0; c < 8; ++c) g(c * N + i) = gf(c);
  }
  return g;
}

struct EigenfieldPoint {
  double x = 0.0, z = 0.0;
  Region region = Region::exterior;
  double J_theta = 0.0;      // azimuthal current density
  double H_rho = 0.0, H_z = 0.0;
};

struct EigenfieldGrid {
  std::string kind; // "superconductor" or "ordinary"
  int nx = 0, nz = 0;
  std::vector<EigenfieldPoint> points;
  double scale = 1.0; // factor applied so that max |H| = 1
  double max_interior_J = 0.0, max_J = 0.0;
};

// Superconductor: H = H_loop + grad u outside (tangential on Gamma), H = 0
// inside; the current is the surface current nu x H.
struct PecEigenfield {
  const PanelMesh* mesh = nullptr;
  const WeightFunction* weight = nullptr;
  VectorXcd g;

  PecEigenfield(const PanelMesh& m, const WeightFunction& W) : mesh(&m), weight(&W) {
    g = scalar_vector_density(m, W.psi / W.scale, Eigen::VectorXd::Zero(int(m.size())));
  }
  Vec2 H(double rho, double z, Region r) const {
    if (r == Region::interior) return {0.0, 0.0};
    Vec8c F = cauchy_volume(*mesh, g, 0.0, rho, z);
    Vec2 H0 = weight->loop.field(rho, z);
    // u = -int Phi_0(x - y) psi, grad u = -2 F1
    return {(H0[0] - 2.0 * F(1).real()) * weight->scale, (H0[1] - 2.0 * F(3).real()) * weight->scale};
  }
};

// Ordinary conductor: J = theta^/rho in Omega+, H = Biot-Savart(J). With
// H_p = -(ln rho + 1/2) z^ (curl H_p = J),
//   H = H_p 1_{Omega+} + curl S[nu x H_p] - grad S[nu.H_p].
struct EddyEigenfield {
  const PanelMesh* mesh = nullptr;
  VectorXcd g;

  explicit EddyEigenfield(const PanelMesh& m) : mesh(&m) {
    if (m.genus() != 1) throw std::invalid_argument("eddy eigenfield needs a genus-1 surface");
    const int N = int(m.size());
    Eigen::VectorXd q(N), j(N);
    for (int i = 0; i < N; ++i) {
      const Node& n = m.nodes[i];
      double hp = -(std::log(n.rho) + 0.5);
      q(i) = n.nu[1] * hp;   // nu . H_p
      j(i) = -n.nu[0] * hp;  // theta . (nu x H_p)
    }
    g = scalar_vector_density(m, q, j);
  }
  double J(double rho, Region r) const { return r == Region::interior ? 1.0 / rho : 0.0; }
  Vec2 H(double rho, double z, Region r) const {
    Vec8c F = cauchy_volume(*mesh, g, 0.0, rho, z);
    // F1 = grad S[q] - curl S[j theta^] = -(curl S[j] - grad S[q])
    Vec2 h{-F(1).real(), -F(3).real()};
    if (r == Region::interior) h[1] += -(std::log(rho) + 0.5);
    return h;
  }
};

// Finite-difference curl (theta component) of an axisymmetric meridional field.
template <class Field>
double curl_theta_fd(const Field& H, double rho, double z, double h = 1e-4) {
  Vec2 a = H(rho, z + h), b = H(rho, z - h), c = H(rho + h, z), d = H(rho - h, z);
  return (a[0] - b[0]) / (2.0 * h) - (c[1] - d[1]) / (2.0 * h);
}

// ---------------------------------------------------------------------------
// Interior Neumann problem for Delta u + k^2 u = 0 with the augmentation
// c_k h = int h w_k dGamma, w_k = (K0^nu' 1 - K_k^nu' 1) / (2 k^2).

struct HelmholtzDemoPoint {
  double k = 0.0;
  double smin_plain = 0.0, smin_aug = 0.0;
  double w_min = 0.0, w_max = 0.0;
  double duality_error = 0.0;
};

inline HelmholtzDemoPoint helmholtz_neumann_demo(const PanelMesh& mesh, double k, unsigned seed = 7) {
  if (mesh.genus() != 0) throw std::invalid_argument("the interior Neumann demo uses a genus-0 surface");
  const int N = int(mesh.size());
  HelmholtzDemoPoint r;
  r.k = k;
  MatrixXcd Knu = assemble_named_op(NamedOp::K_nu, mesh, k);
  MatrixXcd D = assemble_named_op_static_minus(NamedOp::K_nu_prime, mesh, k);
  VectorXcd wk = (D * VectorXcd::Ones(N)) / (2.0 * k * k);
  r.w_min = wk.real().minCoeff();
  r.w_max = wk.real().maxCoeff();
  MatrixXcd A = -Knu;
  A.diagonal().array() += 1.0;
  Eigen::VectorXd sw(N);
  for (int i = 0; i < N; ++i) sw(i) = mesh.nodes[i].w;
  RowVectorXcd c = (wk.cwiseProduct(sw.cast<cdouble>())).transpose();
  MatrixXcd Aa = A + VectorXcd::Ones(N) * c;
  r.smin_plain = singular_values(A).minCoeff();
  r.smin_aug = singular_values(Aa).minCoeff();
  // duality: int h w_k = -(1/2k^2) int (h - K^nu_k h), on a smooth random density
  std::mt19937 rng(seed);
  std::normal_distribution<double> G;
  std::vector<double> coef(6);
  for (auto& v : coef) v = G(rng);
  VectorXcd h(N);
  for (int i = 0; i < N; ++i) {
    double t = mesh.nodes[i].z / std::max(1e-300, std::hypot(mesh.nodes[i].rho, mesh.nodes[i].z));
    double v = 0.0, p = 1.0;
    for (double a : coef) {
      v += a * p;
      p *= t;
    }
    h(i) = v;
  }
  cdouble c1 = (c * h)(0);
  cdouble c2 = -(sw.cast<cdouble>().transpose() * (A * h))(0) / (2.0 * k * k);
  r.duality_error = std::abs(c1 - c2) / std::max(std::abs(c1), 1e-300);
  return r;
}

} // namespace eddy
