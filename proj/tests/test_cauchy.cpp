#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eddy/cauchy.hpp"

using namespace eddy;

namespace {

// Smooth, pole-regular density: frame components of smooth axisymmetric
// Cartesian fields plus two smooth scalars.
VectorXcd smooth_density(const PanelMesh& mesh, double a) {
  const int N = int(mesh.size());
  VectorXcd h(8 * N);
  for (int i = 0; i < N; ++i) {
    const Node& n = mesh.nodes[i];
    double r = n.rho, z = n.z;
    double F1r = r * std::cos(a * z), F1z = std::exp(a * z), F1t = r * std::sin(z + a);
    double F2r = r * z, F2z = 1 + a * z * z, F2t = r * (1 + a * z);
    h(0 * N + i) = cdouble(std::cos(z), 0.3 * a);
    h(4 * N + i) = cdouble(z * z, -a);
    h(1 * N + i) = n.nu[0] * F2r + n.nu[1] * F2z;
    h(2 * N + i) = n.tau[0] * F2r + n.tau[1] * F2z;
    h(3 * N + i) = F2t;
    h(5 * N + i) = n.nu[0] * F1r + n.nu[1] * F1z;
    h(6 * N + i) = n.tau[0] * F1r + n.tau[1] * F1z;
    h(7 * N + i) = cdouble(0, F1t);
  }
  return h;
}

// spherical Bessel / Hankel derivatives from the standard recurrences
cdouble dj(int l, cdouble k) {
  return l == 0 ? -spherical_bessel_j(1, k) : spherical_bessel_j(0, k) - 2.0 * spherical_bessel_j(1, k) / k;
}
cdouble dh(int l, cdouble k) {
  return l == 0 ? -spherical_hankel1(1, k) : spherical_hankel1(0, k) - 2.0 * spherical_hankel1(1, k) / k;
}

} // namespace

TEST_CASE("Cauchy integral squares to the identity on smooth densities") {
  PanelMesh mesh = discretize(unit_sphere(), 8, 16);
  auto Es = assemble_Ek(mesh, {cdouble(0.0), cdouble(1e-4), cdouble(1, 1), cdouble(10, 10)});
  for (const MatrixXcd& E : Es) {
    for (double a : {0.3, 1.0}) {
      VectorXcd h = smooth_density(mesh, a);
      VectorXcd r = E * (E * h) - h;
      CHECK(r.cwiseAbs().maxCoeff() / h.cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("Hardy projections are complementary idempotents on smooth densities") {
  PanelMesh mesh = discretize(rotated_starfish(), 20, 16);
  MatrixXcd E = assemble_Ek(mesh, cdouble(1, 1));
  VectorXcd h = smooth_density(mesh, 0.5);
  VectorXcd p = hardy_project(+1, E, h), m = hardy_project(-1, E, h);
  CHECK((p + m - h).norm() < 1e-13 * h.norm());
  CHECK((hardy_project(+1, E, p) - p).norm() < 1e-7 * h.norm());
  CHECK(hardy_project(-1, E, p).norm() < 1e-7 * h.norm());
}

TEST_CASE("layer operators on the sphere act diagonally on zonal harmonics") {
  // Y0 = 1, Y1 = cos(theta) = z; expected eigenvalues from the addition theorem
  PanelMesh mesh = discretize(unit_sphere(), 8, 16);
  const int N = int(mesh.size());
  VectorXcd Y0 = VectorXcd::Ones(N), Y1(N);
  for (int i = 0; i < N; ++i) Y1(i) = mesh.nodes[i].z;
  for (cdouble k : {cdouble(0.5, 0.0), cdouble(1.0, 1.0), cdouble(3.0, 3.0)}) {
    MatrixXcd Kp = assemble_named_op(NamedOp::K_nu_prime, mesh, k);
    MatrixXcd Kn = assemble_named_op(NamedOp::K_nu, mesh, k);
    MatrixXcd S = assemble_named_op(NamedOp::S, mesh, k);
    for (int l : {0, 1}) {
      const VectorXcd& Y = l ? Y1 : Y0;
      cdouble j = spherical_bessel_j(l, k), h = spherical_hankel1(l, k);
      cdouble dlp = I1 * k * k * (j * dh(l, k) + dj(l, k) * h);
      cdouble slp = -2.0 * k * k * j * h;
      CHECK((Kp * Y - dlp * Y).cwiseAbs().maxCoeff() < 1e-11);
      CHECK((Kn * Y + dlp * Y).cwiseAbs().maxCoeff() < 1e-11);
      CHECK((S * Y - slp * Y).cwiseAbs().maxCoeff() < 1e-11);
    }
  }
}

TEST_CASE("static double layer reproduces Gauss' law on curved surfaces") {
  for (auto [name, np] : {std::pair{"rotated-starfish", 20}, std::pair{"torus", 24}}) {
    PanelMesh mesh = discretize(build_curve(name), np, 16);
    MatrixXcd K = assemble_named_op(NamedOp::K_nu_prime, mesh, 0.0);
    VectorXcd one = VectorXcd::Ones(mesh.size());
    CHECK((K * one + one).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("static-minus assembly matches the difference of the two operators") {
  PanelMesh mesh = discretize(unit_sphere(), 8, 16);
  cdouble k(0.3, 0.3);
  MatrixXcd D = assemble_named_op(NamedOp::K_nu, mesh, 0.0) - assemble_named_op(NamedOp::K_nu, mesh, k);
  MatrixXcd Dm = assemble_named_op_static_minus(NamedOp::K_nu, mesh, k);
  CHECK((D - Dm).cwiseAbs().maxCoeff() < 1e-10);
  MatrixXcd E = assemble_Ek(mesh, 0.0) - assemble_Ek(mesh, k);
  MatrixXcd Em = assemble_static_minus_Ek(mesh, k);
  CHECK((E - Em).cwiseAbs().maxCoeff() < 1e-10);
}
