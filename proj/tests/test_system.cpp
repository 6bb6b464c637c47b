#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "eddy/gmres.hpp"
#include "eddy/incident.hpp"
#include "eddy/mie.hpp"
#include "eddy/system.hpp"

using namespace eddy;

TEST_CASE("parameter identity holds across the eddy-current regime") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> lkm(-12.0, -1.0), lkp(-2.0, 1.7), ph(0.0, std::numbers::pi / 2);
  for (int t = 0; t < 200; ++t) {
    cdouble km = std::pow(10.0, lkm(rng));
    cdouble kp = std::polar(std::pow(10.0, lkp(rng)), ph(rng));
    Wavenumbers wn(km, kp);
    for (Variant v : {Variant::A, Variant::Ainf, Variant::B}) {
      ParameterSet p = make_params(v, wn);
      double worst = 0.0;
      for (int i = 0; i < 8; ++i) worst = std::max(worst, std::abs(p.P[i] * (p.r * p.Mp[i] + p.M[i]) * p.Pp[i] - 1.0));
      CHECK(worst < 1e-14);
    }
  }
}

TEST_CASE("wavenumber validation") {
  CHECK_THROWS(Wavenumbers(0.0, 1.0));
  CHECK_THROWS(Wavenumbers(1.0, cdouble(1.0, -1.0)));
  CHECK(Wavenumbers(1e-8, cdouble(1, 1)).regime_warnings().empty());
  CHECK(!Wavenumbers(1.0, cdouble(1, 1)).regime_warnings().empty());
  CHECK(!Wavenumbers(1e-8, cdouble(60, 60)).regime_warnings().empty());
}

TEST_CASE("GMRES agrees with a direct solve") {
  std::mt19937 rng(5);
  std::normal_distribution<double> G;
  const int n = 60;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) += cdouble(G(rng), G(rng)) * 0.3 / std::sqrt(double(n));
  Eigen::VectorXcd b(n);
  for (int i = 0; i < n; ++i) b(i) = cdouble(G(rng), G(rng));
  GmresResult r = gmres(A, b, {1e-14, 200});
  CHECK(r.converged);
  CHECK((r.x - A.partialPivLu().solve(b)).norm() < 1e-12 * b.norm());
  CHECK(r.true_residual < 1e-13);
  // zero right-hand side
  GmresResult z = gmres(A, Eigen::VectorXcd::Zero(n));
  CHECK(z.x.norm() == 0.0);
}

TEST_CASE("nullity from a singular value gap") {
  Eigen::VectorXd s(10);
  s << 10, 9, 8, 7, 6, 5, 4, 3, 1e-12, 1e-13;
  auto r = nullity_from_singular_values(s);
  CHECK(r.nullity == 2);
  CHECK(r.gap > 1e11);
  s << 10, 9, 8, 7, 6, 5, 4, 3, 2, 1;
  CHECK(nullity_from_singular_values(s).nullity == 0);
}

TEST_CASE("formulations refuse the wrong topology") {
  auto mesh = std::make_shared<const PanelMesh>(discretize(starfish_torus(), 8, 16));
  Wavenumbers wn(1e-4, cdouble(1, 1));
  OperatorSet ops = assemble_operators(mesh, wn, false);
  SystemConfig cfg;
  cfg.form = Formulation::B_aug0;
  CHECK_THROWS_AS(assemble_system(ops, cfg), std::invalid_argument);
  cfg.form = Formulation::B_aug1;
  CHECK_THROWS_AS(assemble_system(ops, cfg), std::invalid_argument);
}

TEST_CASE("transparent body: no scattered field, interior field equals the incident field") {
  // k+ = k-: the scatterer is invisible; the residual is discretization error and
  // must shrink under refinement
  cdouble k(0.7, 0.0);
  Wavenumbers wn(k, k);
  for (Formulation f : {Formulation::A, Formulation::B_aug0}) {
    double prev = 1.0;
    for (int panels : {16, 24}) {
      auto mesh = std::make_shared<const PanelMesh>(discretize(rotated_starfish(), panels, 16));
      const int N = int(mesh->size());
      OperatorSet ops = assemble_operators(mesh, wn, false);
      VectorXcd f0 = trace_f0(IncidentField{IncidentKind::partial_wave, k}, *mesh);
      SystemConfig cfg;
      cfg.form = f;
      AssembledSystem S = assemble_system(ops, cfg);
      GmresResult r = S.solve(f0);
      CHECK(r.converged);
      SurfaceTraces tr = surface_traces(S, ops, r.x);
      double scale = f0.cwiseAbs().maxCoeff(), err = 0.0;
      for (int c : {1, 2, 3, 5, 6, 7}) {
        err = std::max(err, tr.Fm.segment(c * N, N).cwiseAbs().maxCoeff());
        err = std::max(err, (tr.Fp.segment(c * N, N) - f0.segment(c * N, N)).cwiseAbs().maxCoeff());
      }
      err /= scale;
      MESSAGE(formulation_name(f) << " " << panels << " panels: " << err);
      CHECK(err < 1e-6);
      CHECK(err < 0.1 * prev);
      prev = err;
    }
  }
}

TEST_CASE("sphere traces agree with the series solution for every formulation") {
  auto mesh = std::make_shared<const PanelMesh>(discretize(unit_sphere(), 8, 16));
  const int N = int(mesh->size());
  cdouble km = 1e-4, kp(1, 1);
  Wavenumbers wn(km, kp);
  OperatorSet ops = assemble_operators(mesh, wn, false);
  MieCoefficients mie = mie_solve(km, kp);
  VectorXcd f0 = trace_f0(IncidentField{IncidentKind::partial_wave, km}, *mesh);
  for (Formulation f : {Formulation::A, Formulation::Ainf_aug, Formulation::B_aug0}) {
    SystemConfig cfg;
    cfg.form = f;
    AssembledSystem S = assemble_system(ops, cfg);
    GmresResult r = S.solve(f0);
    REQUIRE(r.converged);
    SurfaceTraces tr = surface_traces(S, ops, r.x);
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < N; ++i) {
      const Node& n = mesh->nodes[i];
      auto [in, out] = mie_interface_fields(mie, std::atan2(n.rho, n.z));
      CVec3 Ein = in.E;
      cdouble tangential[2] = {n.tau[0] * Ein(0) + n.tau[1] * Ein(2), Ein(1)};
      err = std::max({err, std::abs(tr.Fp(6 * N + i) - tangential[0]), std::abs(tr.Fp(7 * N + i) - tangential[1])});
      scale = std::max(scale, Ein.norm());
    }
    MESSAGE(formulation_name(f) << " sphere trace error " << err / scale);
    // the A-infinity family determines E+ only up to its weak low-frequency coupling
    CHECK(err / scale < (f == Formulation::Ainf_aug ? 1e-4 : 1e-8));
  }
}
