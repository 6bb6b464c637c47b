#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eddy/field_eval.hpp"
#include "eddy/incident.hpp"
#include "eddy/mie.hpp"

using namespace eddy;

TEST_CASE("points are classified by side of the generating curve") {
  PanelMesh sph = discretize(unit_sphere(), 8, 16);
  CHECK(classify_point(sph, 0.2, 0.3).region == Region::interior);
  CHECK(classify_point(sph, 0.0, 0.999).region == Region::interior);
  CHECK(classify_point(sph, 0.0, 1.001).region == Region::exterior);
  CHECK(classify_point(sph, 1.5, 0.0).region == Region::exterior);
  CHECK(classify_point(sph, std::sin(0.4), std::cos(0.4)).region == Region::boundary);
  PanelMesh tor = discretize(starfish_torus(), 20, 16);
  CHECK(classify_point(tor, 1.0, 0.0).region == Region::interior);
  CHECK(classify_point(tor, 0.2, 0.0).region == Region::exterior); // the hole
  CHECK(classify_point(tor, 1.0, 0.9).region == Region::exterior);
}

TEST_CASE("digits and mirroring") {
  CHECK(digits_from_error(1e-8) == 8);
  CHECK(digits_from_error(3e-7) == 7);
  CHECK(digits_from_error(0.0) == 16);
  CVec3 v(1.0, 2.0, 3.0);
  CHECK(mirror_vector(v, -1.0) == CVec3(-1.0, -2.0, 3.0));
  CHECK(mirror_vector(v, 1.0) == v);
}

TEST_CASE("volume fields match the series solution, including near the surface") {
  auto mesh = std::make_shared<const PanelMesh>(discretize(unit_sphere(), 8, 16));
  cdouble km = 1e-4, kp(1, 1);
  Wavenumbers wn(km, kp);
  OperatorSet ops = assemble_operators(mesh, wn, false);
  SystemConfig cfg;
  cfg.form = Formulation::B_aug0;
  AssembledSystem S = assemble_system(ops, cfg);
  VectorXcd f0 = trace_f0(IncidentField{IncidentKind::partial_wave, km}, *mesh);
  GmresResult r = S.solve(f0);
  REQUIRE(r.converged);
  MieCoefficients mie = mie_solve(km, kp);
  std::vector<std::pair<double, double>> pts;
  for (double d : {-0.3, -1e-2, -1e-4, 1e-4, 1e-2, 0.5})
    for (double t : {0.05, 0.7, 1.6, 2.9}) {
      double R = 1.0 + d;
      double x = R * std::sin(t) * (t > 2.0 ? -1.0 : 1.0);
      pts.push_back({x, R * std::cos(t)});
    }
  FieldSolution sol = evaluate_fields(S, r.x, pts);
  double scE = 0.0, scH = 0.0, errE = 0.0, errH = 0.0;
  for (const FieldTarget& t : sol.targets) {
    REQUIRE(t.evaluated);
    bool in = t.info.region == Region::interior;
    CHECK(in == (std::hypot(t.x, t.z) < 1.0));
    auto m = mie_fields(mie, std::abs(t.x), t.z, in).field;
    errE = std::max(errE, (t.E - mirror_vector(m.E, t.x)).norm());
    errH = std::max(errH, (t.H - mirror_vector(m.H, t.x)).norm());
    scE = std::max(scE, m.E.norm());
    scH = std::max(scH, m.H.norm());
  }
  CHECK(errE / scE < 1e-9);
  CHECK(errH / scH < 1e-9);
  // Helmholtz components of the representation vanish
  for (const FieldTarget& t : sol.targets) CHECK(std::abs(t.F(0)) + std::abs(t.F(7)) < 1e-9 * scE);

  SUBCASE("surface checks") {
    SurfaceTraces tr = surface_traces(S, ops, r.x);
    JumpReport j = jump_checks(tr, f0, *mesh, wn);
    CHECK(j.tangential_E < 1e-12);
    CHECK(j.tangential_H < 1e-12);
    CHECK(j.normal_defined);
    CHECK(j.normal_jump < 1e-6);
    CHECK(j.flux_E_minus < 1e-12);
  }
  SUBCASE("field map has the documented shape") {
    MatrixXcd F = field_map(S, ops);
    CHECK(F.rows() == 12 * Eigen::Index(mesh->size()));
    CHECK(F.cols() == 8 * Eigen::Index(mesh->size()));
  }
}
