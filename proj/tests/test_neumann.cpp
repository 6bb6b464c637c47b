#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "eddy/neumann.hpp"

using namespace eddy;
constexpr double pi = std::numbers::pi;

namespace {

// Biot-Savart sum over a polygonal loop, unit current
Vec2 biot_savart(double a, double b, double rho, double z, int M = 20000) {
  double Hr = 0.0, Hz = 0.0;
  for (int m = 0; m < M; ++m) {
    double p = 2 * pi * (m + 0.5) / M;
    double dx = rho - a * std::cos(p), dy = -a * std::sin(p), dz = z - b;
    double R = std::sqrt(dx * dx + dy * dy + dz * dz);
    double lx = -a * std::sin(p), ly = a * std::cos(p); // dl/dp
    double f = (2 * pi / M) / (4 * pi * R * R * R);
    Hr += (ly * dz) * f;
    Hz += (lx * dy - ly * dx) * f;
  }
  return {Hr, Hz};
}

} // namespace

TEST_CASE("loop field agrees with a direct Biot-Savart sum") {
  LoopSource L{1.0, 0.3};
  for (auto [r, z] : {std::pair{0.6, 1.1}, std::pair{2.0, -0.4}, std::pair{0.05, 0.3}, std::pair{1.2, 0.3}}) {
    Vec2 H = L.field(r, z), B = biot_savart(1.0, 0.3, r, z);
    CHECK(std::abs(H[0] - B[0]) < 1e-10);
    CHECK(std::abs(H[1] - B[1]) < 1e-10);
  }
  // on the axis
  Vec2 H = L.field(0.0, 1.3);
  CHECK(std::abs(H[1] - 0.5 / std::pow(2.0, 1.5)) < 1e-15);
  auto F = [&](double r, double z) { return L.field(r, z); };
  CHECK(std::abs(curl_theta_fd(F, 0.7, 0.9, 1e-5)) < 1e-8);
}

TEST_CASE("weight function on the starfish torus") {
  PanelMesh mesh = discretize(starfish_torus(), 24, 16);
  WeightFunction W = compute_weight(mesh);
  CHECK(W.min_value > 0.0);
  CHECK(std::abs(W.average - 1.0) < 1e-12);
  CHECK(W.gmres_iterations <= 60);
  CHECK(W.routes_deviation < 1e-5);
  CHECK(W.normal_residual < 1e-6);
  CHECK(std::abs(W.circulation - 1.0) < 1e-10);
  // the loop sits inside the tube
  CHECK(classify_point(mesh, W.loop.a, W.loop.b).region == Region::interior);
  CHECK_THROWS(compute_weight(discretize(unit_sphere(), 8, 16)));
}

TEST_CASE("eddy eigenfield: curl H equals J inside, vanishes outside") {
  PanelMesh mesh = discretize(starfish_torus(), 20, 16);
  EddyEigenfield E(mesh);
  for (auto [r, z] : {std::pair{1.0, 0.0}, std::pair{1.2, 0.1}, std::pair{0.8, -0.2}, std::pair{2.0, 0.5},
                      std::pair{0.2, 0.1}, std::pair{1.0, 1.0}}) {
    Region reg = classify_point(mesh, r, z).region;
    auto H = [&](double rr, double zz) { return E.H(rr, zz, reg); };
    double c = curl_theta_fd(H, r, z, 1e-4);
    CHECK(std::abs(c - E.J(r, reg)) < 1e-3 * std::max(1.0, E.J(r, reg)));
    // and divergence free
    Vec2 a = H(r + 1e-4, z), b = H(r - 1e-4, z), p = H(r, z + 1e-4), q = H(r, z - 1e-4);
    double div = ((r + 1e-4) * a[0] - (r - 1e-4) * b[0]) / (2e-4 * r) + (p[1] - q[1]) / 2e-4;
    CHECK(std::abs(div) < 1e-5);
  }
}

TEST_CASE("superconductor eigenfield is curl-free outside and tangential on the surface") {
  PanelMesh mesh = discretize(starfish_torus(), 20, 16);
  WeightFunction W = compute_weight(mesh);
  PecEigenfield P(mesh, W);
  for (auto [r, z] : {std::pair{2.0, 0.5}, std::pair{0.2, 0.1}, std::pair{1.0, 1.0}}) {
    auto H = [&](double rr, double zz) { return P.H(rr, zz, Region::exterior); };
    Vec2 h0 = H(r, z);
    CHECK(std::abs(curl_theta_fd(H, r, z, 1e-4)) < 1e-5 * std::hypot(h0[0], h0[1]));
  }
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < mesh.size(); i += 13) {
    const Node& n = mesh.nodes[i];
    Vec2 H = P.H(n.rho + 1e-3 * n.nu[0], n.z + 1e-3 * n.nu[1], Region::exterior);
    worst = std::max(worst, std::abs(H[0] * n.nu[0] + H[1] * n.nu[1]));
    scale = std::max(scale, std::hypot(H[0], H[1]));
  }
  CHECK(worst < 1e-2 * scale);
}

TEST_CASE("augmented interior Neumann problem stays well conditioned as k -> 0") {
  PanelMesh sph = discretize(unit_sphere(), 8, 16);
  double prev = 1e300, amin = 1e300, amax = 0.0;
  for (double k : {1e-1, 1e-2, 1e-3}) {
    HelmholtzDemoPoint d = helmholtz_neumann_demo(sph, k);
    CHECK(d.smin_plain < prev);
    prev = d.smin_plain;
    amin = std::min(amin, d.smin_aug);
    amax = std::max(amax, d.smin_aug);
    CHECK(d.duality_error < 1e-6);
    // on the sphere w_k -> 1/3 (volume over area)
    CHECK(std::abs(d.w_min - 1.0 / 3.0) < 1e-2);
  }
  CHECK(amax / amin < 10.0);
  CHECK(prev < 1e-5);
}
