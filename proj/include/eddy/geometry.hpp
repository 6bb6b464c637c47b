#pragma once
// Generating curves of axisymmetric surfaces and their composite
// Gauss-Legendre panel discretization.
//
// A curve is a trigonometric polynomial s -> (rho(s), z(s)) in the
// meridian half-plane. The trigonometric form gives analytic derivatives
// and, importantly for the singular quadrature, cancellation-free
// differences r(t) - r(s).

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadrature.hpp"

namespace eddy {

using Vec2 = std::array<double, 2>; // (rho, z)

struct TrigSeries {
  std::vector<double> a; // cos coefficients, a[0] is the constant
  std::vector<double> b; // sin coefficients, b[0] unused

  double value(double s) const {
    double v = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) v += a[n] * std::cos(n * s);
    for (std::size_t n = 1; n < b.size(); ++n) v += b[n] * std::sin(n * s);
    return v;
  }
  double d1(double s) const {
    double v = 0.0;
    for (std::size_t n = 1; n < a.size(); ++n) v -= n * a[n] * std::sin(n * s);
    for (std::size_t n = 1; n < b.size(); ++n) v += n * b[n] * std::cos(n * s);
    return v;
  }
  double d2(double s) const {
    double v = 0.0;
    for (std::size_t n = 1; n < a.size(); ++n) v -= double(n * n) * a[n] * std::cos(n * s);
    for (std::size_t n = 1; n < b.size(); ++n) v -= double(n * n) * b[n] * std::sin(n * s);
    return v;
  }
  // value(s + h) - value(s) without cancellation for small h
  double diff(double s, double h) const {
    double v = 0.0, m = s + 0.5 * h, hh = 0.5 * h;
    for (std::size_t n = 1; n < a.size(); ++n) v -= 2.0 * a[n] * std::sin(n * m) * std::sin(n * hh);
    for (std::size_t n = 1; n < b.size(); ++n) v += 2.0 * b[n] * std::cos(n * m) * std::sin(n * hh);
    return v;
  }
  void set(std::vector<double>& c, std::size_t n, double v) {
    if (c.size() <= n) c.resize(n + 1, 0.0);
    c[n] += v;
  }
  void add_cos(std::size_t n, double v) { set(a, n, v); }
  void add_sin(std::size_t n, double v) { set(b, n, v); }
};

enum class CurveKind { rotated_starfish, starfish_torus, sphere, custom };

struct GeneratingCurve {
  CurveKind kind = CurveKind::custom;
  std::string name;
  TrigSeries rho, z;
  double s0 = 0.0, s1 = 0.0;
  bool closed = false; // genus 1 when closed
  double orient = 1.0; // +1 when the curve runs counterclockwise around Omega_+

  int genus() const { return closed ? 1 : 0; }
  Vec2 pos(double s) const { return {rho.value(s), z.value(s)}; }
  Vec2 d1(double s) const { return {rho.d1(s), z.d1(s)}; }
  Vec2 d2(double s) const { return {rho.d2(s), z.d2(s)}; }
  // r(s + h) - r(s)
  Vec2 diff(double s, double h) const { return {rho.diff(s, h), z.diff(s, h)}; }
  double speed(double s) const {
    Vec2 d = d1(s);
    return std::hypot(d[0], d[1]);
  }
  // outward unit normal in the meridian plane
  Vec2 normal(double s) const {
    Vec2 d = d1(s);
    double L = std::hypot(d[0], d[1]);
    return {orient * d[1] / L, -orient * d[0] / L};
  }
  // meridional tangent with {nu, tau, theta} positively oriented
  Vec2 tangent(double s) const {
    Vec2 n = normal(s);
    return {n[1], -n[0]};
  }
  double diameter() const {
    double best = 0.0;
    const int n = 400;
    std::vector<Vec2> p(n + 1);
    for (int i = 0; i <= n; ++i) p[i] = pos(s0 + (s1 - s0) * i / n);
    // body of revolution: farthest pair may sit on opposite meridians
    for (int i = 0; i <= n; ++i)
      for (int j = i; j <= n; ++j) {
        double d1v = std::hypot(p[i][0] - p[j][0], p[i][1] - p[j][1]);
        double d2v = std::hypot(p[i][0] + p[j][0], p[i][1] - p[j][1]);
        best = std::max(best, std::max(d1v, d2v));
      }
    return best;
  }
};

namespace detail {
inline void finalize_curve(GeneratingCurve& c) {
  if (!c.closed) {
    const double tol = 1e-12;
    if (std::abs(c.rho.value(c.s0)) > tol || std::abs(c.rho.value(c.s1)) > tol)
      throw std::invalid_argument("genus-0 curve: endpoints must lie on the axis rho = 0");
    // a smooth surface of revolution meets the axis at right angles
    if (std::abs(c.rho.d1(c.s0)) < tol || std::abs(c.rho.d1(c.s1)) < tol)
      throw std::invalid_argument("genus-0 curve: must cross the axis transversally");
  } else {
    Vec2 a = c.pos(c.s0), b = c.pos(c.s1);
    if (std::hypot(a[0] - b[0], a[1] - b[1]) > 1e-12)
      throw std::invalid_argument("genus-1 curve: not closed");
  }
  // orientation from the signed area  oint rho dz  (the axis segment adds nothing)
  const Rule& g = gauss_legendre(32);
  double area = 0.0;
  const int np = 64;
  for (int p = 0; p < np; ++p) {
    double a = c.s0 + (c.s1 - c.s0) * p / np, b = c.s0 + (c.s1 - c.s0) * (p + 1) / np;
    for (std::size_t q = 0; q < g.size(); ++q) {
      double s = 0.5 * (a + b) + 0.5 * (b - a) * g.x[q];
      double r = c.rho.value(s);
      if (c.closed && r <= 0.0) throw std::invalid_argument("genus-1 curve: rho must be positive");
      area += 0.5 * (b - a) * g.w[q] * r * c.z.d1(s);
    }
  }
  c.orient = area > 0.0 ? 1.0 : -1.0;
}
} // namespace detail

// (rho, z) = (1 + 0.25 sin 5s)(cos s, sin s), s in [-pi/2, pi/2]
inline GeneratingCurve rotated_starfish() {
  GeneratingCurve c;
  c.kind = CurveKind::rotated_starfish;
  c.name = "rotated-starfish";
  c.rho.add_cos(1, 1.0);
  c.rho.add_sin(6, 0.125);
  c.rho.add_sin(4, 0.125);
  c.z.add_sin(1, 1.0);
  c.z.add_cos(4, 0.125);
  c.z.add_cos(6, -0.125);
  c.z.add_cos(0, 0.0);
  c.s0 = -0.5 * std::numbers::pi;
  c.s1 = 0.5 * std::numbers::pi;
  detail::finalize_curve(c);
  return c;
}

// (rho, z) = (1, 0) + 0.5 (1 + 0.25 sin 5s)(cos s, sin s), s in [-pi, pi]
inline GeneratingCurve starfish_torus() {
  GeneratingCurve c;
  c.kind = CurveKind::starfish_torus;
  c.name = "starfish-torus";
  c.rho.add_cos(0, 1.0);
  c.rho.add_cos(1, 0.5);
  c.rho.add_sin(6, 0.0625);
  c.rho.add_sin(4, 0.0625);
  c.z.add_cos(0, 0.0);
  c.z.add_sin(1, 0.5);
  c.z.add_cos(4, 0.0625);
  c.z.add_cos(6, -0.0625);
  c.s0 = -std::numbers::pi;
  c.s1 = std::numbers::pi;
  c.closed = true;
  detail::finalize_curve(c);
  return c;
}

inline GeneratingCurve unit_sphere() {
  GeneratingCurve c;
  c.kind = CurveKind::sphere;
  c.name = "sphere";
  c.rho.add_cos(1, 1.0);
  c.z.add_cos(0, 0.0);
  c.z.add_sin(1, 1.0);
  c.s0 = -0.5 * std::numbers::pi;
  c.s1 = 0.5 * std::numbers::pi;
  detail::finalize_curve(c);
  return c;
}

// Custom curve from explicit trigonometric coefficients.
inline GeneratingCurve custom_curve(TrigSeries rho, TrigSeries z, double s0, double s1, bool closed,
                                    std::string name = "custom") {
  GeneratingCurve c;
  c.kind = CurveKind::custom;
  c.name = std::move(name);
  c.rho = std::move(rho);
  c.z = std::move(z);
  c.s0 = s0;
  c.s1 = s1;
  c.closed = closed;
  if (c.rho.a.empty()) c.rho.a.push_back(0.0);
  if (c.z.a.empty()) c.z.a.push_back(0.0);
  detail::finalize_curve(c);
  return c;
}

// Text format, one directive per line ('#' starts a comment):
//   domain <s0> <s1>
//   closed <0|1>
//   rho cos|sin <n> <coef>
//   z   cos|sin <n> <coef>
inline GeneratingCurve load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open curve file " + path);
  TrigSeries rho, z;
  double s0 = 0.0, s1 = 0.0;
  bool closed = false, have_domain = false;
  std::string line;
  while (std::getline(in, line)) {
    if (auto p = line.find('#'); p != std::string::npos) line.erase(p);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "domain") {
      ls >> s0 >> s1;
      have_domain = true;
    } else if (key == "closed") {
      int c;
      ls >> c;
      closed = c != 0;
    } else if (key == "rho" || key == "z") {
      std::string type;
      std::size_t n;
      double v;
      if (!(ls >> type >> n >> v)) throw std::runtime_error("bad coefficient line: " + line);
      TrigSeries& ts = key == "rho" ? rho : z;
      if (type == "cos") ts.add_cos(n, v);
      else if (type == "sin") ts.add_sin(n, v);
      else throw std::runtime_error("bad coefficient type: " + type);
    } else {
      throw std::runtime_error("unknown directive: " + key);
    }
  }
  if (!have_domain) throw std::runtime_error("curve file lacks a domain line");
  return custom_curve(rho, z, s0, s1, closed, path);
}

inline GeneratingCurve build_curve(const std::string& name) {
  if (name == "rotated-starfish" || name == "starfish") return rotated_starfish();
  if (name == "starfish-torus" || name == "torus") return starfish_torus();
  if (name == "sphere") return unit_sphere();
  return load_curve(name);
}

// One Nystrom node.
struct Node {
  double s;     // curve parameter
  double rho, z;
  Vec2 nu, tau; // meridional components (rho, z)
  double speed; // |r'(s)|
  double wa;    // arclength weight (Gauss weight * half panel length * speed)
  double w;     // surface weight 2 pi rho wa
  int panel;
};

struct Panel {
  double a, b; // parameter interval
  int first;   // index of the first node
};

struct PanelMesh {
  GeneratingCurve curve;
  int order = 16;
  std::vector<Panel> panels;
  std::vector<Node> nodes;

  std::size_t size() const { return nodes.size(); }
  int genus() const { return curve.genus(); }
  double area() const {
    double A = 0.0;
    for (const Node& n : nodes) A += n.w;
    return A;
  }
  double panel_length(int p) const {
    double L = 0.0;
    for (int j = 0; j < order; ++j) L += nodes[panels[p].first + j].wa;
    return L;
  }
  // neighbour panel, -1 at the axis ends of genus-0 curves
  int neighbour(int p, int dir) const {
    int q = p + dir;
    int np = int(panels.size());
    if (q < 0) return curve.closed ? np - 1 : -1;
    if (q >= np) return curve.closed ? 0 : -1;
    return q;
  }
};

inline Node make_node(const GeneratingCurve& c, double s, double gw, double half, int panel) {
  Node n;
  n.s = s;
  Vec2 p = c.pos(s);
  n.rho = p[0];
  n.z = p[1];
  n.nu = c.normal(s);
  n.tau = c.tangent(s);
  n.speed = c.speed(s);
  n.wa = gw * half * n.speed;
  n.w = 2.0 * std::numbers::pi * n.rho * n.wa;
  n.panel = panel;
  return n;
}

// Uniform-in-s panels; breakpoints may be supplied for local refinement.
inline PanelMesh discretize(const GeneratingCurve& c, const std::vector<double>& breaks, int order = 16) {
  if (order != 16 && order != 32) throw std::invalid_argument("discretize: order must be 16 or 32");
  if (breaks.size() < 5) throw std::invalid_argument("discretize: need at least 4 panels");
  PanelMesh m;
  m.curve = c;
  m.order = order;
  const Rule& g = gauss_legendre(order);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    double a = breaks[p], b = breaks[p + 1];
    m.panels.push_back({a, b, int(m.nodes.size())});
    for (int q = 0; q < order; ++q) {
      double s = 0.5 * (a + b) + 0.5 * (b - a) * g.x[q];
      m.nodes.push_back(make_node(c, s, g.w[q], 0.5 * (b - a), int(p)));
    }
  }
  return m;
}

inline PanelMesh discretize(const GeneratingCurve& c, int n_panels, int order = 16) {
  if (n_panels < 4) throw std::invalid_argument("discretize: n_panels must be >= 4");
  std::vector<double> br(n_panels + 1);
  for (int p = 0; p <= n_panels; ++p) br[p] = c.s0 + (c.s1 - c.s0) * p / n_panels;
  return discretize(c, br, order);
}

// Roughly 50% more nodes on the same curve.
inline PanelMesh overresolve(const PanelMesh& m) {
  int np = int(m.panels.size());
  int nf = (3 * np + 1) / 2;
  return discretize(m.curve, nf, m.order);
}

} // namespace eddy
