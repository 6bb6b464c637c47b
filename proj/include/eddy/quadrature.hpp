#pragma once
// Fixed quadrature rules used throughout: Gauss-Legendre on [-1,1] and a
// tanh-sinh rule on [0,1] that clusters nodes at both endpoints.

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace eddy {

struct Rule {
  std::vector<double> x; // nodes
  std::vector<double> w; // weights
  std::size_t size() const { return x.size(); }
};

namespace detail {
inline Rule compute_gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const double pi = std::numbers::pi;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) { p1 = x; p0 = 1.0; }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // one more evaluation for the weight at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}
} // namespace detail

// Gauss-Legendre rule on [-1,1], cached per order.
inline const Rule& gauss_legendre(int n) {
  static std::map<int, Rule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
  return it->second;
}

// Tanh-sinh rule on [0,1]. Besides the node x we keep 1-x accurately, since
// callers integrate functions singular at either end.
struct EndpointRule {
  std::vector<double> x, xc, w; // x, 1-x, weight
  std::size_t size() const { return x.size(); }
};

inline const EndpointRule& tanh_sinh_rule() {
  static const EndpointRule rule = [] {
    EndpointRule r;
    const double h = 1.0 / 8.0;
    const double half_pi = 0.5 * std::numbers::pi;
    for (int j = -30; j <= 30; ++j) {
      double t = j * h;
      double u = half_pi * std::sinh(t);
      // x = (1 + tanh u)/2 = 1/(1+e^{-2u}), 1-x = 1/(1+e^{2u})
      double x = 1.0 / (1.0 + std::exp(-2.0 * u));
      double xc = 1.0 / (1.0 + std::exp(2.0 * u));
      double ch = std::cosh(u);
      double w = h * half_pi * std::cosh(t) / (2.0 * ch * ch);
      if (x < 1e-300 || xc < 1e-300) continue;
      r.x.push_back(x);
      r.xc.push_back(xc);
      r.w.push_back(w);
    }
    return r;
  }();
  return rule;
}

} // namespace eddy
