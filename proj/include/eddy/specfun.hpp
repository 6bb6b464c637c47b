#pragma once
// Special functions for complex arguments in the closed upper half plane:
// the Helmholtz fundamental solution, Hankel functions of order 0 and 1,
// spherical Bessel/Hankel functions of order <= 2, and complete elliptic
// integrals.

#include <boost/math/special_functions/ellint_rd.hpp>
#include <boost/math/special_functions/ellint_rf.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "quadrature.hpp"

namespace eddy {

using cdouble = std::complex<double>;
inline constexpr cdouble I1{0.0, 1.0};

// Phi_k(r) = e^{ikr}/(2 pi r)
inline cdouble phi_k(cdouble k, double r) {
  if (!(r > 0.0)) throw std::domain_error("phi_k: r must be positive");
  return std::exp(I1 * k * r) / (2.0 * std::numbers::pi * r);
}

namespace detail {

inline cdouble hankel1_series(int n, cdouble z) {
  const double pi = std::numbers::pi;
  const double euler = 0.57721566490153286061;
  cdouble h = 0.5 * z;
  cdouble h2 = -h * h;
  cdouble lg = std::log(h) + euler;
  if (n == 0) {
    cdouble term = 1.0, J = 1.0, S = 0.0;
    double Hm = 0.0;
    for (int m = 1; m < 60; ++m) {
      term *= h2 / double(m * m);
      Hm += 1.0 / m;
      J += term;
      S -= Hm * term; // (-1)^{m+1} H_m (z/2)^{2m}/(m!)^2
      if (std::abs(term) < 1e-18 * std::abs(J) && m > 3) break;
    }
    cdouble Y = (2.0 / pi) * (lg * J + S);
    return J + I1 * Y;
  }
  // n == 1
  cdouble term = h, J = h;
  double Hm = 0.0, Hm1 = 1.0; // H_m, H_{m+1}
  cdouble S = term * (Hm + Hm1); // sum of (H_m + H_{m+1}) * term
  for (int m = 1; m < 60; ++m) {
    term *= h2 / double(m * (m + 1));
    Hm += 1.0 / m;
    Hm1 += 1.0 / (m + 1);
    J += term;
    S += term * (Hm + Hm1);
    if (std::abs(term) < 1e-18 * std::abs(J) && m > 3) break;
  }
  // Y1 = -2/(pi z) + (2/pi) ln(z/2) J1 - (1/pi) sum (psi(m+1)+psi(m+2)) ...
  //    psi(m+1) + psi(m+2) = H_m + H_{m+1} - 2 gamma
  cdouble Y = -2.0 / (pi * z) + (2.0 / pi) * lg * J - (1.0 / pi) * S;
  return J + I1 * Y;
}

// Hankel's integral: H_n(z) = sqrt(2/(pi z)) e^{i(z - n pi/2 - pi/4)}/Gamma(n+1/2)
//   * 2 int_0^inf e^{-v^2} v^{2n} (1 + i v^2/(2z))^{n-1/2} dv
inline cdouble hankel1_integral(int n, cdouble z) {
  const double pi = std::numbers::pi;
  const Rule& g = gauss_legendre(16);
  const double len = 0.5;
  cdouble acc = 0.0;
  cdouble c = I1 / (2.0 * z);
  double p = n - 0.5;
  for (int panel = 0; panel < 14; ++panel) {
    double a = panel * len;
    for (std::size_t q = 0; q < g.size(); ++q) {
      double v = a + 0.5 * len * (g.x[q] + 1.0);
      double v2 = v * v;
      cdouble f = std::exp(-v2) * std::pow(1.0 + c * v2, p);
      if (n == 1) f *= v2;
      acc += 0.5 * len * g.w[q] * f;
    }
  }
  double gam = (n == 0) ? std::sqrt(pi) : 0.5 * std::sqrt(pi);
  cdouble pref = std::sqrt(2.0 / (pi * z)) * std::exp(I1 * (z - n * pi / 2 - pi / 4)) / gam;
  return pref * 2.0 * acc;
}

} // namespace detail

// First-kind Hankel function of order 0 or 1, Im z >= 0, z != 0.
inline cdouble hankel1(int n, cdouble z) {
  if (n != 0 && n != 1) throw std::invalid_argument("hankel1: only orders 0 and 1");
  if (z == cdouble(0.0)) throw std::domain_error("hankel1: z = 0");
  if (z.imag() < 0.0) throw std::domain_error("hankel1: Im z < 0");
  if (std::abs(z) <= 3.0) return detail::hankel1_series(n, z);
  return detail::hankel1_integral(n, z);
}

// Spherical Bessel function j_n, n = 0,1,2.
inline cdouble spherical_bessel_j(int n, cdouble z) {
  if (n < 0 || n > 2) throw std::invalid_argument("spherical_bessel_j: n in 0..2");
  if (std::abs(z) < 2.0) {
    // z^n/(2n+1)!! sum_m (-z^2/2)^m / (m! (2n+3)(2n+5)...(2n+2m+1))
    double df = 1.0;
    for (int k = 1; k <= 2 * n + 1; k += 2) df *= k;
    cdouble zn = std::pow(z, n);
    cdouble t = 1.0, s = 1.0, q = -0.5 * z * z;
    for (int m = 1; m < 30; ++m) {
      t *= q / (double(m) * (2 * n + 2 * m + 1));
      s += t;
      if (std::abs(t) < 1e-18 * std::abs(s)) break;
    }
    return zn / df * s;
  }
  cdouble sn = std::sin(z), cs = std::cos(z);
  switch (n) {
  case 0: return sn / z;
  case 1: return sn / (z * z) - cs / z;
  default: return (3.0 / (z * z) - 1.0) * sn / z - 3.0 * cs / (z * z);
  }
}

// Spherical Bessel function of the second kind y_n, n = 0,1,2.
inline cdouble spherical_bessel_y(int n, cdouble z) {
  if (n < 0 || n > 2) throw std::invalid_argument("spherical_bessel_y: n in 0..2");
  cdouble sn = std::sin(z), cs = std::cos(z);
  switch (n) {
  case 0: return -cs / z;
  case 1: return -cs / (z * z) - sn / z;
  default: return (-3.0 / (z * z) + 1.0) * cs / z - 3.0 * sn / (z * z);
  }
}

// Spherical Hankel function of the first kind h_n = j_n + i y_n, n = 0,1,2.
inline cdouble spherical_hankel1(int n, cdouble z) {
  if (n < 0 || n > 2) throw std::invalid_argument("spherical_hankel1: n in 0..2");
  if (z == cdouble(0.0)) throw std::domain_error("spherical_hankel1: z = 0");
  cdouble e = std::exp(I1 * z);
  switch (n) {
  case 0: return -I1 * e / z;
  case 1: return -e * (z + I1) / (z * z);
  default: return I1 * e * (z * z + 3.0 * I1 * z - 3.0) / (z * z * z);
  }
}

// Complete elliptic integrals K(m), E(m) for parameter 0 <= m < 1.
inline std::pair<double, double> elliptic_KE(double m) {
  if (!(m >= 0.0) || m >= 1.0) throw std::domain_error("elliptic_KE: m outside [0,1)");
  // Carlson forms in the parameter itself: no sqrt(m) round-off near m = 1
  double mc = 1.0 - m;
  double K = boost::math::ellint_rf(0.0, mc, 1.0);
  return {K, K - m / 3.0 * boost::math::ellint_rd(0.0, mc, 1.0)};
}

} // namespace eddy
