#pragma once
// Wavenumber pairs and the diagonal parameter matrices of the Dirac BIE
// variants A, A-infinity and B.
//
// Diagonal 8-vectors follow the density order
//   0 F0, 1 nu.F2, 2 tau.F2, 3 theta.F2, 4 F3, 5 nu.F1, 6 tau.F1, 7 theta.F1.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "specfun.hpp"

namespace eddy {

using Diag8 = std::array<cdouble, 8>;

struct Wavenumbers {
  cdouble k_minus, k_plus;
  double delta = 0.2 / std::numbers::pi;

  Wavenumbers() = default;
  Wavenumbers(cdouble km, cdouble kp, double d = 0.2 / std::numbers::pi) : k_minus(km), k_plus(kp), delta(d) {
    if (km == cdouble(0.0) || kp == cdouble(0.0)) throw std::invalid_argument("wavenumbers must be nonzero");
    if (km.imag() < 0.0 || kp.imag() < 0.0) throw std::invalid_argument("wavenumbers need Im k >= 0");
  }
  cdouble khat() const { return k_plus / k_minus; }
  cdouble a() const { return khat() / std::abs(khat()); }
  cdouble xi() const { return 1.0 + I1 * delta * std::arg(khat()); }
  double sigma() const { return 1.0 + std::abs(k_plus * khat()); }

  // 0 < k- L << |k+| L <~ 50 (advisory only)
  std::vector<std::string> regime_warnings(double L = 1.0) const {
    std::vector<std::string> w;
    if (std::abs(k_minus) * L >= 0.1 * std::abs(k_plus) * L) w.push_back("k- is not small compared with |k+|");
    if (std::abs(k_plus) * L > 50.0) w.push_back("|k+| L exceeds 50");
    return w;
  }
};

enum class Variant { A, Ainf, B };

inline std::string variant_name(Variant v) {
  switch (v) {
  case Variant::A: return "A";
  case Variant::Ainf: return "Ainf";
  default: return "B";
  }
}

inline Variant parse_variant(const std::string& s) {
  if (s == "A") return Variant::A;
  if (s == "Ainf" || s == "A-inf" || s == "Ainfty") return Variant::Ainf;
  if (s == "B") return Variant::B;
  throw std::invalid_argument("unknown variant: " + s);
}

struct ParameterSet {
  Variant variant = Variant::A;
  cdouble r, alpha, beta, gamma, alpha_p, beta_p, gamma_p;
  Diag8 M, Mp, P, Pp, N, Np;
  double identity_residual = 0.0; // max |P (r M' + M) P' - 1|
  std::vector<std::string> warnings;
};

inline Diag8 expand6(cdouble c1, cdouble c2, cdouble c34, cdouble c5, cdouble c6, cdouble c78) {
  return {c1, c2, c34, c34, c5, c6, c78, c78};
}

// Jump matrix M of DTP(k-, k+, alpha, beta, gamma) and its dual M'.
inline Diag8 jump_matrix(cdouble kh, cdouble alpha, cdouble beta, cdouble gamma) {
  return expand6(kh / (alpha * beta), 1.0 / kh, kh / alpha, 1.0 / gamma, 1.0 / alpha, 1.0);
}
inline Diag8 dual_jump_matrix(cdouble kh, cdouble alpha_p, cdouble beta_p, cdouble gamma_p) {
  return expand6(1.0 / alpha_p, 1.0 / gamma_p, 1.0, kh, 1.0 / (kh * alpha_p * beta_p), 1.0 / (alpha_p * kh));
}

inline ParameterSet make_params(Variant v, const Wavenumbers& wn) {
  const cdouble kh = wn.khat();
  if (kh.imag() == 0.0 && kh.real() < 0.0) throw std::domain_error("khat on the negative real axis");
  ParameterSet p;
  p.variant = v;
  const cdouble a = wn.a(), ac = std::conj(a), xi = wn.xi();
  const double sg = wn.sigma(), akh = std::abs(kh);
  p.r = 1.0 / kh;
  p.alpha = kh * kh;
  switch (v) {
  case Variant::A: {
    p.beta = xi;
    p.gamma = a;
    p.alpha_p = 1.0 / kh;
    p.beta_p = 1.0 / kh;
    p.gamma_p = ac;
    cdouble s = std::sqrt(kh), s1a = std::sqrt(1.0 + a);
    p.Pp = expand6(1.0, s / s1a, s, 1.0, 1.0, kh / (kh + 1.0));
    p.P = expand6(xi / (1.0 / kh + xi), s / s1a, s / 2.0, 1.0 / (1.0 + ac), 1.0 / (1.0 + 1.0 / (kh * kh)), 1.0);
    p.N = expand6(1.0 / (1.0 + xi * kh), 1.0 / (s * s1a), 1.0 / (2.0 * s), 1.0 / (1.0 + a), 1.0 / (1.0 + kh * kh), 1.0);
    p.Np = expand6(1.0, 1.0 / (std::sqrt(akh) * std::sqrt(1.0 + ac)), 1.0 / s, 1.0, 1.0, 1.0 / (1.0 + kh));
    if (akh > 1e3 || akh < 1e-3) p.warnings.push_back("variant A is intended for |khat| of moderate size");
    break;
  }
  case Variant::Ainf: {
    p.beta = xi;
    p.gamma = a;
    p.alpha_p = 1.0 / (akh * kh);
    p.beta_p = ac;
    p.gamma_p = ac;
    p.P = expand6(kh * kh / ((akh + 1.0 / (kh * xi)) * sg), kh / ((1.0 + a) * sg), kh / (2.0 * sg), 1.0 / (1.0 + ac),
                  1.0 / (1.0 + 1.0 / (kh * kh)), 1.0 / (1.0 + ac));
    p.Pp = expand6(sg / (kh * kh), sg, sg, 1.0, 1.0, 1.0);
    p.N = expand6(kh * kh / ((akh * kh * xi + 1.0) * sg), 1.0 / ((1.0 + a) * sg), 1.0 / (2.0 * sg), ac / (1.0 + ac),
                  1.0 / (1.0 + kh * kh), 1.0 / (1.0 + ac));
    p.Np = expand6(sg / (a * kh), sg / akh, sg / kh, 1.0, 1.0, ac);
    break;
  }
  case Variant::B: {
    p.beta = kh / (akh * akh);
    p.gamma = kh * kh / xi;
    p.alpha_p = 1.0 / xi;
    p.beta_p = 1.0 / kh;
    p.gamma_p = 1.0 / xi;
    cdouble q = 1.0 / (1.0 + xi / (kh * kh));
    p.P = expand6(1.0 / (xi / kh + 1.0 / (a * a)), kh / (xi + 1.0), kh / 2.0, kh * kh / sg * q,
                  kh * kh / sg / (xi + 1.0 / kh), q);
    p.Pp = expand6(1.0, 1.0, 1.0, sg / (kh * kh), sg / kh, 1.0);
    p.N = expand6(1.0 / (1.0 + xi * a * a / kh), 1.0 / (xi + 1.0), 0.5, xi / sg * q, 1.0 / sg / (xi + 1.0 / kh), q);
    p.Np = expand6(xi / kh, xi / kh, 1.0 / kh, sg / (kh * kh), xi * sg / (kh * kh), xi / (kh * kh));
    if (akh < 1.0) p.warnings.push_back("variant B coefficients are bounded only for |khat| >~ 1");
    break;
  }
  }
  p.M = jump_matrix(kh, p.alpha, p.beta, p.gamma);
  p.Mp = dual_jump_matrix(kh, p.alpha_p, p.beta_p, p.gamma_p);
  double res = 0.0;
  for (int i = 0; i < 8; ++i) res = std::max(res, std::abs(p.P[i] * (p.r * p.Mp[i] + p.M[i]) * p.Pp[i] - 1.0));
  p.identity_residual = res;
  if (!(res < 1e-14)) {
    std::ostringstream os;
    os << "parameter identity P(rM'+M)P' = I violated: " << res;
    throw std::logic_error(os.str());
  }
  for (auto& w : wn.regime_warnings()) p.warnings.push_back(w);
  return p;
}

} // namespace eddy
