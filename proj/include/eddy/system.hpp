#pragma once
// The Dirac boundary integral system
//     h + G h + sum_j b_j (c_j h) = 2 N f0 [+ b (d f0)],
//     G = P E_{k+} N' - N E_{k-} P',
// its augmentations, and the field representations on Gamma.

#include <algorithm>
#include <complex>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cauchy.hpp"
#include "geometry.hpp"
#include "gmres.hpp"
#include "params.hpp"

namespace eddy {

using RowVectorXcd = Eigen::RowVectorXcd;

enum class Formulation { A, Ainf, Ainf_aug, B, B_aug0, B_aug1 };

inline std::string formulation_name(Formulation f) {
  switch (f) {
  case Formulation::A: return "A";
  case Formulation::Ainf: return "Ainf";
  case Formulation::Ainf_aug: return "Ainf-aug";
  case Formulation::B: return "B";
  case Formulation::B_aug0: return "B-aug0";
  default: return "B-aug1";
  }
}

inline Formulation parse_formulation(const std::string& s) {
  if (s == "A") return Formulation::A;
  if (s == "Ainf" || s == "A-inf") return Formulation::Ainf;
  if (s == "Ainf-aug" || s == "A-inf-aug") return Formulation::Ainf_aug;
  if (s == "B") return Formulation::B;
  if (s == "B-aug0") return Formulation::B_aug0;
  if (s == "B-aug1") return Formulation::B_aug1;
  throw std::invalid_argument("unknown formulation: " + s);
}

inline Variant variant_of(Formulation f) {
  switch (f) {
  case Formulation::A: return Variant::A;
  case Formulation::Ainf:
  case Formulation::Ainf_aug: return Variant::Ainf;
  default: return Variant::B;
  }
}

enum class AugId { bc1_D, bcR_D, bc2_D, bc1_H, bc2_H, bcR_N, bc1_N };

inline std::string aug_name(AugId id) {
  switch (id) {
  case AugId::bc1_D: return "bc1_D";
  case AugId::bcR_D: return "bcR_D";
  case AugId::bc2_D: return "bc2_D";
  case AugId::bc1_H: return "bc1_H";
  case AugId::bc2_H: return "bc2_H";
  case AugId::bcR_N: return "bcR_N";
  default: return "bc1_N";
  }
}

struct AugmentationTerm {
  AugId id;
  Eigen::VectorXcd b;
  RowVectorXcd c;
  std::optional<RowVectorXcd> d; // functional on incident traces
};

struct SystemConfig {
  Formulation form = Formulation::B_aug0;
  double chi = 1.0;
  bool e8_eigen = false; // use the interior Neumann field's theta trace for e8
  GmresOptions gmres;
};

// Node-level helpers for component-major densities.
inline Eigen::VectorXcd unit_density(const PanelMesh& mesh, int comp) {
  const int N = int(mesh.size());
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(8 * N);
  e.segment(comp * N, N).setOnes();
  return e;
}

// Surface-average weights: ave int f dGamma = sum_i mu_i f_i.
inline Eigen::VectorXd average_weights(const PanelMesh& mesh) {
  const int N = int(mesh.size());
  Eigen::VectorXd mu(N);
  double area = 0.0;
  for (int i = 0; i < N; ++i) {
    mu(i) = 2.0 * std::numbers::pi * mesh.nodes[i].rho * mesh.nodes[i].wa;
    area += mu(i);
  }
  return mu / area;
}

inline void scale_components(Eigen::VectorXcd& v, const Diag8& d, int N) {
  for (int c = 0; c < 8; ++c) v.segment(c * N, N) *= d[c];
}
inline Eigen::VectorXcd scaled(const Eigen::VectorXcd& v, const Diag8& d, int N) {
  Eigen::VectorXcd w = v;
  scale_components(w, d, N);
  return w;
}
inline void scale_columns(RowVectorXcd& r, const Diag8& d, int N) {
  for (int c = 0; c < 8; ++c) r.segment(c * N, N) *= d[c];
}

// Row functional f |-> ave int (X f)_comp w dGamma for a dense operator X.
inline RowVectorXcd average_row(const MatrixXcd& X, int comp, const Eigen::VectorXd& mu) {
  const Eigen::Index N = mu.size();
  return mu.cast<cdouble>().transpose() * X.middleRows(comp * N, N);
}

// The operator data an assembled system depends on.
struct OperatorSet {
  std::shared_ptr<const PanelMesh> mesh;
  Wavenumbers wn;
  MatrixXcd Ep, Em;          // E_{k+}, E_{k-}
  std::optional<MatrixXcd> D0m; // E_0 - E_{k-}, only when needed
};

inline OperatorSet assemble_operators(std::shared_ptr<const PanelMesh> mesh, const Wavenumbers& wn,
                                      bool need_difference) {
  OperatorSet ops;
  ops.mesh = mesh;
  ops.wn = wn;
  auto E = assemble_Ek(*mesh, std::vector<cdouble>{wn.k_plus, wn.k_minus});
  ops.Ep = std::move(E[0]);
  ops.Em = std::move(E[1]);
  if (need_difference) ops.D0m = assemble_static_minus_Ek(*mesh, wn.k_minus);
  return ops;
}

struct AssembledSystem {
  Formulation form;
  SystemConfig cfg;
  std::shared_ptr<const PanelMesh> mesh;
  Wavenumbers wn;
  ParameterSet par;
  int genus = 0;
  MatrixXcd A; // I + G + sum b c
  std::vector<AugmentationTerm> augs;
  // pieces of the augmented field representation
  std::optional<RowVectorXcd> cRD, cRN;
  Eigen::VectorXcd e8; // density used for the Neumann (R) augmentation
  Eigen::VectorXd weight; // w for B-aug1 (nodal)

  int size() const { return int(A.rows()); }

  Eigen::VectorXcd rhs(const Eigen::VectorXcd& f0) const {
    const int N = int(mesh->size());
    Eigen::VectorXcd g = 2.0 * scaled(f0, par.N, N);
    for (const auto& a : augs)
      if (a.d) g += a.b * ((*a.d) * f0)(0);
    return g;
  }

  std::optional<cdouble> excitation(const Eigen::VectorXcd& f0) const {
    for (const auto& a : augs)
      if (a.d) return ((*a.d) * f0)(0);
    return std::nullopt;
  }

  GmresResult solve(const Eigen::VectorXcd& f0) const { return gmres(A, rhs(f0), cfg.gmres); }
};

inline void require_weight(const std::optional<Eigen::VectorXd>& w, int N) {
  if (!w) throw std::invalid_argument("B-aug1 requires the Neumann weight function");
  if (w->size() != N) throw std::invalid_argument("weight function has the wrong size");
}

// Assemble I + G and the augmentations of the formulation. For B-aug1 the
// Neumann weight w (nodal values) must be supplied, and ops.D0m must exist.
inline AssembledSystem assemble_system(const OperatorSet& ops, const SystemConfig& cfg,
                                       const std::optional<Eigen::VectorXd>& weight = std::nullopt,
                                       const std::optional<Eigen::VectorXcd>& e8_override = std::nullopt) {
  const PanelMesh& mesh = *ops.mesh;
  const int N = int(mesh.size());
  const int n8 = 8 * N;
  AssembledSystem S;
  S.form = cfg.form;
  S.cfg = cfg;
  S.mesh = ops.mesh;
  S.wn = ops.wn;
  S.genus = mesh.genus();
  S.par = make_params(variant_of(cfg.form), ops.wn);
  const ParameterSet& p = S.par;
  if (cfg.form == Formulation::B_aug0 && S.genus != 0) throw std::invalid_argument("B-aug0 requires genus 0");
  if (cfg.form == Formulation::B_aug1 && S.genus != 1) throw std::invalid_argument("B-aug1 requires genus 1");

  S.A.resize(n8, n8);
  for (int j = 0; j < n8; ++j) {
    int cj = j / N;
    for (int i = 0; i < n8; ++i) {
      int ci = i / N;
      S.A(i, j) = p.P[ci] * ops.Ep(i, j) * p.Np[cj] - p.N[ci] * ops.Em(i, j) * p.Pp[cj];
    }
  }
  S.A.diagonal().array() += 1.0;

  if (cfg.form == Formulation::A || cfg.form == Formulation::Ainf || cfg.form == Formulation::B) return S;

  const Eigen::VectorXd mu = average_weights(mesh);
  const cdouble kh = ops.wn.khat();
  const double sg = ops.wn.sigma();
  const Eigen::VectorXcd e1 = unit_density(mesh, 0), e6 = unit_density(mesh, 5);
  // Hardy projections needed by the functionals, one component row at a time
  auto minus_row = [&](int comp, const Eigen::VectorXd& wts) {
    RowVectorXcd r = -0.5 * average_row(ops.Em, comp, wts);
    r.segment(comp * N, N) += 0.5 * wts.cast<cdouble>().transpose();
    return r; // ave int (E^-_{k-} f)_comp
  };
  auto plus_row = [&](int comp, const Eigen::VectorXd& wts) {
    RowVectorXcd r = 0.5 * average_row(ops.Ep, comp, wts);
    r.segment(comp * N, N) += 0.5 * wts.cast<cdouble>().transpose();
    return r; // ave int (E^+_{k+} f)_comp
  };
  auto add = [&](AugmentationTerm t) {
    S.A.noalias() += t.b * t.c;
    S.augs.push_back(std::move(t));
  };

  if (cfg.form == Formulation::Ainf_aug) {
    AugmentationTerm t{AugId::bc1_D, e6, minus_row(5, mu), std::nullopt};
    scale_columns(t.c, p.Pp, N);
    add(std::move(t));
    return S;
  }

  // Dirichlet (R) augmentation: c^R_D h = ave int h_6,  b^R_D = 2 N E^-_{k-} e6
  RowVectorXcd cRD = RowVectorXcd::Zero(n8);
  cRD.segment(5 * N, N) = mu.cast<cdouble>().transpose();
  Eigen::VectorXcd Eme6 = 0.5 * (e6 - ops.Em * e6);
  add({AugId::bcR_D, 2.0 * scaled(Eme6, p.N, N), cRD, std::nullopt});
  S.cRD = cRD;

  // homogeneous (L): c^2_D h = ave int (E^-_{k-}(P' h + e6 c^R_D h))_6,  b = e1
  RowVectorXcd m6 = minus_row(5, mu);
  RowVectorXcd c2D = m6;
  scale_columns(c2D, p.Pp, N);
  c2D += (m6 * e6)(0) * cRD;
  add({AugId::bc2_D, e1, c2D, std::nullopt});

  if (cfg.form == Formulation::B_aug0) {
    // c^1_H h = ave int (E^+_{k+} khat N' h)_1,  b = e6
    RowVectorXcd c1H = plus_row(0, mu);
    Diag8 s = p.Np;
    for (auto& v : s) v *= kh;
    scale_columns(c1H, s, N);
    add({AugId::bc1_H, e6, cfg.chi * c1H, std::nullopt});
    return S;
  }

  // ---- genus 1 ----
  if (!ops.D0m) throw std::invalid_argument("B-aug1 needs the difference kernel E_0 - E_{k-}");
  require_weight(weight, N);
  S.weight = *weight;
  Eigen::VectorXcd e8 = e8_override ? *e8_override : unit_density(mesh, 7);
  S.e8 = e8;
  RowVectorXcd cRN = RowVectorXcd::Zero(n8);
  cRN.segment(7 * N, N) = mu.cast<cdouble>().transpose();
  S.cRN = cRN;
  Eigen::VectorXcd Epe8 = 0.5 * (e8 + ops.Ep * e8);
  add({AugId::bcR_N, 2.0 * (sg / (kh * kh)) * scaled(Epe8, p.P, N), cRN, std::nullopt});

  // c^2_H h = ave int (E^+_{k+}(khat N' h + <s>/khat e8 c^R_N h))_1,  b = e6
  RowVectorXcd p1 = plus_row(0, mu);
  RowVectorXcd c2H = p1;
  {
    Diag8 s = p.Np;
    for (auto& v : s) v *= kh;
    scale_columns(c2H, s, N);
  }
  c2H += (p1 * e8)(0) * (sg / kh) * cRN;
  add({AugId::bc2_H, e6, cfg.chi * c2H, std::nullopt});

  // inhomogeneous (L) for the Neumann eigenfield
  Eigen::VectorXd muw = mu.cwiseProduct(*weight);
  const cdouble f = kh * kh / sg;
  RowVectorXcd p8 = plus_row(7, muw);
  RowVectorXcd c1N = p8;
  {
    Diag8 s = p.Np;
    for (auto& v : s) v *= f;
    scale_columns(c1N, s, N);
  }
  c1N += (p8 * e8)(0) * cRN;
  RowVectorXcd m8 = minus_row(7, muw);
  scale_columns(m8, p.Pp, N);
  m8.segment(5 * N, 3 * N).setZero(); // only h_{1:5}
  c1N += f * m8;
  RowVectorXcd d8 = 0.5 * average_row(*ops.D0m, 7, muw);
  d8.head(6 * N).setZero(); // only h_{7:8}
  c1N += f * d8;
  RowVectorXcd d1N = RowVectorXcd::Zero(n8);
  d1N.segment(7 * N, N) = f * muw.cast<cdouble>().transpose();
  add({AugId::bc1_N, unit_density(mesh, 7), c1N, d1N});
  return S;
}

// Traces of F+ and F- on Gamma from a solved density.
struct SurfaceTraces {
  Eigen::VectorXcd Fp, Fm; // frame components, density order
};

inline Eigen::VectorXcd interior_density(const AssembledSystem& S, const Eigen::VectorXcd& h) {
  const int N = int(S.mesh->size());
  Eigen::VectorXcd g = scaled(h, S.par.Np, N);
  if (S.cRN) g += (S.wn.sigma() / (S.wn.khat() * S.wn.khat())) * S.e8 * ((*S.cRN) * h)(0);
  return g;
}

inline Eigen::VectorXcd exterior_density(const AssembledSystem& S, const Eigen::VectorXcd& h) {
  const int N = int(S.mesh->size());
  Eigen::VectorXcd g = scaled(h, S.par.Pp, N);
  if (S.cRD) g += unit_density(*S.mesh, 5) * ((*S.cRD) * h)(0);
  return g;
}

inline SurfaceTraces surface_traces(const AssembledSystem& S, const OperatorSet& ops, const Eigen::VectorXcd& h) {
  SurfaceTraces t;
  Eigen::VectorXcd gp = interior_density(S, h), gm = exterior_density(S, h);
  t.Fp = 0.5 * (gp + ops.Ep * gp);
  t.Fm = -0.5 * (gm - ops.Em * gm);
  return t;
}

// Quasi-static limit: wavenumbers deep in the eddy-current regime with the
// tuning factor xi = 1. "Ainf" family: k+ -> 0 with |k+ khat| large;
// "B" family: k+ khat -> 0.
inline Wavenumbers quasistatic_wavenumbers(Formulation f) {
  const cdouble q(1.0, 1.0);
  if (variant_of(f) == Variant::B) return Wavenumbers(1e-45, 1e-30 * q, 0.0);
  return Wavenumbers(1e-40, 1e-5 * q, 0.0);
}

struct NullityReport {
  int nullity = 0;
  double gap = 0.0;           // s_{n-m-1} / s_{n-m} at the detected split
  double smallest_relative = 0.0; // s_min / s_max
  Eigen::VectorXd tail;       // the smallest singular values, relative to s_max
};

// Count trailing singular values separated by the largest relative gap
// (inspecting the last `window` values); a gap below `min_gap` means nullity 0.
inline NullityReport nullity_from_singular_values(const Eigen::VectorXd& s, int window = 6, double min_gap = 1e3) {
  NullityReport r;
  const int n = int(s.size());
  const double smax = s(0);
  r.smallest_relative = s(n - 1) / smax;
  int w = std::min(window, n - 1);
  r.tail = s.tail(w) / smax;
  double best = 0.0;
  int m = 0;
  for (int j = 1; j <= w; ++j) {
    double lo = std::max(s(n - j), 1e-300 * smax);
    double g = s(n - j - 1) / lo;
    if (g > best) {
      best = g;
      m = j;
    }
  }
  r.gap = best;
  r.nullity = best >= min_gap ? m : 0;
  return r;
}

} // namespace eddy
