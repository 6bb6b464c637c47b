#pragma once
// Problem setup shared by the command line tools and the acceptance runs:
// mesh + formulation + incident field -> solve, surface checks, volume
// fields and accuracy digits against a reference.

#include <cctype>
#include <chrono>
#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "field_eval.hpp"
#include "incident.hpp"
#include "mie.hpp"
#include "neumann.hpp"
#include "system.hpp"

namespace eddy {

// "1e-8", "1+1i", "1e-4-2i", "3i", "(1,1)"
inline cdouble parse_complex(const std::string& s0) {
  std::string s;
  for (char c : s0)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  static const std::regex pair(R"(^\(([^,]+),([^,]+)\)$)");
  static const std::regex cplx(R"(^([+-]?[0-9.]+(?:[eE][+-]?[0-9]+)?)([+-][0-9.]*(?:[eE][+-]?[0-9]+)?)[ij]$)");
  static const std::regex imag(R"(^([+-]?[0-9.]*(?:[eE][+-]?[0-9]+)?)[ij]$)");
  std::smatch m;
  auto num = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return std::stod(t);
  };
  if (std::regex_match(s, m, pair)) return {std::stod(m[1]), std::stod(m[2])};
  if (std::regex_match(s, m, cplx)) return {std::stod(m[1]), num(m[2])};
  if (std::regex_match(s, m, imag)) return {0.0, num(m[1])};
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("cannot parse complex number: " + s0);
  return {v, 0.0};
}

inline std::string format_complex(cdouble z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

// Default panel counts: desk-scale resolutions for the built-in geometries.
inline int default_panels(const std::string& geometry) {
  if (geometry == "sphere") return 8;
  if (geometry == "rotated-starfish" || geometry == "starfish") return 16;
  if (geometry == "starfish-torus" || geometry == "torus") return 20;
  return 16;
}

struct ProblemSpec {
  std::string geometry = "sphere";
  int panels = 0; // 0: default for the geometry
  int order = 16;
  Formulation form = Formulation::B_aug0;
  Wavenumbers wn{1e-4, cdouble(1.0, 1.0)};
  IncidentKind incident = IncidentKind::partial_wave;
  double chi = 1.0;
  int grid_n = 30;
  double half_width = 2.0;
  std::string reference = "overresolved"; // "overresolved", "mie" or "none"
  GmresOptions gmres;
};

struct SolveOutcome {
  std::shared_ptr<const PanelMesh> mesh;
  std::optional<OperatorSet> ops;
  std::optional<AssembledSystem> S;
  std::optional<WeightFunction> weight;
  VectorXcd f0;
  GmresResult gm;
  SurfaceTraces traces;
  JumpReport jumps;
  std::optional<ExcitationReport> excitation;
  double t_assemble = 0.0, t_solve = 0.0;
};

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline SolveOutcome solve_on_mesh(const ProblemSpec& spec, std::shared_ptr<const PanelMesh> mesh) {
  SolveOutcome o;
  o.mesh = mesh;
  auto t0 = std::chrono::steady_clock::now();
  std::optional<Eigen::VectorXd> w;
  if (mesh->genus() == 1) {
    o.weight = compute_weight(*mesh);
    w = o.weight->w;
  }
  o.ops = assemble_operators(mesh, spec.wn, spec.form == Formulation::B_aug1);
  SystemConfig cfg;
  cfg.form = spec.form;
  cfg.chi = spec.chi;
  cfg.gmres = spec.gmres;
  o.S = assemble_system(*o.ops, cfg, w);
  o.t_assemble = seconds_since(t0);
  IncidentField inc{spec.incident, spec.wn.k_minus};
  o.f0 = trace_f0(inc, *mesh);
  t0 = std::chrono::steady_clock::now();
  o.gm = o.S->solve(o.f0);
  o.t_solve = seconds_since(t0);
  o.traces = surface_traces(*o.S, *o.ops, o.gm.x);
  o.jumps = jump_checks(o.traces, o.f0, *mesh, spec.wn);
  if (o.weight) o.excitation = excitation_diagnostic(o.f0, *o.weight, *mesh, spec.wn);
  return o;
}

inline std::shared_ptr<const PanelMesh> make_mesh(const ProblemSpec& spec, bool over = false) {
  int np = spec.panels > 0 ? spec.panels : default_panels(spec.geometry);
  PanelMesh m = discretize(build_curve(spec.geometry), np, spec.order);
  if (over) m = overresolve(m);
  return std::make_shared<const PanelMesh>(std::move(m));
}

// Mie fields at the targets of a solution, and the boundary scales on the
// sphere evaluated at the nodes of a mesh.
inline FieldSolution mie_reference(const FieldSolution& sol, const MieCoefficients& mie) {
  FieldSolution ref = sol;
  for (FieldTarget& t : ref.targets) {
    if (!t.evaluated) continue;
    MieField m = mie_fields(mie, std::abs(t.x), t.z, t.info.region == Region::interior);
    t.E = mirror_vector(m.field.E, t.x);
    t.H = mirror_vector(m.field.H, t.x);
  }
  return ref;
}

inline BoundaryScales mie_scales(const MieCoefficients& mie, const PanelMesh& mesh) {
  BoundaryScales b;
  for (const Node& n : mesh.nodes) {
    double th = std::atan2(n.rho, n.z);
    auto [in, out] = mie_interface_fields(mie, th);
    MieField sc = mie_fields(mie, n.rho, n.z, false);
    b.Ep = std::max(b.Ep, in.E.norm());
    b.Hp = std::max(b.Hp, in.H.norm());
    b.Em_total = std::max(b.Em_total, out.E.norm());
    b.Hm_total = std::max(b.Hm_total, out.H.norm());
    b.Em = std::max(b.Em, sc.field.E.norm());
  }
  return b;
}

struct RunResult {
  ProblemSpec spec;
  int nodes = 0;
  int iterations = 0;
  double gmres_residual = 0.0;
  bool converged = false;
  std::optional<Digits> digits;
  JumpReport jumps;
  std::optional<ExcitationReport> excitation;
  double t_assemble = 0.0, t_solve = 0.0, t_fields = 0.0, t_reference = 0.0;
  double max_Ep = 0.0;           // max |E+| on Gamma
  double volume_helmholtz = 0.0; // max |F0|, |F3| over the grid / field scale
  std::vector<std::string> warnings;
  std::optional<FieldSolution> fields, reference_fields;
};

inline RunResult run_problem(const ProblemSpec& spec, bool keep_fields = false) {
  RunResult r;
  r.spec = spec;
  for (auto& w : spec.wn.regime_warnings()) r.warnings.push_back(w);
  auto mesh = make_mesh(spec);
  r.nodes = int(mesh->size());
  SolveOutcome o = solve_on_mesh(spec, mesh);
  for (auto& w : o.S->par.warnings) r.warnings.push_back(w);
  r.iterations = o.gm.iterations;
  r.gmres_residual = o.gm.true_residual;
  r.converged = o.gm.converged;
  if (!o.gm.converged) r.warnings.push_back("GMRES stagnated");
  r.jumps = o.jumps;
  r.excitation = o.excitation;
  r.t_assemble = o.t_assemble;
  r.t_solve = o.t_solve;
  BoundaryScales own = boundary_scales(o.traces, o.f0, spec.wn, int(mesh->size()));
  r.max_Ep = own.Ep;
  if (spec.reference == "none" && !keep_fields) return r;

  auto t0 = std::chrono::steady_clock::now();
  FieldSolution sol = evaluate_grid(*o.S, o.gm.x, spec.grid_n, spec.grid_n, spec.half_width);
  r.t_fields = seconds_since(t0);
  double vh = 0.0;
  for (const FieldTarget& t : sol.targets)
    if (t.evaluated) vh = std::max({vh, std::abs(t.F(0)), std::abs(t.F(7))});
  r.volume_helmholtz = vh / std::max(own.Em_total, own.Hm_total);
  o.ops.reset(); // release the dense operators before the reference solve
  o.S.reset();

  t0 = std::chrono::steady_clock::now();
  if (spec.reference == "mie") {
    if (spec.geometry != "sphere" || spec.incident != IncidentKind::partial_wave)
      throw std::invalid_argument("the Mie reference needs the sphere and the partial wave");
    MieCoefficients mie = mie_solve(spec.wn.k_minus, spec.wn.k_plus);
    FieldSolution ref = mie_reference(sol, mie);
    r.digits = accuracy_digits(sol, ref, mie_scales(mie, *mesh));
    if (keep_fields) r.reference_fields = std::move(ref);
  } else if (spec.reference == "overresolved") {
    auto fine = make_mesh(spec, true);
    SolveOutcome ro = solve_on_mesh(spec, fine);
    FieldSolution ref = evaluate_fields(*ro.S, ro.gm.x, [&] {
      std::vector<std::pair<double, double>> p;
      for (const FieldTarget& t : sol.targets) p.push_back({t.x, t.z});
      return p;
    }());
    ref.nx = sol.nx;
    ref.nz = sol.nz;
    BoundaryScales sc = boundary_scales(ro.traces, ro.f0, spec.wn, int(fine->size()));
    r.digits = accuracy_digits(sol, ref, sc);
    if (keep_fields) r.reference_fields = std::move(ref);
  }
  r.t_reference = seconds_since(t0);
  if (keep_fields) r.fields = std::move(sol);
  return r;
}

inline nlohmann::json to_json(const RunResult& r) {
  nlohmann::json j;
  j["geometry"] = r.spec.geometry;
  j["formulation"] = formulation_name(r.spec.form);
  j["incident"] = incident_name(r.spec.incident);
  j["k_minus"] = {r.spec.wn.k_minus.real(), r.spec.wn.k_minus.imag()};
  j["k_plus"] = {r.spec.wn.k_plus.real(), r.spec.wn.k_plus.imag()};
  j["delta"] = r.spec.wn.delta;
  j["chi"] = r.spec.chi;
  j["panels"] = r.spec.panels > 0 ? r.spec.panels : default_panels(r.spec.geometry);
  j["nodes"] = r.nodes;
  j["gmres_iterations"] = r.iterations;
  j["gmres_residual"] = r.gmres_residual;
  j["converged"] = r.converged;
  j["reference"] = r.spec.reference;
  j["grid"] = r.spec.grid_n;
  if (r.digits) {
    nlohmann::json d;
    for (int i = 0; i < 4; ++i) {
      if (r.digits->digits[i]) d[Digits::label(i)] = *r.digits->digits[i];
      else d[Digits::label(i)] = "n/a";
    }
    j["digits"] = d;
  }
  j["residuals"] = {{"tangential_E", r.jumps.tangential_E},
                    {"tangential_H", r.jumps.tangential_H},
                    {"normal_jump", r.jumps.normal_defined ? nlohmann::json(r.jumps.normal_jump) : nlohmann::json("n/a")},
                    {"flux_E_minus", r.jumps.flux_E_minus},
                    {"helmholtz_surface", r.jumps.helmholtz},
                    {"helmholtz_volume", r.volume_helmholtz}};
  if (r.excitation) j["excitation_ratio"] = r.excitation->ratio;
  j["wall_seconds"] = {{"assemble", r.t_assemble}, {"solve", r.t_solve}, {"fields", r.t_fields}, {"reference", r.t_reference}};
  j["warnings"] = r.warnings;
  return j;
}

// ---------------------------------------------------------------------------
// Conditioning study over k- at fixed k+

struct CondPoint {
  cdouble k_minus, k_plus;
  double cond_system = 0.0, cond_field_map = 0.0;
};

inline std::vector<CondPoint> cond_sweep(const std::string& geometry, int panels, Formulation form,
                                         const std::vector<double>& k_minus, cdouble k_plus) {
  auto mesh = std::make_shared<const PanelMesh>(discretize(build_curve(geometry), panels, 16));
  std::optional<Eigen::VectorXd> w;
  if (form == Formulation::B_aug1) w = compute_weight(*mesh).w;
  std::vector<CondPoint> out;
  for (double km : k_minus) {
    Wavenumbers wn(km, k_plus);
    OperatorSet ops = assemble_operators(mesh, wn, form == Formulation::B_aug1);
    SystemConfig cfg;
    cfg.form = form;
    AssembledSystem S = assemble_system(ops, cfg, w);
    CondPoint c{km, k_plus};
    c.cond_system = condition_number(S.A);
    c.cond_field_map = condition_number(field_map(S, ops));
    out.push_back(c);
  }
  return out;
}

inline std::vector<double> log_space(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = std::pow(10.0, std::log10(a) + (std::log10(b) - std::log10(a)) * (n > 1 ? double(i) / (n - 1) : 0.0));
  return v;
}

// ---------------------------------------------------------------------------
// Eigenfields on a grid, normalized so that max |H| = 1

inline EigenfieldGrid eigenfield_grid(const PanelMesh& mesh, const std::string& kind, int n, double half_width,
                                      const WeightFunction* W = nullptr) {
  EigenfieldGrid G;
  G.kind = kind;
  G.nx = G.nz = n;
  auto pts = grid_points(-half_width, half_width, -half_width, half_width, n, n);
  std::optional<EddyEigenfield> eddy;
  std::optional<PecEigenfield> pec;
  if (kind == "ordinary") eddy.emplace(mesh);
  else if (kind == "superconductor") {
    if (!W) throw std::invalid_argument("superconductor eigenfield needs the weight computation");
    pec.emplace(mesh, *W);
  } else throw std::invalid_argument("unknown eigenfield kind: " + kind);
  double hmax = 0.0;
  for (auto [x, z] : pts) {
    EigenfieldPoint p;
    p.x = x;
    p.z = z;
    double rho = std::abs(x);
    RegionInfo info = classify_point(mesh, rho, z);
    p.region = info.region;
    if (info.region == Region::boundary || rho == 0.0) {
      // on Gamma or on the axis (H is regular there; take the limit from rho > 0)
      if (info.region == Region::boundary) {
        p.H_rho = p.H_z = std::numeric_limits<double>::quiet_NaN();
        G.points.push_back(p);
        continue;
      }
    }
    double r = std::max(rho, 1e-9);
    Vec2 H = eddy ? eddy->H(r, z, info.region) : pec->H(r, z, info.region);
    // x < 0 is the half-plane phi = pi: H_x = -H_rho, J_y = -J_theta
    double sgn = x < 0.0 ? -1.0 : 1.0;
    p.H_rho = sgn * H[0];
    p.H_z = H[1];
    p.J_theta = eddy ? sgn * eddy->J(r, info.region) : 0.0;
    hmax = std::max(hmax, std::hypot(H[0], H[1]));
    G.points.push_back(p);
  }
  G.scale = 1.0 / hmax;
  for (auto& p : G.points) {
    p.H_rho *= G.scale;
    p.H_z *= G.scale;
    p.J_theta *= G.scale;
    if (std::isfinite(p.J_theta)) {
      G.max_J = std::max(G.max_J, std::abs(p.J_theta));
      if (p.region == Region::interior) G.max_interior_J = std::max(G.max_interior_J, std::abs(p.J_theta));
    }
  }
  return G;
}

} // namespace eddy
