// eddy: command line driver for the axisymmetric eddy-current solver.
//
//   eddy solve       --config run.cfg [overrides]
//   eddy sweep       sphere sweep against the Mie series
//   eddy cond        condition numbers over k- at fixed k+
//   eddy weight      torus weight function diagnostics
//   eddy eigenfield  Neumann eigenfields on a grid
//   eddy mie-compare sphere solve against the Mie series
//
// Outputs go below $EDDY_OUTPUT_ROOT (default ./out).

#include <algorithm>
#include <cmath>
#include <future>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eddy/experiments.hpp"
#include "eddy/io.hpp"

using namespace eddy;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kDeskNote = "# desk-scale run: accuracy targets are >= 6 digits";

// key = value config, then explicit flags on top
struct Settings {
  std::string config_file;
  std::map<std::string, std::string> flags;
  io::Config cfg;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>("--" + key, [this, key](const std::string& v) { flags[key] = v; }, help);
  }
  void resolve() {
    if (!config_file.empty()) cfg = io::Config::load(config_file);
    for (auto& [k, v] : flags) cfg.set(k, v);
  }
};

void add_problem_options(CLI::App* app, Settings& s) {
  app->add_option("--config", s.config_file, "key = value configuration file")->check(CLI::ExistingFile);
  s.add(app, "geometry", "sphere | rotated-starfish | torus");
  s.add(app, "formulation", "A | Ainf | Ainf-aug | B | B-aug0 | B-aug1");
  s.add(app, "k_minus", "exterior wavenumber, e.g. 1e-8");
  s.add(app, "k_plus", "interior wavenumber, e.g. 1+1i");
  s.add(app, "delta", "parameter delta (default 0.2/pi)");
  s.add(app, "incident", "partial-wave | zcoil");
  s.add(app, "panels", "number of panels (0: geometry default)");
  s.add(app, "order", "nodes per panel");
  s.add(app, "chi", "augmentation constant");
  s.add(app, "grid", "grid points per direction");
  s.add(app, "half_width", "grid covers [-w, w]^2");
  s.add(app, "reference", "overresolved | mie | none");
  s.add(app, "gmres_tol", "GMRES relative tolerance");
  s.add(app, "gmres_max_iter", "GMRES iteration cap");
  s.add(app, "name", "output subdirectory");
}

ProblemSpec spec_from(const io::Config& c) {
  ProblemSpec p;
  p.geometry = c.get("geometry", std::string("sphere"));
  p.form = parse_formulation(c.get("formulation", std::string("B-aug0")));
  cdouble km = parse_complex(c.get("k_minus", std::string("1e-4")));
  cdouble kp = parse_complex(c.get("k_plus", std::string("1+1i")));
  p.wn = c.has("delta") ? Wavenumbers(km, kp, c.get("delta", 0.0)) : Wavenumbers(km, kp);
  p.incident = parse_incident(c.get("incident", std::string("partial-wave")));
  p.panels = c.get("panels", 0);
  p.order = c.get("order", 16);
  p.chi = c.get("chi", 1.0);
  p.grid_n = c.get("grid", 30);
  p.half_width = c.get("half_width", 2.0);
  p.reference = c.get("reference", std::string(p.geometry == "sphere" ? "mie" : "overresolved"));
  p.gmres.tol = c.get("gmres_tol", p.gmres.tol);
  p.gmres.max_iter = c.get("gmres_max_iter", p.gmres.max_iter);
  return p;
}

fs::path runs_log() { return io::output_root() / "runs.jsonl"; }

void write_field_outputs(const fs::path& dir, const RunResult& r) {
  const FieldSolution& f = *r.fields;
  io::CsvWriter csv(dir / "fields.csv", {"x", "z", "region", "re_Ex", "im_Ex", "re_Ey", "im_Ey", "re_Ez", "im_Ez", "re_Hx",
                                         "im_Hx", "re_Hy", "im_Hy", "re_Hz", "im_Hz", "abs_err_E", "abs_err_H"});
  std::vector<double> logE, logH, errE;
  for (std::size_t i = 0; i < f.targets.size(); ++i) {
    const FieldTarget& t = f.targets[i];
    double eE = std::nan(""), eH = std::nan("");
    if (r.reference_fields && t.evaluated) {
      const FieldTarget& q = r.reference_fields->targets[i];
      eE = (t.E - q.E).norm();
      eH = (t.H - q.H).norm();
    }
    csv.write(t.x, t.z, region_name(t.info.region), t.E(0).real(), t.E(0).imag(), t.E(1).real(), t.E(1).imag(),
              t.E(2).real(), t.E(2).imag(), t.H(0).real(), t.H(0).imag(), t.H(1).real(), t.H(1).imag(), t.H(2).real(),
              t.H(2).imag(), eE, eH);
    logE.push_back(t.evaluated ? std::log10(t.E.norm() + 1e-300) : std::nan(""));
    logH.push_back(t.evaluated ? std::log10(t.H.norm() + 1e-300) : std::nan(""));
    errE.push_back(std::log10(eE + 1e-300));
  }
  auto range = [](const std::vector<double>& v) {
    double lo = INFINITY, hi = -INFINITY;
    for (double x : v)
      if (std::isfinite(x)) lo = std::min(lo, x), hi = std::max(hi, x);
    if (!(hi > lo)) hi = lo + 1.0;
    return std::pair{lo, hi};
  };
  auto [a, b] = range(logE);
  io::write_ppm(dir / "log10_absE.ppm", logE, f.nx, f.nz, a, b);
  auto [c, d] = range(logH);
  io::write_ppm(dir / "log10_absH.ppm", logH, f.nx, f.nz, c, d);
  if (r.reference_fields) io::write_pgm(dir / "log10_errE.pgm", errE, f.nx, f.nz, -16.0, 0.0);
}

void print_result(const RunResult& r) {
  std::cout << kDeskNote << "\n";
  std::cout << to_json(r).dump(2) << "\n";
}

int cmd_solve(Settings& s) {
  s.resolve();
  ProblemSpec p = spec_from(s.cfg);
  RunResult r = run_problem(p, true);
  fs::path dir = io::output_dir(s.cfg.get("name", std::string("solve")));
  write_field_outputs(dir, r);
  io::append_record(runs_log(), to_json(r));
  print_result(r);
  return r.converged ? 0 : 2;
}

int cmd_mie_compare(Settings& s) {
  s.resolve();
  s.cfg.set("geometry", "sphere");
  s.cfg.set("reference", "mie");
  s.cfg.set("incident", "partial-wave");
  ProblemSpec p = spec_from(s.cfg);
  MieCoefficients m = mie_solve(p.wn.k_minus, p.wn.k_plus);
  double res = 0.0, scale = 0.0;
  for (int i = 0; i < 64; ++i) {
    double t = std::numbers::pi * (i + 0.5) / 64.0;
    auto [in, out] = mie_interface_fields(m, t);
    CVec3 r(std::sin(t), 0.0, std::cos(t));
    res = std::max({res, r.cross(in.E - out.E).norm(), r.cross(in.H - out.H).norm()});
    scale = std::max({scale, in.E.norm(), out.E.norm(), in.H.norm(), out.H.norm()});
  }
  std::cout << "Mie coefficients: aM=" << format_complex(m.aM) << " aN=" << format_complex(m.aN)
            << " tM=" << format_complex(m.tM) << " tN=" << format_complex(m.tN) << "\n";
  std::cout << "interface residual (tangential, relative): " << res / scale << "\n";
  RunResult r = run_problem(p, true);
  fs::path dir = io::output_dir(s.cfg.get("name", std::string("mie-compare")));
  write_field_outputs(dir, r);
  json rec = to_json(r);
  rec["mie_interface_residual"] = res / scale;
  io::append_record(runs_log(), rec);
  print_result(r);
  return 0;
}

struct SweepPoint {
  double k_minus, abs_k_plus;
  bool in_regime;
};

std::vector<SweepPoint> sweep_grid(int n_minus, int n_plus) {
  std::vector<SweepPoint> pts;
  for (double km : log_space(1e-10, 1e-1, n_minus))
    for (double kp : log_space(1e-2, 50.0, n_plus)) pts.push_back({km, kp, km < 0.1 * kp});
  return pts;
}

int cmd_sweep(Settings& s, bool deterministic, int n_minus, int n_plus) {
  s.resolve();
  if (!s.cfg.has("geometry")) s.cfg.set("geometry", "sphere");
  ProblemSpec base = spec_from(s.cfg);
  auto pts = sweep_grid(n_minus, n_plus);
  if (pts.size() > 12) std::cerr << "warning: " << pts.size() << " sweep points (coarse sweeps use at most 12)\n";

  struct Row {
    SweepPoint pt;
    std::optional<RunResult> r;
    std::string error;
  };
  auto run_one = [&](const SweepPoint& pt) {
    Row row{pt, std::nullopt, ""};
    if (!pt.in_regime) {
      row.error = "outside 0 < k- << |k+|";
      return row;
    }
    try {
      ProblemSpec p = base;
      cdouble kp = std::polar(pt.abs_k_plus, std::numbers::pi / 4.0);
      p.wn = Wavenumbers(pt.k_minus, kp, base.wn.delta);
      row.r = run_problem(p);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    return row;
  };

  std::vector<Row> rows;
  if (deterministic) {
    for (auto& pt : pts) rows.push_back(run_one(pt));
  } else {
    unsigned width = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t i0 = 0; i0 < pts.size(); i0 += width) {
      std::vector<std::future<Row>> fut;
      for (std::size_t i = i0; i < std::min(pts.size(), i0 + width); ++i)
        fut.push_back(std::async(std::launch::async, run_one, pts[i]));
      for (auto& f : fut) rows.push_back(f.get());
    }
  }

  fs::path dir = io::output_dir(s.cfg.get("name", std::string("sweep")));
  io::CsvWriter csv(dir / "sweep.csv", {"k_minus", "abs_k_plus", "arg_k_plus", "iterations", "digits_Ep", "digits_Em",
                                        "digits_Hp", "digits_Hm", "min_digits", "status"});
  std::cout << kDeskNote << "\n";
  std::cout << "k-L        |k+|L      X    Y(E+,E-,H+,H-)  minY\n";
  for (auto& row : rows) {
    std::array<std::string, 4> d{"", "", "", ""};
    std::string status = row.error.empty() ? "ok" : row.error;
    int X = -1, minY = -1;
    if (row.r) {
      X = row.r->iterations;
      if (row.r->digits) {
        for (int i = 0; i < 4; ++i)
          if (row.r->digits->digits[i]) d[i] = std::to_string(*row.r->digits->digits[i]);
        minY = row.r->digits->min_digits();
      }
      if (!row.r->converged) status = "stagnated";
      io::append_record(runs_log(), to_json(*row.r));
    }
    csv.write(row.pt.k_minus, row.pt.abs_k_plus, std::numbers::pi / 4.0, X, d[0], d[1], d[2], d[3], minY, status);
    std::printf("%-10.3g %-10.3g %-4d %3s %3s %3s %3s   %4d  %s\n", row.pt.k_minus, row.pt.abs_k_plus, X, d[0].c_str(),
                d[1].c_str(), d[2].c_str(), d[3].c_str(), minY, status.c_str());
  }
  return 0;
}

int cmd_cond(Settings& s, int npts, double km_lo, double km_hi) {
  s.resolve();
  std::string geo = s.cfg.get("geometry", std::string("torus"));
  int panels = s.cfg.get("panels", 10);
  cdouble kp = parse_complex(s.cfg.get("k_plus", std::string("1+1i")));
  auto kms = log_space(km_lo, km_hi, npts);
  fs::path dir = io::output_dir(s.cfg.get("name", std::string("cond")));
  io::CsvWriter csv(dir / "cond.csv", {"formulation", "k_minus", "cond_system", "cond_field_map"});
  for (Formulation f : {Formulation::Ainf_aug, Formulation::B_aug1}) {
    for (const CondPoint& c : cond_sweep(geo, panels, f, kms, kp)) {
      csv.write(formulation_name(f), c.k_minus.real(), c.cond_system, c.cond_field_map);
      std::printf("%-9s k-=%-9.3g cond(system)=%-11.4g cond(field map)=%.4g\n", formulation_name(f).c_str(),
                  c.k_minus.real(), c.cond_system, c.cond_field_map);
    }
  }
  return 0;
}

std::shared_ptr<const PanelMesh> genus1_mesh(const io::Config& c) {
  ProblemSpec p;
  p.geometry = c.get("geometry", std::string("torus"));
  p.panels = c.get("panels", 0);
  p.order = c.get("order", 16);
  auto mesh = make_mesh(p);
  if (mesh->genus() != 1) throw std::invalid_argument("Neumann eigenfields and weights need a genus-1 geometry");
  return mesh;
}

int cmd_weight(Settings& s) {
  s.resolve();
  auto mesh = genus1_mesh(s.cfg);
  WeightFunction W = compute_weight(*mesh);
  fs::path dir = io::output_dir(s.cfg.get("name", std::string("weight")));
  io::CsvWriter csv(dir / "weight.csv", {"s", "rho", "z", "w", "w_alt", "psi"});
  for (std::size_t i = 0; i < mesh->size(); ++i) {
    const Node& n = mesh->nodes[i];
    csv.write(n.s, n.rho, n.z, W.w(i), W.w_alt(i), W.psi(i));
  }
  json j = {{"nodes", mesh->size()},
            {"gmres_iterations", W.gmres_iterations},
            {"gmres_residual", W.gmres_residual},
            {"average", W.average},
            {"min_w", W.min_value},
            {"max_w", W.w.maxCoeff()},
            {"routes_deviation", W.routes_deviation},
            {"null_residual", W.null_residual},
            {"normal_residual", W.normal_residual},
            {"loop_radius", W.loop.a},
            {"loop_height", W.loop.b},
            {"circulation", W.circulation}};
  io::append_record(dir / "weight.jsonl", j);
  std::cout << j.dump(2) << "\n";
  return 0;
}

void write_eigen_panels(const fs::path& dir, const EigenfieldGrid& G) {
  io::CsvWriter csv(dir / ("eigen_" + G.kind + ".csv"), {"x", "z", "region", "J_theta", "H_rho", "H_z", "abs_H"});
  std::vector<double> J, Hr, Hz;
  for (const EigenfieldPoint& p : G.points) {
    double aH = std::hypot(p.H_rho, p.H_z);
    csv.write(p.x, p.z, region_name(p.region), p.J_theta, p.H_rho, p.H_z, aH);
    J.push_back(std::abs(p.J_theta));
    Hr.push_back(p.H_rho);
    Hz.push_back(p.H_z);
  }
  double jm = G.max_J > 0 ? G.max_J : 1.0;
  io::write_pgm(dir / (G.kind + "_absJ.pgm"), J, G.nx, G.nz, 0.0, jm);
  io::write_ppm(dir / (G.kind + "_Hrho.ppm"), Hr, G.nx, G.nz, -1.0, 1.0);
  io::write_ppm(dir / (G.kind + "_Hz.ppm"), Hz, G.nx, G.nz, -1.0, 1.0);
}

// Near-eigenfield regime of a finite-conductivity solve: z-coil on the torus
// at moderate k+, fields normalized so that max |H| = 1 on the grid.
EigenfieldGrid borderline_grid(const io::Config& c, int n, double hw) {
  ProblemSpec p;
  p.geometry = c.get("geometry", std::string("torus"));
  p.panels = c.get("panels", 0);
  p.form = Formulation::Ainf_aug;
  p.wn = Wavenumbers(1e-8, parse_complex(c.get("k_plus", std::string("10+10i"))));
  p.incident = IncidentKind::zcoil;
  p.reference = "none";
  p.grid_n = n;
  p.half_width = hw;
  RunResult r = run_problem(p, true);
  EigenfieldGrid G;
  G.kind = "borderline";
  G.nx = G.nz = n;
  double hmax = 0.0;
  for (const FieldTarget& t : r.fields->targets) {
    EigenfieldPoint q;
    q.x = t.x;
    q.z = t.z;
    q.region = t.info.region;
    if (!t.evaluated) {
      q.H_rho = q.H_z = std::nan("");
    } else {
      // eddy current ~ E_theta inside; real parts at phase 0
      q.J_theta = q.region == Region::interior ? t.E(1).real() : 0.0;
      q.H_rho = t.H(0).real();
      q.H_z = t.H(2).real();
      hmax = std::max(hmax, std::hypot(q.H_rho, q.H_z));
    }
    G.points.push_back(q);
  }
  double jmax = 0.0;
  for (auto& q : G.points) jmax = std::max(jmax, std::abs(q.J_theta));
  G.scale = 1.0 / hmax;
  for (auto& q : G.points) {
    q.H_rho *= G.scale;
    q.H_z *= G.scale;
    q.J_theta /= jmax > 0 ? jmax : 1.0;
  }
  G.max_J = 1.0;
  return G;
}

int cmd_eigenfield(Settings& s, bool borderline) {
  s.resolve();
  auto mesh = genus1_mesh(s.cfg);
  int n = s.cfg.get("grid", 60);
  double hw = s.cfg.get("half_width", 2.0);
  fs::path dir = io::output_dir(s.cfg.get("name", std::string("eigenfield")));
  WeightFunction W = compute_weight(*mesh);
  std::vector<EigenfieldGrid> grids;
  grids.push_back(eigenfield_grid(*mesh, "superconductor", n, hw, &W));
  grids.push_back(eigenfield_grid(*mesh, "ordinary", n, hw));
  if (borderline) grids.push_back(borderline_grid(s.cfg, n, hw));
  for (auto& G : grids) {
    write_eigen_panels(dir, G);
    double hm = 0.0;
    for (auto& p : G.points)
      if (std::isfinite(p.H_rho)) hm = std::max(hm, std::hypot(p.H_rho, p.H_z));
    std::printf("%-15s grid %dx%d  max|H| = %.6f  max|J| = %.4g\n", G.kind.c_str(), G.nx, G.nz, hm, G.max_J);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Axisymmetric eddy-current boundary integral solver"};
  app.require_subcommand(1);
  bool deterministic = false;
  app.add_flag("--deterministic", deterministic, "single-threaded, sequential execution");

  Settings s_solve, s_sweep, s_cond, s_weight, s_eig, s_mie;
  auto* solve = app.add_subcommand("solve", "solve one problem and evaluate the fields on a grid");
  add_problem_options(solve, s_solve);

  auto* sweep = app.add_subcommand("sweep", "digits and iterations over a (k-, |k+|) grid");
  add_problem_options(sweep, s_sweep);
  int n_minus = 4, n_plus = 3;
  sweep->add_option("--n-minus", n_minus, "log-uniform k- values in [1e-10, 1e-1]");
  sweep->add_option("--n-plus", n_plus, "log-uniform |k+| values in [1e-2, 50]");
  sweep->add_flag("--deterministic", deterministic, "single-threaded, sequential execution");

  auto* cond = app.add_subcommand("cond", "condition numbers of the system and the field map");
  add_problem_options(cond, s_cond);
  int cond_n = 6;
  double km_lo = 1e-12, km_hi = 1e-2;
  cond->add_option("--points", cond_n, "number of k- values");
  cond->add_option("--k-min", km_lo, "smallest k-");
  cond->add_option("--k-max", km_hi, "largest k-");

  auto* weight = app.add_subcommand("weight", "weight function on a genus-1 surface");
  add_problem_options(weight, s_weight);

  auto* eig = app.add_subcommand("eigenfield", "Neumann eigenfields on a grid (max |H| = 1)");
  add_problem_options(eig, s_eig);
  bool borderline = false;
  eig->add_flag("--borderline", borderline, "also emit a finite-conductivity z-coil solve");

  auto* mie = app.add_subcommand("mie-compare", "sphere solve against the Mie series");
  add_problem_options(mie, s_mie);

  CLI11_PARSE(app, argc, argv);
  if (deterministic) Eigen::setNbThreads(1);

  try {
    if (*solve) return cmd_solve(s_solve);
    if (*sweep) return cmd_sweep(s_sweep, deterministic, n_minus, n_plus);
    if (*cond) return cmd_cond(s_cond, cond_n, km_lo, km_hi);
    if (*weight) return cmd_weight(s_weight);
    if (*eig) return cmd_eigenfield(s_eig, borderline);
    if (*mie) return cmd_mie_compare(s_mie);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
