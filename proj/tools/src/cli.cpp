#include "r4bp_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "r4bp/equilibria.hpp"
#include "r4bp/errors.hpp"
#include "r4bp/linstab.hpp"
#include "r4bp/manifolds.hpp"
#include "r4bp/normal_form.hpp"
#include "r4bp_cli/writers.hpp"

namespace r4bp::cli {
namespace {

const CLI::Validator kMassRange(
    [](std::string& s) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(s);
      } catch (...) {
        return "not a number: " + s;
      }
      if (!(v > 0.0 && v <= 1.0 / 3.0)) return "mu must lie in (0, 1/3]";
      return {};
    },
    "in (0, 1/3]", "MassRange");

const CLI::Validator kPositive(
    [](std::string& s) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(s);
      } catch (...) {
        return "not a number: " + s;
      }
      if (!(v > 0.0)) return "must be positive";
      return {};
    },
    "> 0", "Positive");

struct IntegrationOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-12;
  double max_time = 200.0;
  double proximity = 1e-3;
  double escape = 10.0;

  void add(CLI::App* app) {
    app->add_option("--rtol", rel_tol, "relative tolerance")->check(kPositive)->capture_default_str();
    app->add_option("--atol", abs_tol, "absolute tolerance")->check(kPositive)->capture_default_str();
    app->add_option("--max-time", max_time, "time bound per branch")->check(kPositive)->capture_default_str();
    app->add_option("--proximity", proximity, "minimal distance to a primary")->check(kPositive)->capture_default_str();
    app->add_option("--escape", escape, "escape radius")->check(kPositive)->capture_default_str();
  }
  IntegrationSettings settings() const {
    IntegrationSettings s;
    s.rel_tol = rel_tol;
    s.abs_tol = abs_tol;
    s.max_time = max_time;
    s.proximity_floor = proximity;
    s.escape_radius = escape;
    return s;
  }
};

void emit(const json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

std::vector<std::pair<double, double>> as_pairs(const std::vector<Vec2>& v) {
  std::vector<std::pair<double, double>> out;
  out.reserve(v.size());
  for (const auto& p : v) out.emplace_back(p.x, p.y);
  return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

// equilibria

struct EquilibriaOptions {
  double mu = 0.019;
  std::string format = "json";
  std::string out;
};

int cmd_equilibria(const EquilibriaOptions& o, std::ostream& out) {
  const SystemConfig cfg(o.mu);
  const auto eqs = find_all(cfg);
  if (o.format == "csv") {
    std::ostringstream s;
    s << "x,y,kind,jacobi\n";
    for (const auto& e : eqs) {
      s << fmt(e.position.x) << ',' << fmt(e.position.y) << ',' << to_string(e.kind) << ',' << fmt(e.jacobi_value) << '\n';
    }
    if (o.out.empty() || o.out == "-") {
      out << s.str();
    } else {
      write_file(o.out, s.str());
    }
    return kExitOk;
  }
  json list = json::array();
  for (const auto& e : eqs) list.push_back(to_json(e));
  const auto collinear = std::count_if(eqs.begin(), eqs.end(), [](const auto& e) { return e.kind == EquilibriumKind::Collinear; });
  emit({{"mu", o.mu}, {"count", eqs.size()}, {"collinear", collinear}, {"equilibria", list}}, o.out, out);
  return kExitOk;
}

// hill

struct HillOptions {
  double mu = 0.019;
  std::optional<double> jacobi;
  GridSpec grid;
  std::string csv;
  std::string svg;
  std::string out;
};

int cmd_hill(const HillOptions& o, std::ostream& out) {
  const SystemConfig cfg(o.mu);
  const double c = o.jacobi ? *o.jacobi : find_l2(cfg).jacobi_value;
  const HillRegionMap map = hill_regions(cfg, c, o.grid);

  if (!o.csv.empty()) {
    std::ostringstream s;
    s << "curve,closed,x,y\n";
    for (std::size_t k = 0; k < map.boundary.size(); ++k) {
      for (const auto& p : map.boundary[k].points) {
        s << k << ',' << (map.boundary[k].closed ? 1 : 0) << ',' << fmt(p.x) << ',' << fmt(p.y) << '\n';
      }
    }
    write_file(o.csv, s.str());
  }
  if (!o.svg.empty()) {
    SvgPlot plot(o.grid.x_min, o.grid.x_max, o.grid.y_min, o.grid.y_max);
    char title[96];
    std::snprintf(title, sizeof title, "zero-velocity curves, mu=%.6g, C=%.6g", o.mu, c);
    plot.title(title);
    plot.axis_labels("x", "y");
    for (const auto& line : map.boundary) {
      auto pts = as_pairs(line.points);
      if (line.closed && !pts.empty()) pts.push_back(pts.front());
      plot.polyline(pts, "#1f77b4");
    }
    std::vector<std::pair<double, double>> prim;
    for (const auto& p : cfg.primaries()) prim.emplace_back(p.position.x, p.position.y);
    plot.points(prim, "black", 4.0);
    write_file(o.svg, plot.str());
  }
  emit({{"mu", o.mu},
        {"jacobi", c},
        {"grid", {{"x_min", o.grid.x_min}, {"x_max", o.grid.x_max}, {"y_min", o.grid.y_min}, {"y_max", o.grid.y_max},
                  {"nx", o.grid.nx}, {"ny", o.grid.ny}}},
        {"forbidden_cells", map.forbidden_count()},
        {"allowed_components", map.components(true)},
        {"forbidden_components", map.components(false)},
        {"boundary_curves", map.boundary.size()}},
       o.out, out);
  return kExitOk;
}

// stability

struct StabilityOptions {
  double mu = 0.019;
  bool find_mu_b = false;
  double tol = 1e-10;
  std::string out;
};

int cmd_stability(const StabilityOptions& o, std::ostream& out) {
  if (o.find_mu_b) {
    const CriticalMass cm = find_mu_b(0.001, 0.01, o.tol);
    emit({{"mu_b", cm.mu_b}, {"omega", cm.omega}, {"a", cm.a}, {"b", cm.b}, {"discriminant", cm.discriminant},
          {"l2_x", cm.l2_x}, {"iterations", cm.iterations}},
         o.out, out);
    return kExitOk;
  }
  const SystemConfig cfg(o.mu);
  const EquilibriumPoint l2 = find_l2(cfg);
  json j = to_json(analyze(cfg, l2));
  j["mu"] = o.mu;
  j["l2"] = to_json(l2);
  emit(j, o.out, out);
  return kExitOk;
}

// normal-form

struct NormalFormOptions {
  std::optional<double> mu;
  std::string out;
  std::string golden_dir;
};

int cmd_normal_form(const NormalFormOptions& o, std::ostream& out) {
  const double mu = o.mu ? *o.mu : find_mu_b().mu_b;
  const NormalFormReport rep = normal_form_report(mu);
  const VersalParams nu = versal_params(rep.linear.a, rep.linear.b);
  json h = json::object();
  for (int i = 0; i < 9; ++i) h["h" + std::to_string(i + 1)] = rep.result.h[i];
  const LinearNFResiduals res = residuals(rep.basis);
  emit({{"mu", mu},
        {"l2", to_json(rep.l2)},
        {"a", rep.linear.a},
        {"b", rep.linear.b},
        {"omega", rep.basis.omega},
        {"eps_sign", rep.basis.eps_sign},
        {"N31", rep.basis.N31},
        {"Sigma", to_json(rep.basis.Sigma)},
        {"N", to_json(rep.basis.N)},
        {"P", to_json(rep.basis.P)},
        {"B", to_json(rep.basis.B)},
        {"residuals", {{"sum", res.sum}, {"nilpotent", res.nilpotent}, {"commutator", res.commutator},
                       {"symplectic", res.symplectic}, {"normal_form", res.normal_form}}},
        {"taylor", to_json(rep.taylor)},
        {"H01_zero", rep.result.H01.is_zero()},
        {"h", h},
        {"H02", rep.result.H02.pretty()},
        {"nu", {{"nu1", nu.nu1}, {"nu2", nu.nu2}}}},
       o.out, out);
  if (!o.golden_dir.empty()) {
    std::filesystem::create_directories(o.golden_dir);
    const std::filesystem::path d(o.golden_dir);
    write_file((d / "W1.txt").string(), rep.result.W1.serialize());
    write_file((d / "W2.txt").string(), rep.result.W2.serialize());
    write_file((d / "H02.txt").string(), rep.result.H02.serialize());
  }
  return kExitOk;
}

// versal

struct VersalOptions {
  double mu = 0.0027;
  std::optional<double> nu;
  std::optional<double> h1;
  double theta_momentum = 0.0;
  std::vector<double> levels{0.0};
  double r_max = 0.0;
  int samples = 400;
  std::string csv;
  std::string out;
};

int cmd_versal(const VersalOptions& o, std::ostream& out) {
  const SystemConfig cfg(o.mu);
  const LinearAnalysis la = analyze(cfg, find_l2(cfg));
  const VersalParams nu = versal_params(la.a, la.b);
  const double k = 1.0 + nu.nu1;
  json ev_formula = json::array(), ev_direct = json::array();
  for (auto z : versal_eigenvalues(nu)) ev_formula.push_back(to_json(z));
  for (auto z : la.eigenvalues) ev_direct.push_back(to_json(z));

  const double h1 = o.h1 ? *o.h1 : normal_form_report(find_mu_b().mu_b).result.h[0];
  const double nu_t = o.nu ? *o.nu : nu.nu2;
  const TruncatedSystem sys(nu_t, h1, o.theta_momentum);
  json eqs = json::array();
  for (const auto& p : sys.equilibria()) eqs.push_back({{"r", p.r}, {"R", p.R}, {"energy", sys.hamiltonian(p.r, p.R)}});

  if (!o.csv.empty()) {
    double r_max = o.r_max;
    if (!(r_max > 0.0)) r_max = nu_t < 0.0 ? 1.5 * std::sqrt(-nu_t / (2.0 * h1)) : 1.0;
    std::ostringstream s;
    s << "energy,curve,r,R\n";
    for (double e : o.levels) {
      const auto curves = sys.level_set(e, r_max, o.samples);
      for (std::size_t c = 0; c < curves.size(); ++c) {
        for (const auto& p : curves[c]) s << fmt(e) << ',' << c << ',' << fmt(p.r) << ',' << fmt(p.R) << '\n';
      }
    }
    write_file(o.csv, s.str());
  }

  emit({{"mu", o.mu},
        {"a", la.a},
        {"b", la.b},
        {"nu1", nu.nu1},
        {"nu2", nu.nu2},
        {"consistency", k * k - (1.0 - 0.5 * (la.a + la.b) - nu.nu2)},
        {"charpoly", {{"c2_mu", 2.0 - la.a - la.b}, {"c2_nu", 2.0 * (k * k + nu.nu2)},
                      {"c0_mu", la.a + la.b + la.a * la.b + 1.0}, {"c0_nu", (k * k - nu.nu2) * (k * k - nu.nu2)}}},
        {"eigenvalues_formula", ev_formula},
        {"eigenvalues_direct", ev_direct},
        {"truncated", {{"nu", nu_t}, {"h1", h1}, {"Theta", o.theta_momentum}, {"equilibria", eqs},
                       {"topology", to_string(sys.classify())}}}},
       o.out, out);
  return kExitOk;
}

// manifold / homoclinic

struct ManifoldOptions {
  double mu = 0.019;
  int branches = 512;
  int cuts = 5;
  double eps = 1e-5;
  double exclusion = 10.0;
  unsigned threads = 0;
  bool stable = false;
  bool mirror = false;
  bool all_cuts = false;
  IntegrationOptions integration;
  std::string csv;
  std::string svg;
  std::string out;

  ManifoldSettings settings() const {
    ManifoldSettings s;
    s.eps_ic = eps;
    s.exclusion_factor = exclusion;
    s.n_cuts = cuts;
    s.threads = threads;
    s.integration = integration.settings();
    return s;
  }
};

void add_manifold_options(CLI::App* app, ManifoldOptions& o) {
  app->add_option("--mu", o.mu, "mass parameter")->check(kMassRange)->capture_default_str();
  app->add_option("--branches", o.branches, "number of theta branches")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--cuts", o.cuts, "number of cuts")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--eps", o.eps, "initial displacement from L2")->check(kPositive)->capture_default_str();
  app->add_option("--exclusion", o.exclusion, "exclusion radius around L2 in units of eps")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--threads", o.threads, "worker threads (0: all cores)")->capture_default_str();
  o.integration.add(app);
}

int cmd_manifold(const ManifoldOptions& o, std::ostream& out) {
  const SystemConfig cfg(o.mu);
  const EigenFrame unstable = eigen_frame(cfg, find_l2(cfg));
  const EigenFrame frame = o.stable ? stable_frame(unstable) : unstable;
  const auto grid = uniform_theta_grid(o.branches);
  const Globalization g = globalize(cfg, frame, grid, o.settings());
  std::vector<ManifoldCut> cuts = g.cuts;
  if (o.mirror) {
    const auto mirrored = stable_from_unstable(g.cuts);
    cuts.insert(cuts.end(), mirrored.begin(), mirrored.end());
  }

  if (!o.csv.empty()) {
    std::ostringstream s;
    s << "theta,cut_index,x,xdot,direction,status,manifold\n";
    for (const auto& c : cuts) {
      for (const auto& p : c.points) {
        s << fmt(p.theta) << ',' << c.index << ',' << fmt(p.x) << ',' << fmt(p.xdot) << ',' << p.direction << ','
          << to_string(g.branches[p.theta_index].status) << ',' << to_string(c.kind) << '\n';
      }
    }
    write_file(o.csv, s.str());
  }
  if (!o.svg.empty()) {
    std::vector<std::pair<double, double>> all;
    for (const auto& c : cuts)
      for (const auto& p : c.points) all.emplace_back(p.x, p.xdot);
    const Bounds b = bounds_of(all);
    SvgPlot plot(b.xmin, b.xmax, b.ymin, b.ymax);
    char title[96];
    std::snprintf(title, sizeof title, "cuts of W%s on y=0, mu=%.6g", o.stable ? "s" : "u", o.mu);
    plot.title(title);
    plot.axis_labels("x", "xdot");
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& p : cuts[k].points) pts.emplace_back(p.x, p.xdot);
      plot.points(pts, kPalette[(cuts[k].index - 1) % 8], cuts[k].kind == ManifoldKind::Unstable ? 1.5 : 1.0);
    }
    write_file(o.svg, plot.str());
  }

  json status = json::object();
  for (const auto& b : g.branches) status[to_string(b.status)] = status.value(to_string(b.status), 0) + 1;
  json counts = json::array();
  for (const auto& c : cuts) counts.push_back({{"cut", c.index}, {"manifold", to_string(c.kind)}, {"points", c.points.size()}});
  emit({{"mu", o.mu}, {"eps_ic", o.eps}, {"branches", o.branches}, {"exclusion_radius", o.settings().exclusion_radius()},
        {"alpha", unstable.alpha}, {"omega", unstable.omega}, {"branch_status", status}, {"cuts", counts}},
       o.out, out);
  return kExitOk;
}

int cmd_homoclinic(const ManifoldOptions& o, std::ostream& out) {
  const SystemConfig cfg(o.mu);
  const EigenFrame frame = eigen_frame(cfg, find_l2(cfg));
  const auto grid = uniform_theta_grid(o.branches);
  const ManifoldSettings settings = o.settings();
  const Globalization g = globalize(cfg, frame, grid, settings);

  json cand = json::array(), fragile = json::array();
  for (const auto& c : g.cuts) {
    if (!o.all_cuts && c.index != o.cuts) continue;
    const OrthogonalSearch s = find_orthogonal_crossings(cfg, frame, c, o.branches, settings);
    for (const auto& k : s.candidates) cand.push_back(to_json(k));
    for (const auto& f : s.fragile) {
      fragile.push_back({{"cut_index", f.cut_index}, {"theta_lo", f.theta_lo}, {"theta_hi", f.theta_hi}, {"reason", f.reason}});
    }
  }
  emit({{"mu", o.mu}, {"eps_ic", o.eps}, {"branches", o.branches}, {"cut", o.cuts}, {"all_cuts", o.all_cuts},
        {"candidates", cand}, {"fragile_brackets", fragile}},
       o.out, out);
  return kExitOk;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CLI::ValidationError("--config", "cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

std::vector<std::string> config_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--config", "line " + std::to_string(lineno) + " is not key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw CLI::ValidationError("--config", "line " + std::to_string(lineno) + " has no key");
    if (value == "false") continue;
    out.push_back("--" + key);
    if (value != "true") out.push_back(value);
  }
  return out;
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Restricted four-body problem: equilibria, stability at L2, normal form and manifolds of L2"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key=value file mirroring the flags; flags on the command line win");

  EquilibriaOptions eq;
  auto* c_eq = app.add_subcommand("equilibria", "all equilibria of the synodic flow (JSON or CSV)");
  c_eq->add_option("--mu", eq.mu, "mass parameter")->check(kMassRange)->capture_default_str();
  c_eq->add_option("--format", eq.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  c_eq->add_option("--out", eq.out, "output file (default stdout)");

  HillOptions hill;
  auto* c_hill = app.add_subcommand("hill", "Hill region classification and zero-velocity curves");
  c_hill->add_option("--mu", hill.mu, "mass parameter")->check(kMassRange)->capture_default_str();
  c_hill->add_option("--jacobi", hill.jacobi, "Jacobi constant (default: the value at L2)");
  c_hill->add_option("--xmin", hill.grid.x_min)->capture_default_str();
  c_hill->add_option("--xmax", hill.grid.x_max)->capture_default_str();
  c_hill->add_option("--ymin", hill.grid.y_min)->capture_default_str();
  c_hill->add_option("--ymax", hill.grid.y_max)->capture_default_str();
  c_hill->add_option("--nx", hill.grid.nx, "cells along x")->check(CLI::PositiveNumber)->capture_default_str();
  c_hill->add_option("--ny", hill.grid.ny, "cells along y")->check(CLI::PositiveNumber)->capture_default_str();
  c_hill->add_option("--csv", hill.csv, "contour CSV path");
  c_hill->add_option("--svg", hill.svg, "contour SVG path");
  c_hill->add_option("--out", hill.out, "summary JSON path (default stdout)");

  StabilityOptions st;
  auto* c_st = app.add_subcommand("stability", "linear analysis at L2, or the critical mass with --find-mu-b");
  c_st->add_option("--mu", st.mu, "mass parameter")->check(kMassRange)->capture_default_str();
  c_st->add_flag("--find-mu-b", st.find_mu_b, "locate the 1:1 resonance mass mu_b");
  c_st->add_option("--tol", st.tol, "bracket width for --find-mu-b")->check(kPositive)->capture_default_str();
  c_st->add_option("--out", st.out, "output file (default stdout)");

  NormalFormOptions nfo;
  auto* c_nf = app.add_subcommand("normal-form", "Burgoyne basis and second-order normal form at L2");
  c_nf->add_option("--mu", nfo.mu, "mass parameter (default: mu_b)")->check(kMassRange);
  c_nf->add_option("--out", nfo.out, "report JSON path (default stdout)");
  c_nf->add_option("--golden-dir", nfo.golden_dir, "directory for the serialized W1, W2 and H02");

  VersalOptions vo;
  auto* c_v = app.add_subcommand("versal", "versal deformation parameters and the truncated system");
  c_v->add_option("--mu", vo.mu, "mass parameter")->check(kMassRange)->capture_default_str();
  c_v->add_option("--nu", vo.nu, "detuning for the truncated system (default: nu2 at mu)");
  c_v->add_option("--h1", vo.h1, "quartic coefficient (default: h1 of the normal form at mu_b)")->check(kPositive);
  c_v->add_option("--Theta", vo.theta_momentum, "angular momentum Theta")->capture_default_str();
  c_v->add_option("--levels", vo.levels, "energies of the sampled level sets")->delimiter(',');
  c_v->add_option("--r-max", vo.r_max, "largest r sampled");
  c_v->add_option("--samples", vo.samples, "samples per level set")->check(CLI::Range(2, 1000000))->capture_default_str();
  c_v->add_option("--csv", vo.csv, "level-set CSV path");
  c_v->add_option("--out", vo.out, "report JSON path (default stdout)");

  ManifoldOptions mo;
  auto* c_m = app.add_subcommand("manifold", "Poincare cuts of the unstable (or stable) manifold of L2 on y=0");
  add_manifold_options(c_m, mo);
  c_m->add_flag("--stable", mo.stable, "integrate W^s backward from the stable frame");
  c_m->add_flag("--mirror", mo.mirror, "also emit W^s cuts obtained by the reversing symmetry");
  c_m->add_option("--csv", mo.csv, "cut CSV path");
  c_m->add_option("--svg", mo.svg, "cut SVG path");
  c_m->add_option("--out", mo.out, "summary JSON path (default stdout)");

  ManifoldOptions ho;
  auto* c_h = app.add_subcommand("homoclinic", "orthogonal crossings (symmetric homoclinic orbits) at a cut");
  add_manifold_options(c_h, ho);
  c_h->add_flag("--all-cuts", ho.all_cuts, "search every cut up to --cuts");
  c_h->add_option("--out", ho.out, "candidates JSON path (default stdout)");

  std::vector<std::string> args;
  try {
    std::optional<std::string> cfg_file;
    for (std::size_t i = 0; i < args_in.size(); ++i) {
      const std::string& a = args_in[i];
      if (a == "--config") {
        if (i + 1 >= args_in.size()) throw CLI::ArgumentMismatch("--config needs a path");
        cfg_file = args_in[++i];
      } else if (a.rfind("--config=", 0) == 0) {
        cfg_file = a.substr(9);
      } else {
        args.push_back(a);
      }
    }
    if (cfg_file) {
      const auto tokens = config_tokens(read_text(*cfg_file));
      const auto sub = std::find_if(args.begin(), args.end(), [](const auto& a) { return !a.empty() && a[0] != '-'; });
      const auto pos = sub == args.end() ? args.end() : sub + 1;
      args.insert(pos, tokens.begin(), tokens.end());
    }
    std::vector<const char*> argv{"r4bp"};
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_eq->parsed()) return cmd_equilibria(eq, out);
    if (c_hill->parsed()) return cmd_hill(hill, out);
    if (c_st->parsed()) return cmd_stability(st, out);
    if (c_nf->parsed()) return cmd_normal_form(nfo, out);
    if (c_v->parsed()) return cmd_versal(vo, out);
    if (c_m->parsed()) return cmd_manifold(mo, out);
    if (c_h->parsed()) return cmd_homoclinic(ho, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace r4bp::cli
