#include "r4bp/manifolds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include <Eigen/Eigenvalues>

#include "r4bp/errors.hpp"

namespace r4bp {

const char* to_string(ManifoldKind k) noexcept {
  return k == ManifoldKind::Unstable ? "unstable" : "stable";
}

Matrix4 synodic_jacobian(const SystemConfig& cfg, Vec2 p) {
  const auto d = potential_derivatives(cfg, p, 2);
  Matrix4 j;
  j << 0, 0, 1, 0,
       0, 0, 0, 1,
       1 + d(2, 0), d(1, 1), 0, 2,
       d(1, 1), 1 + d(0, 2), -2, 0;
  return j;
}

EigenFrame eigen_frame(const SystemConfig& cfg, const EquilibriumPoint& l2) {
  const LinearAnalysis lin = analyze(cfg, l2);
  if (lin.regime != StabilityRegime::ComplexQuadruple) {
    throw DomainError(std::string("eigen_frame: L2 has no complex quadruple (regime ") + to_string(lin.regime) + ")");
  }
  const Matrix4 jac = synodic_jacobian(cfg, l2.position);
  Eigen::EigenSolver<Matrix4> es(jac);
  int pick = -1;
  for (int k = 0; k < 4; ++k) {
    const auto ev = es.eigenvalues()(k);
    if (ev.real() > 0 && ev.imag() > 0) pick = k;
  }
  if (pick < 0) throw ConsistencyError("eigen_frame: no eigenvalue in the first quadrant");
  const std::complex<double> lambda = es.eigenvalues()(pick);
  Eigen::Vector4cd u = es.eigenvectors().col(pick);
  u /= u(0);

  // Components of the linear solution: B = (lambda^2 - Omega_xx) / (2 lambda) A.
  const std::complex<double> ratio = (lambda * lambda - lin.omega_xx) / (2.0 * lambda);
  if (std::abs(u(1) - ratio) > 1e-10 * (1.0 + std::abs(ratio))) {
    throw ConsistencyError("eigen_frame: eigenvector violates the A_i/B_i relation");
  }
  const double residual = (jac.cast<std::complex<double>>() * u - lambda * u).norm();
  if (residual > 1e-10 * u.norm()) throw ConsistencyError("eigen_frame: eigenpair residual too large");

  EigenFrame f;
  f.kind = ManifoldKind::Unstable;
  f.l2 = l2.position;
  f.alpha = lambda.real();
  f.omega = lambda.imag();
  f.eigenvector = u;
  f.v_bar = u.real().normalized();
  const Vector4 im = u.imag();
  f.w_bar = (im - im.dot(f.v_bar) * f.v_bar).normalized();
  return f;
}

EigenFrame stable_frame(const EigenFrame& unstable) {
  if (unstable.kind != ManifoldKind::Unstable) throw DomainError("stable_frame: expects an unstable frame");
  const Eigen::Vector4d r(1, -1, -1, 1);
  EigenFrame s = unstable;
  s.kind = ManifoldKind::Stable;
  s.v_bar = r.cwiseProduct(unstable.v_bar);
  s.w_bar = r.cwiseProduct(unstable.w_bar);
  s.eigenvector = r.cast<std::complex<double>>().cwiseProduct(unstable.eigenvector);
  return s;
}

State initial_conditions(const EigenFrame& frame, double eps_ic, double theta) {
  if (!(eps_ic > 0.0)) throw DomainError("initial_conditions: eps_ic must be positive");
  const Vector4 d = eps_ic * (std::cos(theta) * frame.v_bar + std::sin(theta) * frame.w_bar);
  return {frame.l2.x + d(0), frame.l2.y + d(1), d(2), d(3)};
}

std::vector<double> uniform_theta_grid(int n) {
  if (n < 1) throw DomainError("theta grid needs at least one point");
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = 2.0 * std::numbers::pi * k / n;
  return g;
}

void ManifoldSettings::validate(const SystemConfig& cfg) const {
  if (!(eps_ic > 0.0)) throw DomainError("eps_ic must be positive");
  if (!(exclusion_factor >= 0.0)) throw DomainError("exclusion factor must be nonnegative");
  if (n_cuts < 1) throw DomainError("n_cuts must be at least 1");
  integration.validate(cfg);
}

namespace {

CrossingScan scan_branch(const SystemConfig& cfg, const EigenFrame& frame, double theta, int n_cuts,
                         const ManifoldSettings& settings) {
  const State s0 = initial_conditions(frame, settings.eps_ic, theta);
  return scan_crossings(cfg, s0, settings.integration, n_cuts, ExclusionBall{frame.l2, settings.exclusion_radius()},
                        frame.direction());
}

}  // namespace

Globalization globalize(const SystemConfig& cfg, const EigenFrame& frame, const std::vector<double>& theta_grid,
                        const ManifoldSettings& settings) {
  if (theta_grid.empty()) throw DomainError("globalize: empty theta grid");
  settings.validate(cfg);

  std::vector<CrossingScan> scans(theta_grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < theta_grid.size(); k = next++) {
      scans[k] = scan_branch(cfg, frame, theta_grid[k], settings.n_cuts, settings);
    }
  };
  unsigned n_threads = settings.threads ? settings.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, theta_grid.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  Globalization out;
  out.cuts.resize(settings.n_cuts);
  for (int c = 0; c < settings.n_cuts; ++c) {
    out.cuts[c].kind = frame.kind;
    out.cuts[c].index = c + 1;
    out.cuts[c].mu = cfg.mu();
    out.cuts[c].eps_ic = settings.eps_ic;
    out.cuts[c].exclusion_radius = settings.exclusion_radius();
  }
  std::vector<std::size_t> order(theta_grid.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return theta_grid[a] < theta_grid[b]; });
  out.branches.resize(theta_grid.size());
  for (std::size_t k : order) {
    const CrossingScan& s = scans[k];
    out.branches[k] = {theta_grid[k], s.status, static_cast<int>(s.events.size()), s.end_time,
                       jacobi_constant(cfg, initial_conditions(frame, settings.eps_ic, theta_grid[k]))};
    for (const SectionEvent& ev : s.events) {
      out.cuts[ev.index - 1].points.push_back(
          {theta_grid[k], static_cast<int>(k), ev.state.x, ev.state.vx, ev.direction, ev.time, ev.state});
    }
  }
  return out;
}

std::vector<ManifoldCut> stable_from_unstable(const std::vector<ManifoldCut>& cuts) {
  std::vector<ManifoldCut> out = cuts;
  for (ManifoldCut& c : out) {
    c.kind = c.kind == ManifoldKind::Unstable ? ManifoldKind::Stable : ManifoldKind::Unstable;
    for (CutPoint& p : c.points) {
      p.xdot = -p.xdot;
      p.direction = -p.direction;
      p.time = -p.time;
      p.state = reflect_trajectory(p.state);
    }
  }
  return out;
}

std::optional<SectionEvent> cut_event(const SystemConfig& cfg, const EigenFrame& frame, double theta, int cut_index,
                                      const ManifoldSettings& settings) {
  CrossingScan s = scan_branch(cfg, frame, theta, cut_index, settings);
  if (static_cast<int>(s.events.size()) < cut_index) return std::nullopt;
  return s.events[cut_index - 1];
}

OrthogonalSearch find_orthogonal_crossings(const SystemConfig& cfg, const EigenFrame& frame, const ManifoldCut& cut,
                                           int grid_size, const ManifoldSettings& settings) {
  settings.validate(cfg);
  OrthogonalSearch out;
  const auto& pts = cut.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const CutPoint& p = pts[i];
    const CutPoint& q = pts[(i + 1) % pts.size()];
    if (pts.size() < 2 || (q.theta_index - p.theta_index + grid_size) % grid_size != 1) continue;
    if (!(p.xdot * q.xdot < 0.0)) continue;

    double lo = p.theta, hi = q.theta;
    if (hi <= lo) hi += 2.0 * std::numbers::pi;
    double g_lo = p.xdot;
    std::optional<SectionEvent> best;
    std::string failure;
    int evals = 0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) {
        failure = "sign change is a jump, not a root";
        break;
      }
      const auto ev = cut_event(cfg, frame, mid, cut.index, settings);
      ++evals;
      if (!ev) {
        failure = "branch lost before the cut during refinement";
        break;
      }
      if (std::abs(ev->state.vx) < kOrthogonalTolerance) {
        best = ev;
        best->time = ev->time;
        lo = hi = mid;
        break;
      }
      if ((ev->state.vx < 0.0) == (g_lo < 0.0)) {
        lo = mid;
        g_lo = ev->state.vx;
      } else {
        hi = mid;
      }
    }
    if (!best) {
      if (failure.empty()) failure = "refinement did not converge";
      out.fragile.push_back({cut.index, p.theta, q.theta, failure});
      continue;
    }
    const double theta_star = std::fmod(lo, 2.0 * std::numbers::pi);
    const bool duplicate = std::any_of(out.candidates.begin(), out.candidates.end(), [&](const auto& c) {
      return std::abs(c.theta_star - theta_star) < 1e-9 && std::abs(c.x_cross - best->state.x) < 1e-9;
    });
    if (!duplicate) out.candidates.push_back({theta_star, cut.index, best->state.x, best->time, best->state, evals});
  }
  return out;
}

}  // namespace r4bp
