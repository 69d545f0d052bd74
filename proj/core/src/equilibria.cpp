#include "r4bp/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "r4bp/errors.hpp"

namespace r4bp {

namespace {

constexpr double kMergeRadius = 1e-8;
constexpr double kCollinearY = 1e-9;

double omega_x_on_axis(const SystemConfig& cfg, double x) { return effective_gradient(cfg, {x, 0.0}).x; }

EquilibriumPoint make_point(const SystemConfig& cfg, Vec2 p) {
  const bool collinear = std::abs(p.y) < kCollinearY;
  if (collinear) p.y = 0.0;
  return {p, 2.0 * effective_potential(cfg, p), collinear ? EquilibriumKind::Collinear : EquilibriumKind::NonCollinear};
}

// Newton polish of a bracketed axis root.
double polish_axis_root(const SystemConfig& cfg, double x) {
  for (int it = 0; it < 5; ++it) {
    const auto d = potential_derivatives(cfg, {x, 0.0}, 2);
    const double f = x + d(1, 0);
    const double fp = 1.0 + d(2, 0);
    if (fp == 0.0) break;
    const double step = f / fp;
    x -= step;
    if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

// Damped Newton on grad Omega from a seed. Returns nullopt when it does not converge.
std::optional<Vec2> newton_equilibrium(const SystemConfig& cfg, Vec2 p) {
  auto grad_norm = [&](Vec2 q) {
    const Vec2 g = effective_gradient(cfg, q);
    return std::hypot(g.x, g.y);
  };
  try {
    double gn = grad_norm(p);
    for (int it = 0; it < 60; ++it) {
      if (gn < 1e-14) return p;
      const auto d = potential_derivatives(cfg, p, 2);
      const double gx = p.x + d(1, 0), gy = p.y + d(0, 1);
      const double hxx = 1.0 + d(2, 0), hxy = d(1, 1), hyy = 1.0 + d(0, 2);
      const double det = hxx * hyy - hxy * hxy;
      if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
      Vec2 step{(hyy * gx - hxy * gy) / det, (hxx * gy - hxy * gx) / det};
      const double len = std::hypot(step.x, step.y);
      if (len > 0.25) step = {step.x * 0.25 / len, step.y * 0.25 / len};
      double lambda = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 30; ++ls) {
        const Vec2 trial{p.x - lambda * step.x, p.y - lambda * step.y};
        if (nearest_primary(cfg, trial).distance > 1e-6) {
          const double gt = grad_norm(trial);
          if (gt < gn || gt < 1e-14) {
            p = trial;
            gn = gt;
            accepted = true;
            break;
          }
        }
        lambda *= 0.5;
      }
      if (!accepted) return gn < 1e-12 ? std::optional<Vec2>(p) : std::nullopt;
    }
    return gn < 1e-12 ? std::optional<Vec2>(p) : std::nullopt;
  } catch (const CollisionError&) {
    return std::nullopt;
  }
}

}  // namespace

const char* to_string(EquilibriumKind k) noexcept {
  return k == EquilibriumKind::Collinear ? "collinear" : "non-collinear";
}

std::vector<EquilibriumPoint> find_collinear(const SystemConfig& cfg, const CollinearSearch& search) {
  if (search.intervals < 2 || !(search.x_max > search.x_min)) throw DomainError("invalid collinear search grid");
  // Primaries lying on the axis are poles of Omega_x; intervals containing them are skipped.
  std::vector<double> poles;
  for (const auto& p : cfg.primaries()) {
    if (p.position.y == 0.0 && p.mass > 0.0) poles.push_back(p.position.x);
  }
  const double step = (search.x_max - search.x_min) / search.intervals;
  std::vector<EquilibriumPoint> out;
  double xa = search.x_min;
  double fa = omega_x_on_axis(cfg, xa);
  for (int k = 1; k <= search.intervals; ++k) {
    const double xb = search.x_min + k * step;
    const bool straddles_pole =
        std::any_of(poles.begin(), poles.end(), [&](double xp) { return xp >= xa - 1e-12 && xp <= xb + 1e-12; });
    if (straddles_pole) {
      // Restart the scan just past the pole.
      xa = xb;
      fa = nearest_primary(cfg, {xa, 0.0}).distance > cfg.collision_floor() ? omega_x_on_axis(cfg, xa) : 0.0;
      continue;
    }
    const double fb = omega_x_on_axis(cfg, xb);
    if (fa == 0.0) {
      out.push_back(make_point(cfg, {xa, 0.0}));
    } else if (fa * fb < 0.0) {
      std::uintmax_t iters = 200;
      auto f = [&](double x) { return omega_x_on_axis(cfg, x); };
      const auto [lo, hi] =
          boost::math::tools::toms748_solve(f, xa, xb, fa, fb, boost::math::tools::eps_tolerance<double>(52), iters);
      const double root = polish_axis_root(cfg, 0.5 * (lo + hi));
      out.push_back(make_point(cfg, {root, 0.0}));
    }
    xa = xb;
    fa = fb;
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.position.x < b.position.x; });
  return out;
}

EquilibriumPoint find_l2(const SystemConfig& cfg, const CollinearSearch& search) {
  const auto pts = find_collinear(cfg, search);
  if (pts.empty()) throw ConsistencyError("no collinear equilibrium found");
  return pts.front();
}

std::vector<EquilibriumPoint> find_all(const SystemConfig& cfg) {
  std::vector<Vec2> seeds;
  const double two_pi = 2.0 * std::numbers::pi;
  for (const auto& prim : cfg.primaries()) {
    for (int ir = 0; ir < 12; ++ir) {
      const double radius = 0.05 * std::pow(1.35, ir);  // 0.05 .. ~1.3
      for (int ia = 0; ia < 24; ++ia) {
        const double a = two_pi * (ia + 0.5 * (ir % 2)) / 24.0;
        seeds.push_back({prim.position.x + radius * std::cos(a), prim.position.y + radius * std::sin(a)});
      }
    }
  }
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      seeds.push_back({-2.0 + 4.0 * (i + 0.5) / 50.0, -2.0 + 4.0 * (j + 0.5) / 50.0});
    }
  }

  std::vector<Vec2> found;
  auto add_unique = [&](Vec2 p) {
    for (const auto& q : found) {
      if (std::hypot(p.x - q.x, p.y - q.y) < kMergeRadius) return;
    }
    found.push_back(p);
  };
  for (const auto& seed : seeds) {
    if (auto p = newton_equilibrium(cfg, seed)) {
      if (std::abs(p->y) < kCollinearY) p->y = 0.0;
      add_unique(*p);
      if (p->y != 0.0) add_unique({p->x, -p->y});
    }
  }

  std::vector<EquilibriumPoint> out;
  out.reserve(found.size());
  for (auto p : found) {
    if (p.y == 0.0) p.x = polish_axis_root(cfg, p.x);
    // Evaluate on the upper half so mirror pairs carry identical values.
    EquilibriumPoint e = make_point(cfg, {p.x, std::abs(p.y)});
    e.position.y = p.y;
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::pair(a.position.x, a.position.y) < std::pair(b.position.x, b.position.y);
  });
  return out;
}

std::size_t HillRegionMap::forbidden_count() const {
  return static_cast<std::size_t>(std::count(allowed.begin(), allowed.end(), std::uint8_t{0}));
}

int HillRegionMap::components(bool allowed_label) const {
  const int nx = grid.nx, ny = grid.ny;
  const std::uint8_t want = allowed_label ? 1 : 0;
  std::vector<int> label(allowed.size(), -1);
  std::vector<int> stack;
  int count = 0;
  for (int start = 0; start < nx * ny; ++start) {
    if (allowed[start] != want || label[start] >= 0) continue;
    label[start] = count;
    stack.push_back(start);
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      const int i = c % nx, j = c / nx;
      const int nbrs[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& nb : nbrs) {
        if (nb[0] < 0 || nb[0] >= nx || nb[1] < 0 || nb[1] >= ny) continue;
        const int n = nb[1] * nx + nb[0];
        if (allowed[n] == want && label[n] < 0) {
          label[n] = count;
          stack.push_back(n);
        }
      }
    }
    ++count;
  }
  return count;
}

namespace {

// Marching squares on the cell-center lattice of F = 2 Omega - C, with segments
// chained into polylines.
std::vector<Polyline> contour_lines(const GridSpec& g, const std::vector<double>& f) {
  const int nx = g.nx, ny = g.ny;
  auto value = [&](int i, int j) { return f[static_cast<std::size_t>(j) * nx + i]; };
  // Edge ids: horizontal edge (i,j)-(i+1,j) -> 2*(j*nx+i), vertical (i,j)-(i,j+1) -> 2*(j*nx+i)+1.
  auto edge_point = [&](long id) {
    const long base = id / 2;
    const int i = static_cast<int>(base % nx), j = static_cast<int>(base / nx);
    const Vec2 a = g.cell_center(i, j);
    const bool horizontal = id % 2 == 0;
    const double fa = value(i, j);
    const double fb = horizontal ? value(i + 1, j) : value(i, j + 1);
    const double s = fa / (fa - fb);
    return horizontal ? Vec2{a.x + s * g.dx(), a.y} : Vec2{a.x, a.y + s * g.dy()};
  };
  std::multimap<long, long> adjacency;
  auto add_segment = [&](long e1, long e2) {
    adjacency.emplace(e1, e2);
    adjacency.emplace(e2, e1);
  };
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double v0 = value(i, j), v1 = value(i + 1, j), v2 = value(i + 1, j + 1), v3 = value(i, j + 1);
      const int code = (v0 >= 0) | ((v1 >= 0) << 1) | ((v2 >= 0) << 2) | ((v3 >= 0) << 3);
      if (code == 0 || code == 15) continue;
      const long bottom = 2L * (static_cast<long>(j) * nx + i);
      const long top = 2L * (static_cast<long>(j + 1) * nx + i);
      const long left = 2L * (static_cast<long>(j) * nx + i) + 1;
      const long right = 2L * (static_cast<long>(j) * nx + i + 1) + 1;
      const double center = 0.25 * (v0 + v1 + v2 + v3);
      switch (code) {
        case 1: case 14: add_segment(left, bottom); break;
        case 2: case 13: add_segment(bottom, right); break;
        case 3: case 12: add_segment(left, right); break;
        case 4: case 11: add_segment(right, top); break;
        case 6: case 9: add_segment(bottom, top); break;
        case 7: case 8: add_segment(left, top); break;
        case 5:
          if (center >= 0) { add_segment(left, top); add_segment(bottom, right); }
          else { add_segment(left, bottom); add_segment(right, top); }
          break;
        case 10:
          if (center >= 0) { add_segment(left, bottom); add_segment(right, top); }
          else { add_segment(left, top); add_segment(bottom, right); }
          break;
        default: break;
      }
    }
  }

  std::vector<Polyline> lines;
  auto take_next = [&](long from) -> std::optional<long> {
    auto it = adjacency.find(from);
    if (it == adjacency.end()) return std::nullopt;
    const long to = it->second;
    adjacency.erase(it);
    auto range = adjacency.equal_range(to);
    for (auto r = range.first; r != range.second; ++r) {
      if (r->second == from) {
        adjacency.erase(r);
        break;
      }
    }
    return to;
  };
  while (!adjacency.empty()) {
    // Prefer open-chain endpoints (edges with a single neighbour) so chains are not split.
    long start = adjacency.begin()->first;
    for (auto it = adjacency.begin(); it != adjacency.end(); it = adjacency.upper_bound(it->first)) {
      if (adjacency.count(it->first) == 1) {
        start = it->first;
        break;
      }
    }
    std::vector<long> chain{start};
    while (auto nxt = take_next(chain.back())) chain.push_back(*nxt);
    Polyline pl;
    pl.closed = chain.size() > 2 && chain.front() == chain.back();
    if (pl.closed) chain.pop_back();
    for (long e : chain) pl.points.push_back(edge_point(e));
    lines.push_back(std::move(pl));
  }
  return lines;
}

}  // namespace

HillRegionMap hill_regions(const SystemConfig& cfg, double jacobi, const GridSpec& grid) {
  if (grid.nx < 2 || grid.ny < 2) throw DomainError("hill region grid needs at least 2 cells per axis");
  if (!(grid.x_max > grid.x_min) || !(grid.y_max > grid.y_min)) throw DomainError("empty hill region bounds");
  HillRegionMap map;
  map.grid = grid;
  map.jacobi = jacobi;
  const std::size_t n = static_cast<std::size_t>(grid.nx) * grid.ny;
  map.allowed.assign(n, 0);
  std::vector<double> f(n);
  constexpr double kHuge = 1e300;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const Vec2 c = grid.cell_center(i, j);
      const std::size_t idx = static_cast<std::size_t>(j) * grid.nx + i;
      const auto near = nearest_primary(cfg, c);
      f[idx] = near.distance < cfg.collision_floor() ? kHuge : 2.0 * effective_potential(cfg, c) - jacobi;
      map.allowed[idx] = f[idx] >= 0.0 ? 1 : 0;
    }
  }
  for (const auto& prim : cfg.primaries()) {
    if (prim.mass <= 0.0) continue;
    const auto& p = prim.position;
    const int i = static_cast<int>(std::floor((p.x - grid.x_min) / grid.dx()));
    const int j = static_cast<int>(std::floor((p.y - grid.y_min) / grid.dy()));
    if (i >= 0 && i < grid.nx && j >= 0 && j < grid.ny) {
      map.allowed[static_cast<std::size_t>(j) * grid.nx + i] = 1;
      f[static_cast<std::size_t>(j) * grid.nx + i] = std::max(f[static_cast<std::size_t>(j) * grid.nx + i], 0.0);
    }
  }
  map.boundary = contour_lines(grid, f);
  return map;
}

}  // namespace r4bp
