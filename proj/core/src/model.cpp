#include "r4bp/model.hpp"

#include <cmath>
#include <limits>

#include "r4bp/errors.hpp"

namespace r4bp {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935;

// Partials of 1/r with respect to the components of d = p - q, through order four.
// Entry [i][j] holds d^(i+j)/dx^i dy^j (1/r).
using Table = std::array<std::array<double, PotentialDerivatives::kMaxOrder + 1>, PotentialDerivatives::kMaxOrder + 1>;

void add_inverse_distance_partials(double dx, double dy, double mass, int max_order, Table& t) {
  const double r2 = dx * dx + dy * dy;
  const double s1 = 1.0 / std::sqrt(r2);
  const double s3 = s1 / r2;
  const double s5 = s3 / r2;
  const double s7 = s5 / r2;
  const double s9 = s7 / r2;
  const double x2 = dx * dx, y2 = dy * dy;

  t[0][0] += mass * s1;
  if (max_order < 1) return;
  t[1][0] += mass * (-dx * s3);
  t[0][1] += mass * (-dy * s3);
  if (max_order < 2) return;
  t[2][0] += mass * (3.0 * x2 * s5 - s3);
  t[1][1] += mass * (3.0 * dx * dy * s5);
  t[0][2] += mass * (3.0 * y2 * s5 - s3);
  if (max_order < 3) return;
  t[3][0] += mass * (-15.0 * x2 * dx * s7 + 9.0 * dx * s5);
  t[2][1] += mass * (-15.0 * x2 * dy * s7 + 3.0 * dy * s5);
  t[1][2] += mass * (-15.0 * dx * y2 * s7 + 3.0 * dx * s5);
  t[0][3] += mass * (-15.0 * y2 * dy * s7 + 9.0 * dy * s5);
  if (max_order < 4) return;
  t[4][0] += mass * (105.0 * x2 * x2 * s9 - 90.0 * x2 * s7 + 9.0 * s5);
  t[3][1] += mass * (105.0 * x2 * dx * dy * s9 - 45.0 * dx * dy * s7);
  t[2][2] += mass * (105.0 * x2 * y2 * s9 - 15.0 * (x2 + y2) * s7 + 3.0 * s5);
  t[1][3] += mass * (105.0 * dx * y2 * dy * s9 - 45.0 * dx * dy * s7);
  t[0][4] += mass * (105.0 * y2 * y2 * s9 - 90.0 * y2 * s7 + 9.0 * s5);
}

void check_collision(const SystemConfig& cfg, Vec2 p) {
  const auto nearest = nearest_primary(cfg, p);
  if (!(nearest.distance >= cfg.collision_floor())) throw CollisionError(nearest.index, nearest.distance);
}

}  // namespace

SystemConfig::SystemConfig(double mu, double collision_floor) : mu_(mu), collision_floor_(collision_floor) {
  if (!(mu >= 0.0 && mu <= 1.0 / 3.0 + 1e-15)) throw DomainError("mass parameter mu must lie in [0, 1/3]");
  if (!(collision_floor > 0.0)) throw DomainError("collision floor must be positive");
  const double m1 = 1.0 - 2.0 * mu;
  const double xs = -kSqrt3 * m1 / 2.0;
  primaries_ = {Primary{{kSqrt3 * mu, 0.0}, m1}, Primary{{xs, -0.5}, mu}, Primary{{xs, 0.5}, mu}};
}

NearestPrimary nearest_primary(const SystemConfig& cfg, Vec2 p) noexcept {
  NearestPrimary best{0, std::numeric_limits<double>::infinity()};
  for (int i = 0; i < 3; ++i) {
    const auto& q = cfg.primaries()[i].position;
    const double d = std::hypot(p.x - q.x, p.y - q.y);
    if (d < best.distance) best = {i, d};
  }
  return best;
}

double gravitational_potential(const SystemConfig& cfg, Vec2 p) {
  check_collision(cfg, p);
  double u = 0.0;
  for (const auto& prim : cfg.primaries()) {
    u += prim.mass / std::hypot(p.x - prim.position.x, p.y - prim.position.y);
  }
  return u;
}

double effective_potential(const SystemConfig& cfg, Vec2 p) {
  return 0.5 * (p.x * p.x + p.y * p.y) + gravitational_potential(cfg, p);
}

Vec2 effective_gradient(const SystemConfig& cfg, Vec2 p) {
  check_collision(cfg, p);
  Vec2 g{p.x, p.y};
  for (const auto& prim : cfg.primaries()) {
    const double dx = p.x - prim.position.x;
    const double dy = p.y - prim.position.y;
    const double r2 = dx * dx + dy * dy;
    const double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
    g.x -= prim.mass * dx * inv_r3;
    g.y -= prim.mass * dy * inv_r3;
  }
  return g;
}

State vector_field(const SystemConfig& cfg, const State& s) {
  const Vec2 g = effective_gradient(cfg, s.position());
  return {s.vx, s.vy, 2.0 * s.vy + g.x, -2.0 * s.vx + g.y};
}

double jacobi_constant(const SystemConfig& cfg, const State& s) {
  return 2.0 * effective_potential(cfg, s.position()) - (s.vx * s.vx + s.vy * s.vy);
}

double PotentialDerivatives::operator()(int i, int j) const {
  if (i < 0 || j < 0 || i + j > max_order_) throw DomainError("potential derivative order out of range");
  return table_[i][j];
}

PotentialDerivatives potential_derivatives(const SystemConfig& cfg, Vec2 p, int max_order) {
  if (max_order < 1 || max_order > PotentialDerivatives::kMaxOrder) {
    throw DomainError("max_order must be in {1, 2, 3, 4}");
  }
  check_collision(cfg, p);
  Table t{};
  for (const auto& prim : cfg.primaries()) {
    if (prim.mass == 0.0) continue;
    add_inverse_distance_partials(p.x - prim.position.x, p.y - prim.position.y, prim.mass, max_order, t);
  }
  return PotentialDerivatives(max_order, t);
}

TaylorCoefficients taylor_coefficients(const SystemConfig& cfg, Vec2 eq) {
  const auto d = potential_derivatives(cfg, eq, 4);
  TaylorCoefficients c;
  c.a3 = -d(3, 0) / 6.0;
  c.b3 = -d(2, 1) / 2.0;
  c.c3 = -d(1, 2) / 2.0;
  c.d3 = -d(0, 3) / 6.0;
  c.a4 = -d(4, 0) / 24.0;
  c.b4 = -d(3, 1) / 6.0;
  c.c4 = -d(2, 2) / 4.0;
  c.d4 = -d(1, 3) / 6.0;
  c.e4 = -d(0, 4) / 24.0;
  return c;
}

}  // namespace r4bp
