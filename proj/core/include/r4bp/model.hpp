#pragma once

#include <array>
#include <cstddef>

namespace r4bp {

/// Collision floor on the distance to a primary used by every potential evaluation.
inline constexpr double kCollisionFloor = 1e-12;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Primary {
  Vec2 position;
  double mass = 0.0;
};

/// Equal-mass restricted four-body configuration: m1 = 1-2mu on the positive
/// x-axis, m2 = m3 = mu placed symmetrically, unit triangle side, center of mass
/// at the origin.
class SystemConfig {
public:
  explicit SystemConfig(double mu, double collision_floor = kCollisionFloor);

  double mu() const noexcept { return mu_; }
  double collision_floor() const noexcept { return collision_floor_; }
  const std::array<Primary, 3>& primaries() const noexcept { return primaries_; }
  const Primary& primary(std::size_t i) const { return primaries_.at(i); }

private:
  double mu_;
  double collision_floor_;
  std::array<Primary, 3> primaries_;
};

/// Planar state in the synodic frame.
struct State {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;

  Vec2 position() const noexcept { return {x, y}; }
  std::array<double, 4> to_array() const noexcept { return {x, y, vx, vy}; }
  static State from_array(const std::array<double, 4>& a) noexcept { return {a[0], a[1], a[2], a[3]}; }
};

/// Index of the nearest primary and its distance.
struct NearestPrimary {
  int index = 0;
  double distance = 0.0;
};

NearestPrimary nearest_primary(const SystemConfig& cfg, Vec2 p) noexcept;

/// Omega(x, y) = (x^2 + y^2)/2 + sum mu_i / r_i. Throws CollisionError below the floor.
double effective_potential(const SystemConfig& cfg, Vec2 p);

/// Gravitational part U = sum mu_i / r_i.
double gravitational_potential(const SystemConfig& cfg, Vec2 p);

/// Closed-form gradient of Omega.
Vec2 effective_gradient(const SystemConfig& cfg, Vec2 p);

/// (vx, vy, 2 vy + Omega_x, -2 vx + Omega_y).
State vector_field(const SystemConfig& cfg, const State& s);

/// C = 2 Omega - (vx^2 + vy^2).
double jacobi_constant(const SystemConfig& cfg, const State& s);

/// H = -C/2 for the Hamiltonian H = |p|^2/2 + (y px - x py) - U.
constexpr double hamiltonian_from_jacobi(double jacobi) noexcept { return -0.5 * jacobi; }

/// Table of exact partials d^(i+j) U / dx^i dy^j for i + j <= max_order (<= 4).
class PotentialDerivatives {
public:
  static constexpr int kMaxOrder = 4;

  PotentialDerivatives() = default;
  PotentialDerivatives(int max_order, const std::array<std::array<double, kMaxOrder + 1>, kMaxOrder + 1>& table)
      : max_order_(max_order), table_(table) {}

  int max_order() const noexcept { return max_order_; }

  /// Partial with i derivatives in x and j in y. Throws DomainError when i + j > max_order.
  double operator()(int i, int j) const;

private:
  int max_order_ = 0;
  std::array<std::array<double, kMaxOrder + 1>, kMaxOrder + 1> table_{};
};

PotentialDerivatives potential_derivatives(const SystemConfig& cfg, Vec2 p, int max_order);

/// Coefficients of the cubic and quartic monomials of the Hamiltonian expanded at an
/// equilibrium: coefficient of x1^i x2^j is -U_ij / (i! j!).
struct TaylorCoefficients {
  double a3 = 0, b3 = 0, c3 = 0, d3 = 0;
  double a4 = 0, b4 = 0, c4 = 0, d4 = 0, e4 = 0;
};

TaylorCoefficients taylor_coefficients(const SystemConfig& cfg, Vec2 equilibrium);

/// Reversing symmetry (x, y, vx, vy) -> (x, -y, -vx, vy).
constexpr State reflect_trajectory(const State& s) noexcept { return {s.x, -s.y, -s.vx, s.vy}; }

}  // namespace r4bp
