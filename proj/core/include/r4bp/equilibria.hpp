#pragma once

#include <cstdint>
#include <vector>

#include "r4bp/model.hpp"

namespace r4bp {

enum class EquilibriumKind { Collinear, NonCollinear };

const char* to_string(EquilibriumKind k) noexcept;

struct EquilibriumPoint {
  Vec2 position;
  double jacobi_value = 0.0;  ///< C = 2 Omega at the point
  EquilibriumKind kind = EquilibriumKind::Collinear;
};

struct CollinearSearch {
  double x_min = -3.0;
  double x_max = 3.0;
  int intervals = 6000;  ///< sign-scan resolution of the bracket grid
};

/// All roots of Omega_x(x, 0) away from the primaries, sorted by x.
std::vector<EquilibriumPoint> find_collinear(const SystemConfig& cfg, const CollinearSearch& search = {});

/// The collinear point L2: the one with the smallest abscissa, beyond the m2-m3 edge.
EquilibriumPoint find_l2(const SystemConfig& cfg, const CollinearSearch& search = {});

/// Multi-start damped Newton on grad Omega; duplicates merged, mirror images added.
std::vector<EquilibriumPoint> find_all(const SystemConfig& cfg);

struct GridSpec {
  double x_min = -2.0, x_max = 2.0;
  double y_min = -2.0, y_max = 2.0;
  int nx = 200;  ///< cells along x
  int ny = 200;  ///< cells along y

  double dx() const noexcept { return (x_max - x_min) / nx; }
  double dy() const noexcept { return (y_max - y_min) / ny; }
  Vec2 cell_center(int i, int j) const noexcept {
    return {x_min + (i + 0.5) * dx(), y_min + (j + 0.5) * dy()};
  }
};

struct Polyline {
  std::vector<Vec2> points;
  bool closed = false;
};

/// Classification of the plane into allowed (2 Omega >= C) and forbidden cells.
/// A cell containing a primary is allowed since Omega is unbounded inside it.
struct HillRegionMap {
  GridSpec grid;
  double jacobi = 0.0;
  std::vector<std::uint8_t> allowed;  ///< row-major, index j * nx + i
  std::vector<Polyline> boundary;     ///< zero-velocity curves 2 Omega = C

  bool is_allowed(int i, int j) const { return allowed.at(static_cast<std::size_t>(j) * grid.nx + i) != 0; }
  std::size_t forbidden_count() const;
  /// Number of 4-connected components of cells with the given label.
  int components(bool allowed_label = true) const;
};

HillRegionMap hill_regions(const SystemConfig& cfg, double jacobi, const GridSpec& grid);

}  // namespace r4bp
