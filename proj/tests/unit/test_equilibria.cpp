#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "r4bp/equilibria.hpp"
#include "r4bp/errors.hpp"

namespace {

using namespace r4bp;

double grad_norm(const SystemConfig& cfg, Vec2 p) {
  const Vec2 g = effective_gradient(cfg, p);
  return std::hypot(g.x, g.y);
}

TEST(Equilibria, TwoCollinearPoints) {
  const SystemConfig cfg(0.019);
  const auto pts = find_collinear(cfg);
  ASSERT_EQ(pts.size(), 2u);
  for (const auto& p : pts) {
    EXPECT_EQ(p.kind, EquilibriumKind::Collinear);
    EXPECT_EQ(p.position.y, 0.0);
    EXPECT_LT(grad_norm(cfg, p.position), 1e-12);
    EXPECT_DOUBLE_EQ(p.jacobi_value, 2 * effective_potential(cfg, p.position));
  }
  // L2 is the collinear point beyond the m2-m3 edge.
  const auto l2 = find_l2(cfg);
  EXPECT_EQ(l2.position.x, pts.front().position.x);
  EXPECT_LT(l2.position.x, cfg.primary(1).position.x);
}

TEST(Equilibria, RotatingKeplerLimit) {
  const auto pts = find_collinear(SystemConfig(0.0));
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_NEAR(pts[0].position.x, -1.0, 1e-13);
  EXPECT_NEAR(pts[1].position.x, 1.0, 1e-13);
}

TEST(Equilibria, L2StableUnderGridRefinement) {
  const SystemConfig cfg(0.019);
  const double coarse = find_l2(cfg, {-3, 3, 600}).position.x;
  const double fine = find_l2(cfg, {-3, 3, 60000}).position.x;
  EXPECT_NEAR(coarse, fine, 1e-10);
  EXPECT_NEAR(fine, -0.9789, 1e-4);
}

TEST(Equilibria, EightPointsAtMu0019) {
  const SystemConfig cfg(0.019);
  const auto pts = find_all(cfg);
  ASSERT_EQ(pts.size(), 8u);
  const auto n_col = std::count_if(pts.begin(), pts.end(), [](const auto& p) { return p.kind == EquilibriumKind::Collinear; });
  EXPECT_EQ(n_col, 2);
  for (const auto& p : pts) {
    EXPECT_LT(grad_norm(cfg, p.position), 1e-12);
    // closed under y -> -y
    const auto mirror = std::find_if(pts.begin(), pts.end(), [&](const auto& q) {
      return std::abs(q.position.x - p.position.x) < 1e-12 && std::abs(q.position.y + p.position.y) < 1e-12;
    });
    ASSERT_NE(mirror, pts.end());
    EXPECT_EQ(mirror->jacobi_value, p.jacobi_value);
  }
}

TEST(Equilibria, CensusOverMu) {
  for (double mu : {0.001, 0.0027, 0.05, 0.1, 0.2, 1.0 / 3.0}) {
    const SystemConfig cfg(mu);
    const auto pts = find_all(cfg);
    const auto off = std::count_if(pts.begin(), pts.end(), [](const auto& p) { return p.kind == EquilibriumKind::NonCollinear; });
    EXPECT_EQ(off % 2, 0) << mu;
    for (const auto& p : pts) EXPECT_LT(grad_norm(cfg, p.position), 1e-12) << mu;
  }
}

TEST(HillRegions, AllowedEverywhereBelowTheLowestCriticalValue) {
  const SystemConfig cfg(0.019);
  const auto pts = find_all(cfg);
  const double c_min = std::min_element(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.jacobi_value < b.jacobi_value; })
                           ->jacobi_value;
  const auto map = hill_regions(cfg, c_min - 1e-3, {});
  EXPECT_EQ(map.forbidden_count(), 0u);
  EXPECT_EQ(map.components(true), 1);
  EXPECT_TRUE(map.boundary.empty());
}

TEST(HillRegions, LargeJacobiIsolatesThePrimaries) {
  const SystemConfig cfg(0.019);
  GridSpec g{-3.5, 3.5, -3.5, 3.5, 1400, 1400};
  const auto map = hill_regions(cfg, 6.0, g);
  EXPECT_EQ(map.components(true), 4);
  EXPECT_EQ(map.components(false), 1);
}

// L2 is a local minimum of Omega: at its critical value the forbidden region
// is born there as a small oval.
TEST(HillRegions, ForbiddenOvalIsBornAtL2) {
  const SystemConfig cfg(0.019);
  const auto l2 = find_l2(cfg);
  GridSpec g{l2.position.x - 0.1, l2.position.x + 0.1, -0.1, 0.1, 160, 160};
  EXPECT_EQ(hill_regions(cfg, l2.jacobi_value - 1e-5, g).forbidden_count(), 0u);
  const auto map = hill_regions(cfg, l2.jacobi_value + 1e-5, g);
  EXPECT_GT(map.forbidden_count(), 0u);
  EXPECT_EQ(map.components(false), 1);
  const int i = static_cast<int>((l2.position.x - g.x_min) / g.dx());
  const int j = static_cast<int>((l2.position.y - g.y_min) / g.dy());
  bool mixed = false;
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) mixed |= !map.is_allowed(i + di, j + dj);
  EXPECT_TRUE(mixed);
  ASSERT_FALSE(map.boundary.empty());
  double farthest = 0;
  for (const auto& line : map.boundary)
    for (const auto& p : line.points) farthest = std::max(farthest, std::hypot(p.x - l2.position.x, p.y - l2.position.y));
  EXPECT_LT(farthest, 0.05);
}

TEST(HillRegions, ComponentCountChangesOnlyAtCriticalValues) {
  const SystemConfig cfg(0.019);
  const auto pts = find_all(cfg);
  GridSpec g{-2.5, 2.5, -2.5, 2.5, 300, 300};
  int prev = -1;
  double c_prev = 0;
  for (double c = 2.9; c <= 4.0; c += 0.01) {
    const int n = hill_regions(cfg, c, g).components(false);
    if (prev >= 0 && n != prev) {
      const bool critical = std::any_of(pts.begin(), pts.end(),
                                        [&](const auto& p) { return p.jacobi_value > c_prev - 0.01 && p.jacobi_value < c + 0.01; });
      EXPECT_TRUE(critical) << "forbidden components " << prev << " -> " << n << " between C=" << c_prev << " and " << c;
    }
    prev = n;
    c_prev = c;
  }
}

TEST(HillRegions, Validation) {
  const SystemConfig cfg(0.019);
  EXPECT_THROW(hill_regions(cfg, 3.0, {0, 0, -1, 1, 10, 10}), DomainError);
  EXPECT_THROW(hill_regions(cfg, 3.0, {-1, 1, -1, 1, 1, 10}), DomainError);
  EXPECT_THROW(find_collinear(cfg, {1, -1, 100}), DomainError);
}

}  // namespace
