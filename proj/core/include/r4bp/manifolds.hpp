#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "r4bp/equilibria.hpp"
#include "r4bp/integrator.hpp"
#include "r4bp/linstab.hpp"
#include "r4bp/model.hpp"

namespace r4bp {

using Vector4 = Eigen::Vector4d;

enum class ManifoldKind { Unstable, Stable };

const char* to_string(ManifoldKind k) noexcept;

/// Jacobian of the synodic vector field in (x, y, vx, vy) at a point.
Matrix4 synodic_jacobian(const SystemConfig& cfg, Vec2 p);

/// Real basis of the unstable (or stable) plane of L2.
/// v_bar has unit norm; w_bar is the imaginary part made orthogonal to v_bar and
/// renormalized. The complex eigenvector is scaled so its x-component is real positive.
struct EigenFrame {
  ManifoldKind kind = ManifoldKind::Unstable;
  Vec2 l2;
  double alpha = 0.0;  ///< > 0; the eigenvalue is +-alpha + i omega
  double omega = 0.0;
  Vector4 v_bar = Vector4::Zero();
  Vector4 w_bar = Vector4::Zero();
  Eigen::Vector4cd eigenvector = Eigen::Vector4cd::Zero();  ///< (1, B, lambda, lambda B) up to scale

  std::complex<double> eigenvalue() const {
    return kind == ManifoldKind::Unstable ? std::complex<double>(alpha, omega) : std::complex<double>(-alpha, -omega);
  }
  TimeDirection direction() const {
    return kind == ManifoldKind::Unstable ? TimeDirection::Forward : TimeDirection::Backward;
  }
};

/// Unstable frame of the collinear point l2. Throws DomainError when the point
/// has no complex quadruple (mu <= mu_b) and ConsistencyError when the
/// eigenvector fails the B = (lambda^2 - Omega_xx) / (2 lambda) relation.
EigenFrame eigen_frame(const SystemConfig& cfg, const EquilibriumPoint& l2);

/// Stable frame obtained by the reversing symmetry (x, y, vx, vy) -> (x, -y, -vx, vy).
EigenFrame stable_frame(const EigenFrame& unstable);

/// L2 + eps_ic (cos theta v_bar + sin theta w_bar).
State initial_conditions(const EigenFrame& frame, double eps_ic, double theta);

/// theta_k = 2 pi k / n.
std::vector<double> uniform_theta_grid(int n);

struct ManifoldSettings {
  double eps_ic = 1e-5;
  double exclusion_factor = 10.0;  ///< exclusion radius around L2 in units of eps_ic
  int n_cuts = 5;
  unsigned threads = 0;            ///< 0: hardware concurrency
  IntegrationSettings integration = default_integration();

  double exclusion_radius() const noexcept { return exclusion_factor * eps_ic; }
  void validate(const SystemConfig& cfg) const;

  static IntegrationSettings default_integration() {
    IntegrationSettings s;
    s.max_time = 200.0;
    return s;
  }
};

struct CutPoint {
  double theta = 0.0;
  int theta_index = 0;  ///< position in the theta grid
  double x = 0.0;
  double xdot = 0.0;
  int direction = 0;
  double time = 0.0;
  State state;
};

struct ManifoldCut {
  ManifoldKind kind = ManifoldKind::Unstable;
  int index = 0;  ///< 1-based cut number
  double mu = 0.0;
  double eps_ic = 0.0;
  double exclusion_radius = 0.0;
  std::vector<CutPoint> points;  ///< ordered by theta
};

struct BranchReport {
  double theta = 0.0;
  ScanStatus status = ScanStatus::Complete;
  int crossings = 0;
  double end_time = 0.0;
  double launch_jacobi = 0.0;
};

struct Globalization {
  std::vector<ManifoldCut> cuts;  ///< cuts[n-1] holds cut n
  std::vector<BranchReport> branches;
};

/// Integrates every branch of the theta grid (in parallel) and gathers the first
/// n_cuts counted crossings of y = 0 per branch. Branches stopped by the proximity
/// guard, escape radius or time bound keep the crossings found so far.
Globalization globalize(const SystemConfig& cfg, const EigenFrame& frame, const std::vector<double>& theta_grid,
                        const ManifoldSettings& settings);

/// Maps W^u cuts to W^s cuts by (x, xdot) -> (x, -xdot) with the direction flipped.
std::vector<ManifoldCut> stable_from_unstable(const std::vector<ManifoldCut>& cuts);

/// Orthogonal crossing of the symmetry axis: a symmetric homoclinic orbit.
struct HomoclinicCandidate {
  double theta_star = 0.0;
  int cut_index = 0;
  double x_cross = 0.0;
  double time = 0.0;
  State state;
  int evaluations = 0;
};

struct FragileBracket {
  int cut_index = 0;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  std::string reason;
};

struct OrthogonalSearch {
  std::vector<HomoclinicCandidate> candidates;
  std::vector<FragileBracket> fragile;
};

/// Tolerance on |xdot| at a refined crossing.
inline constexpr double kOrthogonalTolerance = 1e-9;

/// State of the given cut on the branch theta, or nothing if the branch stops early.
std::optional<SectionEvent> cut_event(const SystemConfig& cfg, const EigenFrame& frame, double theta, int cut_index,
                                      const ManifoldSettings& settings);

/// Bisection in theta on every sign change of xdot between neighbouring grid
/// branches of the cut. Brackets whose sign change does not survive refinement
/// (branch lost, or a jump rather than a root) are reported as fragile.
OrthogonalSearch find_orthogonal_crossings(const SystemConfig& cfg, const EigenFrame& frame, const ManifoldCut& cut,
                                           int grid_size, const ManifoldSettings& settings);

}  // namespace r4bp
