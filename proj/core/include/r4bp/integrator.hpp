#pragma once

#include <optional>
#include <vector>

#include "r4bp/dopri5.hpp"
#include "r4bp/model.hpp"

namespace r4bp {

struct IntegrationSettings {
  double rel_tol = 1e-11;
  double abs_tol = 1e-12;
  double max_step = 0.1;
  double proximity_floor = 1e-3;  ///< minimal allowed distance to a primary
  double max_time = 1e4;          ///< bound on |t - t0|
  double escape_radius = 10.0;    ///< |position| beyond which crossings() gives up

  /// Throws DomainError unless tolerances are positive and the guard exceeds the
  /// model's collision floor.
  void validate(const SystemConfig& cfg) const;
  ode::Tolerances tolerances() const;
};

/// Dense output of a synodic trajectory.
class Trajectory {
public:
  explicit Trajectory(ode::DenseSolution<4> sol) : sol_(std::move(sol)) {}

  double t_begin() const { return sol_.t_begin(); }
  double t_end() const { return sol_.t_end(); }
  std::size_t steps() const noexcept { return sol_.size(); }

  /// State at any t inside [t_begin, t_end] (or the reversed span for backward runs).
  State at(double t) const { return State::from_array(sol_(t)); }
  State final_state() const { return State::from_array(sol_.steps().back().y1); }
  const ode::DenseSolution<4>& dense() const noexcept { return sol_; }

private:
  ode::DenseSolution<4> sol_;
};

/// Integrates from t = 0 to t_final (negative for backward time).
/// Throws ProximityError when the guard is violated and MaxTimeError when
/// |t_final| exceeds settings.max_time.
Trajectory integrate(const SystemConfig& cfg, const State& s0, double t_final, const IntegrationSettings& settings);

enum class TimeDirection { Forward = 1, Backward = -1 };

/// A crossing of the section y = 0.
struct SectionEvent {
  double time = 0.0;
  State state;
  int direction = 0;  ///< sign of dy/dt along the integration direction
  int index = 0;      ///< 1-based ordinal among counted crossings
};

/// Crossings strictly inside this ball (position space) are not counted.
struct ExclusionBall {
  Vec2 center;
  double radius = 0.0;
};

enum class ScanStatus { Complete, ProximityGuard, Escaped, MaxTime };

const char* to_string(ScanStatus s) noexcept;

struct CrossingScan {
  std::vector<SectionEvent> events;
  ScanStatus status = ScanStatus::Complete;
  double end_time = 0.0;
  int offending_primary = -1;  ///< valid for ProximityGuard
  double offending_distance = 0.0;
};

/// Collects up to n counted crossings without throwing on guard/escape/time limits;
/// the termination reason is reported in the status.
CrossingScan scan_crossings(const SystemConfig& cfg, const State& s0, const IntegrationSettings& settings, int n,
                            const std::optional<ExclusionBall>& exclusion = std::nullopt,
                            TimeDirection direction = TimeDirection::Forward);

/// First n counted crossings of y = 0 after t = 0, refined to |y| < 1e-10.
/// Throws EscapeError, ProximityError or MaxTimeError when fewer than n are found.
std::vector<SectionEvent> crossings(const SystemConfig& cfg, const State& s0, const IntegrationSettings& settings,
                                   int n, const std::optional<ExclusionBall>& exclusion = std::nullopt,
                                   TimeDirection direction = TimeDirection::Forward);

}  // namespace r4bp
