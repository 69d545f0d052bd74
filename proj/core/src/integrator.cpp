#include "r4bp/integrator.hpp"

#include <cmath>

#include "r4bp/errors.hpp"

namespace r4bp {

namespace {

struct SynodicRhs {
  const SystemConfig* cfg;
  ode::Vec<4> operator()(double, const ode::Vec<4>& y) const {
    return vector_field(*cfg, State::from_array(y)).to_array();
  }
};

std::optional<NearestPrimary> guard_violation(const SystemConfig& cfg, const ode::DenseStep<4>& step, double floor) {
  // Endpoint plus midpoint: close approaches inside a step force small steps anyway.
  for (const auto& y : {step.y1, step.eval(step.t0 + 0.5 * step.h)}) {
    const auto near = nearest_primary(cfg, {y[0], y[1]});
    if (near.distance < floor) return near;
  }
  return std::nullopt;
}

// Root of y(t) on [ta, tb] using the dense output (Illinois variant of regula falsi).
double dense_root(const ode::DenseStep<4>& step, double ta, double ya, double tb, double yb) {
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    const double tc = (ta * yb - tb * ya) / (yb - ya);
    const double yc = step.eval(tc)[1];
    if (yc == 0.0) return tc;
    if ((yc > 0.0) == (yb > 0.0)) {
      tb = tc;
      yb = yc;
      if (side == -1) ya *= 0.5;
      side = -1;
    } else {
      ta = tc;
      ya = yc;
      if (side == 1) yb *= 0.5;
      side = 1;
    }
    if (std::abs(tb - ta) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(ta))) break;
  }
  return std::abs(ya) < std::abs(yb) ? ta : tb;
}

// Re-steps from the beginning of the accepted step to the event time with the
// fifth-order formula and polishes the time by Newton iterations on y.
SectionEvent refine_event(const SystemConfig& cfg, const ode::DenseStep<4>& step, double t_guess,
                          const ode::Tolerances& tol) {
  SynodicRhs rhs{&cfg};
  const ode::Vec<4> k1 = rhs(step.t0, step.y0);
  ode::DenseStep<4> sub;
  ode::Vec<4> k7;
  double t = t_guess;
  ode::Vec<4> y = step.eval(t);
  for (int it = 0; it < 4; ++it) {
    const double h = t - step.t0;
    if (h == 0.0) break;
    ode::dopri5_step<4>(rhs, step.t0, step.y0, k1, h, tol, sub, k7);
    y = sub.y1;
    if (std::abs(y[1]) < 1e-15 || y[3] == 0.0) break;
    t -= y[1] / y[3];
  }
  SectionEvent ev;
  ev.time = t;
  ev.state = State::from_array(y);
  return ev;
}

}  // namespace

void IntegrationSettings::validate(const SystemConfig& cfg) const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("integration tolerances must be positive");
  if (!(max_step > 0.0)) throw DomainError("max_step must be positive");
  if (!(proximity_floor > cfg.collision_floor())) {
    throw DomainError("proximity_floor must exceed the model collision floor");
  }
  if (!(max_time > 0.0)) throw DomainError("max_time must be positive");
  if (!(escape_radius > 0.0)) throw DomainError("escape_radius must be positive");
}

ode::Tolerances IntegrationSettings::tolerances() const {
  ode::Tolerances t;
  t.rel_tol = rel_tol;
  t.abs_tol = abs_tol;
  t.max_step = max_step;
  return t;
}

const char* to_string(ScanStatus s) noexcept {
  switch (s) {
    case ScanStatus::Complete: return "complete";
    case ScanStatus::ProximityGuard: return "proximity";
    case ScanStatus::Escaped: return "escaped";
    case ScanStatus::MaxTime: return "max_time";
  }
  return "unknown";
}

Trajectory integrate(const SystemConfig& cfg, const State& s0, double t_final, const IntegrationSettings& settings) {
  settings.validate(cfg);
  if (!std::isfinite(t_final)) throw DomainError("t_final must be finite");
  if (std::abs(t_final) > settings.max_time) throw MaxTimeError("requested span exceeds max_time");
  const auto start = nearest_primary(cfg, s0.position());
  if (start.distance < settings.proximity_floor) throw ProximityError(0.0, start.index, start.distance);

  ode::DenseSolution<4> sol;
  if (t_final == 0.0) {
    ode::DenseStep<4> s;
    s.h = 1.0;
    s.y0 = s.y1 = s0.to_array();
    s.rcont[0] = s.y0;
    sol.push(s);
    return Trajectory(std::move(sol));
  }
  ode::integrate_adaptive<4>(SynodicRhs{&cfg}, 0.0, s0.to_array(), t_final, settings.tolerances(),
                             [&](const ode::DenseStep<4>& step) {
                               if (auto v = guard_violation(cfg, step, settings.proximity_floor)) {
                                 throw ProximityError(step.t1(), v->index, v->distance);
                               }
                               sol.push(step);
                               return ode::StepAction::Continue;
                             });
  return Trajectory(std::move(sol));
}

CrossingScan scan_crossings(const SystemConfig& cfg, const State& s0, const IntegrationSettings& settings, int n,
                            const std::optional<ExclusionBall>& exclusion, TimeDirection direction) {
  settings.validate(cfg);
  if (n < 1) throw DomainError("number of crossings must be at least 1");
  const double dir = direction == TimeDirection::Forward ? 1.0 : -1.0;
  const auto tol = settings.tolerances();

  CrossingScan scan;
  const auto start = nearest_primary(cfg, s0.position());
  if (start.distance < settings.proximity_floor) {
    scan.status = ScanStatus::ProximityGuard;
    scan.offending_primary = start.index;
    scan.offending_distance = start.distance;
    return scan;
  }

  auto record = [&](const ode::DenseStep<4>& step, double t_guess) {
    SectionEvent ev = refine_event(cfg, step, t_guess, tol);
    if (exclusion) {
      const double d = std::hypot(ev.state.x - exclusion->center.x, ev.state.y - exclusion->center.y);
      if (d < exclusion->radius) return false;
    }
    ev.direction = ev.state.vy * dir > 0.0 ? 1 : -1;
    ev.index = static_cast<int>(scan.events.size()) + 1;
    scan.events.push_back(ev);
    return static_cast<int>(scan.events.size()) >= n;
  };

  bool done = false;
  try {
    scan.end_time = ode::integrate_adaptive<4>(
        SynodicRhs{&cfg}, 0.0, s0.to_array(), dir * settings.max_time, tol, [&](const ode::DenseStep<4>& step) {
          if (auto v = guard_violation(cfg, step, settings.proximity_floor)) {
            scan.status = ScanStatus::ProximityGuard;
            scan.offending_primary = v->index;
            scan.offending_distance = v->distance;
            scan.end_time = step.t1();
            return ode::StepAction::Stop;
          }
          // Sample the step at quarter points so two crossings within one step are not missed.
          constexpr int kSamples = 4;
          double tp = step.t0, yp = step.y0[1];
          for (int k = 1; k <= kSamples && !done; ++k) {
            const double tk = k == kSamples ? step.t1() : step.t0 + step.h * k / kSamples;
            const double yk = k == kSamples ? step.y1[1] : step.eval(tk)[1];
            if (yp * yk < 0.0) {
              done = record(step, dense_root(step, tp, yp, tk, yk));
            } else if (yk == 0.0 && yp != 0.0) {
              done = record(step, tk);
            }
            tp = tk;
            yp = yk;
          }
          if (done) {
            scan.end_time = scan.events.back().time;
            return ode::StepAction::Stop;
          }
          if (std::hypot(step.y1[0], step.y1[1]) > settings.escape_radius) {
            scan.status = ScanStatus::Escaped;
            scan.end_time = step.t1();
            return ode::StepAction::Stop;
          }
          return ode::StepAction::Continue;
        });
  } catch (const CollisionError& e) {
    scan.status = ScanStatus::ProximityGuard;
    scan.offending_primary = e.primary();
    scan.offending_distance = e.distance();
    return scan;
  } catch (const MaxTimeError&) {
    scan.status = ScanStatus::MaxTime;
    return scan;
  }
  if (!done && scan.status == ScanStatus::Complete) scan.status = ScanStatus::MaxTime;
  return scan;
}

std::vector<SectionEvent> crossings(const SystemConfig& cfg, const State& s0, const IntegrationSettings& settings,
                                   int n, const std::optional<ExclusionBall>& exclusion, TimeDirection direction) {
  auto scan = scan_crossings(cfg, s0, settings, n, exclusion, direction);
  switch (scan.status) {
    case ScanStatus::Complete: return std::move(scan.events);
    case ScanStatus::ProximityGuard: {
      const auto near = scan.offending_primary >= 0 ? scan.offending_primary : 0;
      throw ProximityError(scan.end_time, near, scan.offending_distance);
    }
    case ScanStatus::Escaped: throw EscapeError(scan.end_time, settings.escape_radius);
    case ScanStatus::MaxTime: throw MaxTimeError("max_time reached before the requested number of crossings");
  }
  return {};
}

}  // namespace r4bp
