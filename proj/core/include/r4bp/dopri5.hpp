#pragma once

// Dormand-Prince 5(4) with Hairer's fourth-order continuous extension.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "r4bp/errors.hpp"

namespace r4bp::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

struct Tolerances {
  double rel_tol = 1e-11;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  ///< 0 selects the step automatically
  std::size_t max_steps = 5'000'000;
};

/// One accepted step together with the coefficients of its dense output.
template <std::size_t N>
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  Vec<N> y0{};
  Vec<N> y1{};
  std::array<Vec<N>, 5> rcont{};

  double t1() const noexcept { return t0 + h; }

  Vec<N> eval(double t) const noexcept {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    Vec<N> y;
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = rcont[0][i] + s * (rcont[1][i] + s1 * (rcont[2][i] + s * (rcont[3][i] + s1 * rcont[4][i])));
    }
    return y;
  }
};

namespace tableau {
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                        a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                        a76 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                        e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace tableau

/// Single Dormand-Prince step from (t, y) with derivative k1 = f(t, y) and signed step h.
/// Fills the fifth-order solution, its derivative k7 (FSAL), the scaled error norm and the
/// dense-output coefficients.
template <std::size_t N, class Rhs>
double dopri5_step(Rhs& f, double t, const Vec<N>& y, const Vec<N>& k1, double h, const Tolerances& tol,
                   DenseStep<N>& out, Vec<N>& k7) {
  using namespace tableau;
  Vec<N> k2, k3, k4, k5, k6, tmp;
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
  k2 = f(t + c2 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  k3 = f(t + c3 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  k4 = f(t + c4 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  k5 = f(t + c5 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) {
    tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  }
  k6 = f(t + h, tmp);
  Vec<N> y1;
  for (std::size_t i = 0; i < N; ++i) {
    y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
  }
  k7 = f(t + h, y1);

  double err = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double sc = tol.abs_tol + tol.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
    err += (e / sc) * (e / sc);
  }
  err = std::sqrt(err / static_cast<double>(N));

  out.t0 = t;
  out.h = h;
  out.y0 = y;
  out.y1 = y1;
  for (std::size_t i = 0; i < N; ++i) {
    const double ydiff = y1[i] - y[i];
    const double bspl = h * k1[i] - ydiff;
    out.rcont[0][i] = y[i];
    out.rcont[1][i] = ydiff;
    out.rcont[2][i] = bspl;
    out.rcont[3][i] = ydiff - h * k7[i] - bspl;
    out.rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
  }
  return err;
}

/// Result of a single step attempt reported to the observer.
enum class StepAction { Continue, Stop };

/// Adaptive driver. Integrates from t0 toward t_end (either direction) and calls
/// observer(const DenseStep<N>&) after every accepted step; the observer may stop early.
/// Returns the time reached.
template <std::size_t N, class Rhs, class Observer>
double integrate_adaptive(Rhs&& f, double t0, const Vec<N>& y0, double t_end, const Tolerances& tol,
                          Observer&& observer) {
  if (!(tol.rel_tol > 0.0) || !(tol.abs_tol > 0.0)) throw DomainError("tolerances must be positive");
  const double span = t_end - t0;
  if (span == 0.0) return t0;
  const double dir = span > 0.0 ? 1.0 : -1.0;

  Vec<N> y = y0;
  Vec<N> k1 = f(t0, y);
  double t = t0;

  double h = std::abs(tol.initial_step);
  if (h == 0.0) {
    // Hairer's starting-step heuristic.
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = tol.abs_tol + tol.rel_tol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::abs(span));
    Vec<N> y1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + dir * h0 * k1[i];
    const Vec<N> f1 = f(t + dir * h0, y1);
    double d2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = tol.abs_tol + tol.rel_tol * std::abs(y[i]);
      d2 += ((f1[i] - k1[i]) / sc) * ((f1[i] - k1[i]) / sc);
    }
    d2 = std::sqrt(d2 / N) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min(h, tol.max_step);

  DenseStep<N> step;
  Vec<N> k7;
  bool last_rejected = false;
  std::size_t n_steps = 0;
  constexpr double safety = 0.9, fac_min = 0.2, fac_max = 10.0;

  while (dir * (t_end - t) > 0.0) {
    if (++n_steps > tol.max_steps) throw MaxTimeError("maximum number of integration steps exceeded");
    bool final_step = false;
    // A remainder at round-off level after this step is folded into it.
    const double tail = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_end));
    if (h >= std::abs(t_end - t) - tail) {
      h = std::abs(t_end - t);
      final_step = true;
    }
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      throw ConsistencyError("step size underflow");
    }
    const double err = dopri5_step<N>(f, t, y, k1, dir * h, tol, step, k7);
    if (!(err <= 1.0)) {
      const double fac = std::isfinite(err) ? std::max(fac_min, safety * std::pow(err, -0.2)) : fac_min;
      h *= std::min(1.0, fac);
      last_rejected = true;
      continue;
    }
    if (final_step) step.h = t_end - t;  // land exactly on t_end
    t = final_step ? t_end : t + dir * h;
    y = step.y1;
    k1 = k7;
    if (observer(static_cast<const DenseStep<N>&>(step)) == StepAction::Stop) return t;

    double fac = err == 0.0 ? fac_max : safety * std::pow(err, -0.2);
    fac = std::clamp(fac, fac_min, fac_max);
    if (last_rejected) fac = std::min(fac, 1.0);
    last_rejected = false;
    h = std::min(h * fac, tol.max_step);
  }
  return t;
}

/// Piecewise dense output over a whole integration.
template <std::size_t N>
class DenseSolution {
public:
  DenseSolution() = default;

  void push(const DenseStep<N>& s) { steps_.push_back(s); }

  bool empty() const noexcept { return steps_.empty(); }
  std::size_t size() const noexcept { return steps_.size(); }
  const std::vector<DenseStep<N>>& steps() const noexcept { return steps_; }

  double t_begin() const { return steps_.front().t0; }
  double t_end() const { return steps_.back().t1(); }

  /// Dense evaluation at any t inside the integrated span. Throws DomainError outside it.
  Vec<N> operator()(double t) const {
    if (steps_.empty()) throw DomainError("empty dense solution");
    const double lo = std::min(t_begin(), t_end());
    const double hi = std::max(t_begin(), t_end());
    if (t < lo || t > hi) throw DomainError("time outside the integrated span");
    const bool forward = t_end() >= t_begin();
    auto it = std::lower_bound(steps_.begin(), steps_.end(), t, [forward](const DenseStep<N>& s, double tt) {
      return forward ? s.t1() < tt : s.t1() > tt;
    });
    if (it == steps_.end()) it = std::prev(steps_.end());
    if (t == it->t1()) return it->y1;
    return it->eval(t);
  }

private:
  std::vector<DenseStep<N>> steps_;
};

/// Convenience: integrate and keep the full dense output.
template <std::size_t N, class Rhs>
DenseSolution<N> solve(Rhs&& f, double t0, const Vec<N>& y0, double t_end, const Tolerances& tol) {
  DenseSolution<N> sol;
  integrate_adaptive<N>(f, t0, y0, t_end, tol, [&sol](const DenseStep<N>& s) {
    sol.push(s);
    return StepAction::Continue;
  });
  return sol;
}

}  // namespace r4bp::ode
