#include "r4bp/linstab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "r4bp/errors.hpp"

namespace r4bp {

const char* to_string(StabilityRegime r) noexcept {
  switch (r) {
    case StabilityRegime::TwoImaginaryPairs: return "two-imaginary-pairs";
    case StabilityRegime::DoubleImaginary: return "double-imaginary";
    case StabilityRegime::ComplexQuadruple: return "complex-quadruple";
    case StabilityRegime::SaddleCenter: return "saddle-center";
    case StabilityRegime::Saddle: return "saddle";
  }
  return "unknown";
}

Matrix4 hamiltonian_matrix(double a, double b) {
  Matrix4 m;
  m << 0, 1, 1, 0,
      -1, 0, 0, 1,
       a, 0, 0, 1,
       0, b, -1, 0;
  return m;
}

double discriminant(double a, double b) {
  const double oxx = 1.0 + a, oyy = 1.0 + b;
  const double s = 4.0 - oxx - oyy;
  return s * s - 4.0 * oxx * oyy;
}

std::array<std::complex<double>, 4> biquadratic_roots(double c2, double c0) {
  using C = std::complex<double>;
  const double disc = c2 * c2 - 4.0 * c0;
  const C sq = std::sqrt(C(disc, 0.0));
  // Numerically stable pair of roots of eta^2 + c2 eta + c0 = 0.
  const C q = -0.5 * (C(c2, 0.0) + (c2 >= 0 ? 1.0 : -1.0) * sq);
  const C eta1 = q;
  const C eta2 = q != C(0.0) ? C(c0, 0.0) / q : -C(c2, 0.0) - q;
  std::array<C, 4> roots{std::sqrt(eta1), -std::sqrt(eta1), std::sqrt(eta2), -std::sqrt(eta2)};
  std::sort(roots.begin(), roots.end(), [](const C& x, const C& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return roots;
}

LinearAnalysis analyze(const SystemConfig& cfg, const EquilibriumPoint& eq, double double_root_tol) {
  const auto d = potential_derivatives(cfg, eq.position, 2);
  if (eq.kind != EquilibriumKind::Collinear || std::abs(d(1, 1)) > 1e-9) {
    throw DomainError("linear analysis requires a collinear equilibrium (U_xy != 0)");
  }
  LinearAnalysis la;
  la.a = d(2, 0);
  la.b = d(0, 2);
  la.omega_xx = 1.0 + la.a;
  la.omega_yy = 1.0 + la.b;
  la.matrix_A = hamiltonian_matrix(la.a, la.b);
  la.charpoly_c2 = 2.0 - la.a - la.b;
  la.charpoly_c0 = la.a * la.b + la.a + la.b + 1.0;
  la.discriminant = discriminant(la.a, la.b);
  la.eigenvalues = biquadratic_roots(la.charpoly_c2, la.charpoly_c0);
  la.omega = std::numeric_limits<double>::quiet_NaN();
  la.alpha = 0.0;

  const double c2 = la.charpoly_c2, c0 = la.charpoly_c0, disc = la.discriminant;
  if (std::abs(disc) <= double_root_tol && c2 > 0.0) {
    la.regime = StabilityRegime::DoubleImaginary;
    la.omega = std::sqrt(c2 / 2.0);
    la.frequencies = {la.omega, la.omega};
  } else if (disc < 0.0) {
    la.regime = StabilityRegime::ComplexQuadruple;
    la.alpha = std::abs(la.eigenvalues[0].real());
    la.omega = std::abs(la.eigenvalues[0].imag());
  } else {
    // Real eta roots.
    const double s = std::sqrt(disc);
    const double eta_hi = 0.5 * (-c2 + s), eta_lo = 0.5 * (-c2 - s);
    if (eta_hi < 0.0) {
      la.regime = StabilityRegime::TwoImaginaryPairs;
      la.frequencies = {std::sqrt(-eta_lo), std::sqrt(-eta_hi)};
    } else if (eta_lo < 0.0) {
      la.regime = StabilityRegime::SaddleCenter;
      la.frequencies = {std::sqrt(-eta_lo), 0.0};
    } else {
      la.regime = StabilityRegime::Saddle;
    }
    (void)c0;
  }
  return la;
}

double l2_discriminant(double mu) {
  const SystemConfig cfg(mu);
  const auto l2 = find_l2(cfg);
  const auto d = potential_derivatives(cfg, l2.position, 2);
  return discriminant(d(2, 0), d(0, 2));
}

CriticalMass find_mu_b(double mu_lo, double mu_hi, double tol) {
  if (!(mu_lo > 0.0 && mu_hi > mu_lo && mu_hi <= 1.0 / 3.0)) throw DomainError("invalid mu bracket");
  if (!(tol > 0.0)) throw DomainError("bisection tolerance must be positive");
  double d_lo = l2_discriminant(mu_lo);
  double d_hi = l2_discriminant(mu_hi);
  if (!(d_lo * d_hi < 0.0)) throw BracketError("discriminant does not change sign on the mu bracket");

  int iterations = 0;
  while (mu_hi - mu_lo >= tol && iterations < 200) {
    const double mid = 0.5 * (mu_lo + mu_hi);
    const double d_mid = l2_discriminant(mid);
    ++iterations;
    if (d_mid == 0.0) {
      mu_lo = mu_hi = mid;
      d_lo = d_hi = 0.0;
      break;
    }
    if ((d_mid > 0.0) == (d_lo > 0.0)) {
      mu_lo = mid;
      d_lo = d_mid;
    } else {
      mu_hi = mid;
      d_hi = d_mid;
    }
  }
  double mu_b = mu_lo;
  if (d_hi != d_lo) mu_b = mu_lo - d_lo * (mu_hi - mu_lo) / (d_hi - d_lo);
  mu_b = std::clamp(mu_b, mu_lo, mu_hi);

  CriticalMass cm;
  cm.mu_b = mu_b;
  cm.iterations = iterations;
  const SystemConfig cfg(mu_b);
  const auto l2 = find_l2(cfg);
  const auto d = potential_derivatives(cfg, l2.position, 2);
  cm.a = d(2, 0);
  cm.b = d(0, 2);
  cm.l2_x = l2.position.x;
  cm.discriminant = discriminant(cm.a, cm.b);
  cm.omega = std::sqrt((4.0 - (1.0 + cm.a) - (1.0 + cm.b)) / 2.0);
  return cm;
}

std::array<double, 5> characteristic_polynomial(const Matrix4& m) {
  // det(lambda I - M) = lambda^4 + p1 lambda^3 + p2 lambda^2 + p3 lambda + p4.
  std::array<double, 5> c{};
  c[4] = 1.0;
  Matrix4 mk = Matrix4::Identity();
  Matrix4 am;
  for (int k = 1; k <= 4; ++k) {
    am = m * mk;
    const double ck = -am.trace() / k;
    c[4 - k] = ck;
    mk = am + ck * Matrix4::Identity();
  }
  return c;
}

}  // namespace r4bp
