#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

#include "r4bp/equilibria.hpp"
#include "r4bp/model.hpp"

namespace r4bp {

using Matrix4 = Eigen::Matrix4d;

/// Spectral regimes of a collinear point. The first three are the ones met at L2;
/// the saddle types appear at other collinear points.
enum class StabilityRegime {
  TwoImaginaryPairs,   ///< +-i w1, +-i w2
  DoubleImaginary,     ///< (+-i w)^2, non-semisimple collision
  ComplexQuadruple,    ///< +-alpha +-i w
  SaddleCenter,        ///< real pair and imaginary pair
  Saddle,              ///< two real pairs
};

const char* to_string(StabilityRegime r) noexcept;

struct LinearAnalysis {
  double a = 0.0;  ///< U_x1x1
  double b = 0.0;  ///< U_x2x2
  double omega_xx = 0.0;
  double omega_yy = 0.0;
  Matrix4 matrix_A = Matrix4::Zero();
  double charpoly_c2 = 0.0;  ///< 2 - a - b
  double charpoly_c0 = 0.0;  ///< ab + a + b + 1
  double discriminant = 0.0;
  std::array<std::complex<double>, 4> eigenvalues{};
  StabilityRegime regime = StabilityRegime::TwoImaginaryPairs;
  double omega = 0.0;  ///< double frequency, or imaginary part for the complex quadruple; NaN otherwise
  double alpha = 0.0;  ///< real part for the complex quadruple, 0 otherwise
  std::array<double, 2> frequencies{};  ///< w1 >= w2 for two imaginary pairs
};

/// Hamiltonian matrix of the quadratic part in (x1, x2, y1, y2):
/// rows [0 1 1 0; -1 0 0 1; a 0 0 1; 0 b -1 0].
Matrix4 hamiltonian_matrix(double a, double b);

/// D = (4 - Omega_xx - Omega_yy)^2 - 4 Omega_xx Omega_yy with Omega_xx = 1 + a, Omega_yy = 1 + b.
double discriminant(double a, double b);

/// Roots of lambda^4 + c2 lambda^2 + c0 via eta = lambda^2. Ordered so that
/// eigenvalues[0] has the largest real part (then largest imaginary part).
std::array<std::complex<double>, 4> biquadratic_roots(double c2, double c0);

/// Classification threshold on |D| for the double-root regime.
inline constexpr double kDoubleRootTolerance = 1e-8;

LinearAnalysis analyze(const SystemConfig& cfg, const EquilibriumPoint& eq,
                       double double_root_tol = kDoubleRootTolerance);

/// Discriminant at L2 as a function of mu.
double l2_discriminant(double mu);

struct CriticalMass {
  double mu_b = 0.0;
  double omega = 0.0;  ///< double frequency, omega^2 = (4 - Omega_xx - Omega_yy)/2
  double a = 0.0;
  double b = 0.0;
  double discriminant = 0.0;
  double l2_x = 0.0;
  int iterations = 0;
};

/// Bisection on mu -> D(L2(mu)) until the bracket is narrower than tol, followed by a
/// secant step inside the final bracket. Throws BracketError without a sign change.
CriticalMass find_mu_b(double mu_lo = 0.001, double mu_hi = 0.01, double tol = 1e-10);

/// Coefficients c0..c4 of det(lambda I - M) (c4 = 1), by Faddeev-LeVerrier.
std::array<double, 5> characteristic_polynomial(const Matrix4& m);

}  // namespace r4bp
