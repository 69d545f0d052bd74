#pragma once

#include <array>
#include <complex>
#include <map>
#include <vector>

#include "r4bp/equilibria.hpp"
#include "r4bp/linstab.hpp"
#include "r4bp/model.hpp"
#include "r4bp/nf_algebra.hpp"

namespace r4bp {

/// Standard symplectic form [[0, I], [-I, 0]].
Matrix4 symplectic_form();

/// Linear normal form of the L2 Hamiltonian matrix at the 1:1 resonance.
struct LinearNF {
  Matrix4 A = Matrix4::Zero();
  Matrix4 Sigma = Matrix4::Zero();  ///< semisimple part
  Matrix4 N = Matrix4::Zero();      ///< nilpotent part
  Matrix4 P = Matrix4::Zero();      ///< columns z1..z4 of the normalizing basis
  Matrix4 B = Matrix4::Zero();      ///< P^-1 A P
  int eps_sign = 0;
  double omega = 0.0;
  double N31 = 0.0;
};

/// Closed-form semisimple and nilpotent parts of hamiltonian_matrix(a, b) for the
/// double frequency omega. Exact A = Sigma + N; N^2 = 0 only at the resonance.
Matrix4 burgoyne_semisimple(double a, double b, double omega);
Matrix4 burgoyne_nilpotent(double a, double b, double omega);

/// Builds Sigma, N, the sign eps = sign(N31) and the symplectic basis P.
/// Throws DomainError if A is not of the L2 form or <e1, N e1> vanishes, and
/// ConsistencyError if an invariant fails by more than tol (relative to |A|).
LinearNF burgoyne_decompose(const Matrix4& A, double omega, double tol = 1e-8);

/// Residuals of the LinearNF invariants.
struct LinearNFResiduals {
  double sum = 0.0;          ///< |A - Sigma - N|
  double nilpotent = 0.0;    ///< |N^2|
  double commutator = 0.0;   ///< |Sigma N - N Sigma|
  double symplectic = 0.0;   ///< |P^T J P - J|
  double normal_form = 0.0;  ///< |B - expected pattern|
};

LinearNFResiduals residuals(const LinearNF& nf);

/// The pattern B must match: B21 = -B12 = omega, B43 = -B34 = omega, B31 = B42 = eps.
Matrix4 expected_normal_matrix(double omega, int eps_sign);

/// a3 x1^3 + b3 x1^2 x2 + c3 x1 x2^2 + d3 x2^3 in the variables (x1, x2, y1, y2).
nf::CartesianPoly4<double> cubic_term(const TaylorCoefficients& t);
/// a4 x1^4 + b4 x1^3 x2 + c4 x1^2 x2^2 + d4 x1 x2^3 + e4 x2^4.
nf::CartesianPoly4<double> quartic_term(const TaylorCoefficients& t);

nf::Matrix4T<double> to_array(const Matrix4& m);

/// The nine monomials of the second-order normal form, in order h1..h9.
const std::array<nf::Monomial, 9>& normal_form_monomials();
/// Sign with which h_i enters the second-order normal form.
inline constexpr std::array<int, 9> kNormalFormSigns{+1, -1, +1, -1, +1, -1, -1, +1, -1};

struct NormalFormResult {
  nf::LaurentFourierPoly H00;  ///< Theta + r^2/2
  nf::LaurentFourierPoly H01;
  nf::LaurentFourierPoly H02;
  std::array<double, 9> h{};
  nf::LaurentFourierPoly W1;
  nf::LaurentFourierPoly W2;
  nf::LaurentFourierPoly H1_polar;
  nf::LaurentFourierPoly H2_polar;
};

/// Second-order Lie transform of H00 + eps H1 + eps^2/2 H2, with H1, H2 given in
/// x = P z and the quadratic part already normalized to Theta + r^2/2.
/// Terms of H02 below chop_tol * max|coefficient| are treated as round-off.
NormalFormResult deprit_normal_form(const nf::Matrix4T<double>& P, const nf::CartesianPoly4<double>& H1,
                                    const nf::CartesianPoly4<double>& H2, double chop_tol = 1e-12);

/// Same, requiring the eps = -1 branch of the linear normal form.
NormalFormResult deprit_normal_form(const LinearNF& linear, const nf::CartesianPoly4<double>& H1,
                                    const nf::CartesianPoly4<double>& H2, double chop_tol = 1e-12);

/// Whole chain at a given mu (normally mu_b): L2, linear analysis, Burgoyne basis,
/// Taylor coefficients and the Lie transform.
struct NormalFormReport {
  double mu = 0.0;
  EquilibriumPoint l2;
  LinearAnalysis linear;
  LinearNF basis;
  TaylorCoefficients taylor;
  NormalFormResult result;
};

NormalFormReport normal_form_report(double mu);

// Versal deformation

struct VersalParams {
  double nu1 = 0.0;
  double nu2 = 0.0;
};

/// Throws DomainError when a + b + ab + 1 < 0 or the nu1 radicand is negative.
VersalParams versal_params(double a, double b);

/// Generators e1, e2 of the deformation D = nu1 e1 + nu2 e2.
std::array<Matrix4, 2> versal_generators();

/// B + nu1 e1 + nu2 e2 with B the unit-frequency normal matrix.
Matrix4 versal_matrix(const VersalParams& nu);

/// lambda^2 = -((1+nu1)^2 + nu2) +- 2|1+nu1| sqrt(nu2), the roots of the characteristic
/// polynomial of versal_matrix; ordered as biquadratic_roots.
std::array<std::complex<double>, 4> versal_eigenvalues(const VersalParams& nu);

/// 1/2 (R^2 + Theta^2/r^2) + nu2/2 r^2 + (1+nu1) Theta.
nf::LaurentFourierPoly versal_hamiltonian(const VersalParams& nu);

/// Splits H into powers of the scaling parameter under r -> s r, R -> s^2 R,
/// Theta -> s^3 Theta, nu -> s^2 nu with multiplier s^-3. The detuning term
/// nu/2 r^2 is added before scaling. Keys are the powers of s.
std::map<int, nf::LaurentFourierPoly> meyer_mcswiggen_orders(const nf::LaurentFourierPoly& H, double nu);

enum class ManifoldTopology { Connected, ShrunkOrAbsent };

const char* to_string(ManifoldTopology t) noexcept;

struct PhasePoint {
  double r = 0.0;
  double R = 0.0;
};

/// H = 1/2 (R^2 + Theta^2/r^2) + nu/2 r^2 + h1 r^4 on r > 0 with Theta a parameter.
class TruncatedSystem {
public:
  /// Throws DomainError unless h1 > 0.
  TruncatedSystem(double nu, double h1, double Theta);

  double nu() const noexcept { return nu_; }
  double h1() const noexcept { return h1_; }
  double Theta() const noexcept { return Theta_; }

  double hamiltonian(double r, double R) const;
  double potential(double r) const;
  /// dV/dr = -Theta^2/r^3 + nu r + 4 h1 r^3.
  double radial_force(double r) const;

  /// Equilibria with R = 0 and r >= 0. For Theta = 0 the origin is included.
  std::vector<PhasePoint> equilibria() const;

  /// Closed curves of the level set H = energy for r in (0, r_max], one per
  /// connected interval of allowed r; each runs along R >= 0 and back along R <= 0.
  std::vector<std::vector<PhasePoint>> level_set(double energy, double r_max, int samples = 400) const;

  /// The H = 0 loop through the origin for Theta = 0 and nu < 0.
  std::vector<PhasePoint> homoclinic_loop(int samples = 400) const;

  ManifoldTopology classify() const noexcept;

private:
  double nu_, h1_, Theta_;
};

}  // namespace r4bp
