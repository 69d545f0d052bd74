#include "r4bp/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>
#include <boost/math/tools/roots.hpp>

#include "r4bp/errors.hpp"

namespace r4bp {

using nf::LaurentFourierPoly;
using nf::Monomial;
using nf::Phase;

Matrix4 symplectic_form() {
  Matrix4 j = Matrix4::Zero();
  j.block<2, 2>(0, 2) = Eigen::Matrix2d::Identity();
  j.block<2, 2>(2, 0) = -Eigen::Matrix2d::Identity();
  return j;
}

Matrix4 burgoyne_semisimple(double a, double b, double omega) {
  const double w2 = omega * omega;
  Matrix4 s;
  s << 0, 3 * w2 + 2 * b + a - 1, 3 * w2 + a - 3, 0,
      -(3 * w2 + 2 * a + b - 1), 0, 0, 3 * w2 + b - 3,
      a * a - b + a * (3 * w2 - 2), 0, 0, 3 * w2 + 2 * a + b - 1,
      0, -a + b * (3 * w2 + b - 2), -(3 * w2 + 2 * b + a - 1), 0;
  return s / (2 * w2);
}

Matrix4 burgoyne_nilpotent(double a, double b, double omega) {
  const double w2 = omega * omega;
  Matrix4 n;
  n << 0, -(w2 + 2 * b + a - 1), -(w2 + a - 3), 0,
      w2 + 2 * a + b - 1, 0, 0, -(w2 + b - 3),
      -(a * a - b + a * (w2 - 2)), 0, 0, -(w2 + 2 * a + b - 1),
      0, a - b * (w2 + b - 2), w2 + 2 * b + a - 1, 0;
  return n / (2 * w2);
}

Matrix4 expected_normal_matrix(double omega, int eps_sign) {
  Matrix4 b = Matrix4::Zero();
  b(0, 1) = -omega;
  b(1, 0) = omega;
  b(2, 3) = -omega;
  b(3, 2) = omega;
  b(2, 0) = eps_sign;
  b(3, 1) = eps_sign;
  return b;
}

LinearNFResiduals residuals(const LinearNF& nf) {
  const Matrix4 j = symplectic_form();
  LinearNFResiduals r;
  r.sum = (nf.A - nf.Sigma - nf.N).cwiseAbs().maxCoeff();
  r.nilpotent = (nf.N * nf.N).cwiseAbs().maxCoeff();
  r.commutator = (nf.Sigma * nf.N - nf.N * nf.Sigma).cwiseAbs().maxCoeff();
  r.symplectic = (nf.P.transpose() * j * nf.P - j).cwiseAbs().maxCoeff();
  r.normal_form = (nf.B - expected_normal_matrix(nf.omega, nf.eps_sign)).cwiseAbs().maxCoeff();
  return r;
}

LinearNF burgoyne_decompose(const Matrix4& A, double omega, double tol) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("burgoyne_decompose: omega must be positive");
  const double a = A(2, 0), b = A(3, 1);
  if ((A - hamiltonian_matrix(a, b)).cwiseAbs().maxCoeff() > 0.0) {
    throw DomainError("burgoyne_decompose: matrix is not of the collinear-point form");
  }

  LinearNF out;
  out.A = A;
  out.omega = omega;
  out.Sigma = burgoyne_semisimple(a, b, omega);
  out.N = burgoyne_nilpotent(a, b, omega);
  out.N31 = out.N(2, 0);

  const Matrix4 j = symplectic_form();
  auto form = [&](const Eigen::Vector4d& x, const Eigen::Vector4d& y) { return x.dot(j * y); };

  const Eigen::Vector4d e1 = Eigen::Vector4d::UnitX();
  const double e1_ne1 = form(e1, out.N * e1);
  if (std::abs(e1_ne1) < 1e-12) throw DomainError("burgoyne_decompose: <e1, N e1> vanishes");

  out.eps_sign = out.N31 > 0 ? 1 : -1;
  const double eps = out.eps_sign;
  const double w2 = omega * omega;
  const Eigen::Vector4d z0 = e1 / std::sqrt(std::abs(e1_ne1));
  const Eigen::Vector4d z1 = z0 + eps / (2 * w2) * form(z0, out.Sigma * z0) * (out.N * out.Sigma * z0);
  const Eigen::Vector4d z2 = out.Sigma * z1 / omega;
  const Eigen::Vector4d z3 = eps * out.N * z1;
  const Eigen::Vector4d z4 = eps / omega * out.Sigma * out.N * z1;
  out.P << z1, z2, z3, z4;
  out.B = out.P.lu().solve(A * out.P);

  const LinearNFResiduals r = residuals(out);
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  auto require = [&](double v, const char* what) {
    if (!(v <= tol * scale)) {
      throw ConsistencyError(std::string("burgoyne_decompose: ") + what + " residual " + std::to_string(v));
    }
  };
  require(r.sum, "A = Sigma + N");
  require(r.nilpotent, "N^2 = 0");
  require(r.commutator, "[Sigma, N] = 0");
  require(r.symplectic, "P^T J P = J");
  require(r.normal_form, "normal matrix");
  return out;
}

nf::CartesianPoly4<double> cubic_term(const TaylorCoefficients& t) {
  nf::CartesianPoly4<double> p;
  p.set({3, 0, 0, 0}, t.a3);
  p.set({2, 1, 0, 0}, t.b3);
  p.set({1, 2, 0, 0}, t.c3);
  p.set({0, 3, 0, 0}, t.d3);
  return p;
}

nf::CartesianPoly4<double> quartic_term(const TaylorCoefficients& t) {
  nf::CartesianPoly4<double> p;
  p.set({4, 0, 0, 0}, t.a4);
  p.set({3, 1, 0, 0}, t.b4);
  p.set({2, 2, 0, 0}, t.c4);
  p.set({1, 3, 0, 0}, t.d4);
  p.set({0, 4, 0, 0}, t.e4);
  return p;
}

nf::Matrix4T<double> to_array(const Matrix4& m) {
  nf::Matrix4T<double> out{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) out[i][k] = m(i, k);
  return out;
}

const std::array<Monomial, 9>& normal_form_monomials() {
  static const std::array<Monomial, 9> m{{
      {4, 0, 0, 0, Phase::Cos},   // r^4
      {0, 4, 0, 0, Phase::Cos},   // R^4
      {2, 2, 0, 0, Phase::Cos},   // r^2 R^2
      {2, 0, 1, 0, Phase::Cos},   // r^2 Theta
      {0, 2, 1, 0, Phase::Cos},   // R^2 Theta
      {0, 0, 2, 0, Phase::Cos},   // Theta^2
      {-2, 2, 2, 0, Phase::Cos},  // R^2 Theta^2 / r^2
      {-2, 0, 3, 0, Phase::Cos},  // Theta^3 / r^2
      {-4, 0, 4, 0, Phase::Cos},  // Theta^4 / r^4
  }};
  return m;
}

NormalFormResult deprit_normal_form(const nf::Matrix4T<double>& P, const nf::CartesianPoly4<double>& H1,
                                    const nf::CartesianPoly4<double>& H2, double chop_tol) {
  NormalFormResult out;
  out.H00 = LaurentFourierPoly::Theta() + LaurentFourierPoly::r(2) * 0.5;
  out.H1_polar = nf::cart_to_polar(H1, P);
  out.H2_polar = nf::cart_to_polar(H2, P);

  auto [star1, prime1] = nf::split_mean(out.H1_polar);
  const double scale1 = out.H1_polar.max_abs_coefficient();
  if (!star1.chop(chop_tol * scale1).is_zero()) throw MeanObstructionError(nf::mean_terms(star1));
  out.W1 = nf::solve_homological(prime1);

  const LaurentFourierPoly tilde2 = out.H2_polar + nf::poisson_bracket(out.H1_polar, out.W1);
  auto [star2, prime2] = nf::split_mean(tilde2);
  out.W2 = nf::solve_homological(prime2);
  out.H02 = star2.chop(chop_tol * std::max(star2.max_abs_coefficient(), tilde2.max_abs_coefficient()));

  const auto& mons = normal_form_monomials();
  if (!out.H02.is_zero()) {
    for (const auto& [m, c] : out.H02.terms()) {
      if (std::find(mons.begin(), mons.end(), m) == mons.end()) {
        throw ConsistencyError("second-order normal form has an unexpected term " +
                               LaurentFourierPoly::monomial(m, c).pretty());
      }
    }
    for (const auto& m : mons) {
      if (out.H02.coefficient(m) == 0.0) {
        throw ConsistencyError("second-order normal form lacks the term " + LaurentFourierPoly::monomial(m, 1.0).pretty());
      }
    }
  }
  for (std::size_t i = 0; i < mons.size(); ++i) out.h[i] = kNormalFormSigns[i] * out.H02.coefficient(mons[i]);
  return out;
}

NormalFormResult deprit_normal_form(const LinearNF& linear, const nf::CartesianPoly4<double>& H1,
                                    const nf::CartesianPoly4<double>& H2, double chop_tol) {
  if (linear.eps_sign != -1) throw DomainError("deprit_normal_form: the quadratic part Theta + r^2/2 needs eps = -1");
  return deprit_normal_form(to_array(linear.P), H1, H2, chop_tol);
}

NormalFormReport normal_form_report(double mu) {
  NormalFormReport rep;
  rep.mu = mu;
  const SystemConfig cfg(mu);
  rep.l2 = find_l2(cfg);
  rep.linear = analyze(cfg, rep.l2);
  const double w2 = (2.0 - rep.linear.a - rep.linear.b) / 2.0;
  if (!(w2 > 0.0)) throw DomainError("normal_form_report: no double frequency at this mu");
  rep.basis = burgoyne_decompose(rep.linear.matrix_A, std::sqrt(w2));
  rep.taylor = taylor_coefficients(cfg, rep.l2.position);
  rep.result = deprit_normal_form(rep.basis, cubic_term(rep.taylor), quartic_term(rep.taylor));
  return rep;
}

VersalParams versal_params(double a, double b) {
  const double s = a + b + a * b + 1.0;
  if (s < 0.0) throw DomainError("versal_params: a + b + ab + 1 is negative");
  const double root = std::sqrt(s);
  const double q = 0.5 - 0.25 * (a + b) + 0.5 * root;
  if (q < 0.0) throw DomainError("versal_params: nu1 radicand is negative");
  return {std::sqrt(q) - 1.0, 0.5 - 0.25 * (a + b) - 0.5 * root};
}

std::array<Matrix4, 2> versal_generators() {
  Matrix4 e1 = Matrix4::Zero(), e2 = Matrix4::Zero();
  e1(0, 1) = -1;
  e1(1, 0) = 1;
  e1(2, 3) = -1;
  e1(3, 2) = 1;
  e2(0, 2) = 1;
  e2(1, 3) = 1;
  return {e1, e2};
}

Matrix4 versal_matrix(const VersalParams& nu) {
  const auto [e1, e2] = versal_generators();
  return expected_normal_matrix(1.0, -1) + nu.nu1 * e1 + nu.nu2 * e2;
}

std::array<std::complex<double>, 4> versal_eigenvalues(const VersalParams& nu) {
  using C = std::complex<double>;
  const double k = 1.0 + nu.nu1;
  const C split = 2.0 * std::abs(k) * std::sqrt(C(nu.nu2, 0.0));
  const C l2a = -(k * k + nu.nu2) + split;
  const C l2b = -(k * k + nu.nu2) - split;
  std::array<C, 4> out{std::sqrt(l2a), -std::sqrt(l2a), std::sqrt(l2b), -std::sqrt(l2b)};
  std::sort(out.begin(), out.end(), [](const C& x, const C& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return out;
}

LaurentFourierPoly versal_hamiltonian(const VersalParams& nu) {
  using P = LaurentFourierPoly;
  return (P::R(2) + P::Theta(2) * P::r(-2)) * 0.5 + P::r(2) * (0.5 * nu.nu2) + P::Theta() * (1.0 + nu.nu1);
}

std::map<int, LaurentFourierPoly> meyer_mcswiggen_orders(const LaurentFourierPoly& H, double nu) {
  std::map<int, LaurentFourierPoly> out;
  for (const auto& [m, c] : H.terms()) {
    out[m.r_pow + 2 * m.R_pow + 3 * m.Theta_pow - 3].add_term(m, c);
  }
  // nu r^2 / 2 carries an extra factor s^2 from nu.
  out[2 + 2 - 3].add_term({2, 0, 0, 0, Phase::Cos}, 0.5 * nu);
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

const char* to_string(ManifoldTopology t) noexcept {
  switch (t) {
    case ManifoldTopology::Connected: return "connected";
    case ManifoldTopology::ShrunkOrAbsent: return "shrunk-or-absent";
  }
  return "unknown";
}

TruncatedSystem::TruncatedSystem(double nu, double h1, double Theta) : nu_(nu), h1_(h1), Theta_(Theta) {
  if (!(h1 > 0.0)) throw DomainError("TruncatedSystem: h1 must be positive");
  if (!std::isfinite(nu) || !std::isfinite(Theta)) throw DomainError("TruncatedSystem: non-finite parameter");
}

double TruncatedSystem::potential(double r) const {
  const double r2 = r * r;
  const double centrifugal = Theta_ == 0.0 ? 0.0 : 0.5 * Theta_ * Theta_ / r2;
  return centrifugal + 0.5 * nu_ * r2 + h1_ * r2 * r2;
}

double TruncatedSystem::hamiltonian(double r, double R) const { return 0.5 * R * R + potential(r); }

double TruncatedSystem::radial_force(double r) const {
  const double centrifugal = Theta_ == 0.0 ? 0.0 : -Theta_ * Theta_ / (r * r * r);
  return centrifugal + nu_ * r + 4.0 * h1_ * r * r * r;
}

std::vector<PhasePoint> TruncatedSystem::equilibria() const {
  std::vector<PhasePoint> out;
  if (Theta_ == 0.0) {
    out.push_back({0.0, 0.0});
    if (nu_ < 0.0) out.push_back({std::sqrt(-nu_ / (4.0 * h1_)), 0.0});
    return out;
  }
  // With s = r^2: 4 h1 s^3 + nu s^2 - Theta^2 has exactly one positive root.
  auto f = [&](double s) { return (4.0 * h1_ * s + nu_) * s * s - Theta_ * Theta_; };
  double hi = 1.0;
  while (f(hi) <= 0.0) hi *= 2.0;
  boost::uintmax_t iters = 200;
  const auto [lo_s, hi_s] =
      boost::math::tools::toms748_solve(f, 0.0, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  out.push_back({std::sqrt(0.5 * (lo_s + hi_s)), 0.0});
  return out;
}

std::vector<std::vector<PhasePoint>> TruncatedSystem::level_set(double energy, double r_max, int samples) const {
  if (!(r_max > 0.0) || samples < 2) throw DomainError("level_set: need r_max > 0 and at least two samples");
  auto g = [&](double r) { return energy - potential(r); };
  const double r0 = Theta_ == 0.0 ? 0.0 : r_max * 1e-6;
  auto refine = [&](double a, double b) {
    boost::uintmax_t iters = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(g, a, b, boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (lo + hi);
  };

  std::vector<std::pair<double, double>> intervals;
  double prev_r = r0, prev_g = g(r0);
  double start = prev_g >= 0.0 ? r0 : -1.0;
  for (int k = 1; k <= samples; ++k) {
    const double r = r0 + (r_max - r0) * k / samples;
    const double gr = g(r);
    if (prev_g < 0.0 && gr >= 0.0) start = gr == 0.0 ? r : refine(prev_r, r);
    if (prev_g >= 0.0 && gr < 0.0) {
      intervals.emplace_back(start, prev_g == 0.0 ? prev_r : refine(prev_r, r));
      start = -1.0;
    }
    prev_r = r;
    prev_g = gr;
  }
  if (start >= 0.0) intervals.emplace_back(start, r_max);

  std::vector<std::vector<PhasePoint>> curves;
  for (const auto& [a, b] : intervals) {
    std::vector<PhasePoint> curve;
    for (int k = 0; k <= samples; ++k) {
      const double r = a + (b - a) * 0.5 * (1.0 - std::cos(M_PI * k / samples));
      curve.push_back({r, std::sqrt(std::max(0.0, 2.0 * g(r)))});
    }
    for (int k = samples; k >= 0; --k) curve.push_back({curve[k].r, -curve[k].R});
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::vector<PhasePoint> TruncatedSystem::homoclinic_loop(int samples) const {
  if (Theta_ != 0.0 || !(nu_ < 0.0)) throw DomainError("homoclinic_loop: requires Theta = 0 and nu < 0");
  if (samples < 2) throw DomainError("homoclinic_loop: at least two samples");
  const double r_end = std::sqrt(-nu_ / (2.0 * h1_));
  std::vector<PhasePoint> loop;
  for (int k = 0; k <= samples; ++k) {
    const double r = r_end * 0.5 * (1.0 - std::cos(M_PI * k / samples));
    const double r2 = r * r;
    loop.push_back({r, std::sqrt(std::max(0.0, -nu_ * r2 - 2.0 * h1_ * r2 * r2))});
  }
  for (int k = samples - 1; k >= 0; --k) loop.push_back({loop[k].r, -loop[k].R});
  return loop;
}

ManifoldTopology TruncatedSystem::classify() const noexcept {
  return nu_ < 0.0 ? ManifoldTopology::Connected : ManifoldTopology::ShrunkOrAbsent;
}

}  // namespace r4bp
