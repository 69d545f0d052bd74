#pragma once

// Exact algebra on polynomials in (r, R, Theta) with Laurent powers of r and a
// real Fourier basis {cos m theta, sin m theta} in the angle. (r, R) and
// (theta, Theta) are canonically conjugate.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "r4bp/errors.hpp"

namespace r4bp::nf {

using Rational = boost::multiprecision::cpp_rational;

enum class Phase : std::uint8_t { Cos = 0, Sin = 1 };

/// r^r_pow R^R_pow Theta^Theta_pow {cos|sin}(harmonic * theta)
struct Monomial {
  int r_pow = 0;
  int R_pow = 0;
  int Theta_pow = 0;
  int harmonic = 0;
  Phase phase = Phase::Cos;

  auto operator<=>(const Monomial&) const = default;
};

/// Lowest Laurent power of r the algebra accepts.
inline constexpr int kMinRPower = -8;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static bool is_zero(double c) noexcept { return c == 0.0; }
  static double to_double(double c) noexcept { return c; }
  static double magnitude(double c) noexcept { return std::abs(c); }
  static std::string to_string(double c) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    return buf;
  }
  /// Residual test used by verifications: exact for rationals, relative for doubles.
  static bool negligible(double residual, double scale) noexcept {
    return residual <= 1e-11 * std::max(1.0, scale);
  }
};

template <>
struct ScalarTraits<Rational> {
  static bool is_zero(const Rational& c) { return c == 0; }
  static double to_double(const Rational& c) { return c.convert_to<double>(); }
  static double magnitude(const Rational& c) { return std::abs(c.convert_to<double>()); }
  static std::string to_string(const Rational& c) { return c.str(); }
  static bool negligible(double residual, double) noexcept { return residual == 0.0; }
};

template <class S>
class BasicPoly {
public:
  using Scalar = S;
  using Traits = ScalarTraits<S>;
  using Terms = std::map<Monomial, S>;

  BasicPoly() = default;

  static BasicPoly constant(const S& c) { return monomial({}, c); }
  static BasicPoly monomial(const Monomial& m, const S& c) {
    BasicPoly p;
    p.add_term(m, c);
    return p;
  }
  static BasicPoly r(int power = 1) { return monomial({power, 0, 0, 0, Phase::Cos}, S(1)); }
  static BasicPoly R(int power = 1) { return monomial({0, power, 0, 0, Phase::Cos}, S(1)); }
  static BasicPoly Theta(int power = 1) { return monomial({0, 0, power, 0, Phase::Cos}, S(1)); }
  static BasicPoly cos(int m) { return monomial({0, 0, 0, m, Phase::Cos}, S(1)); }
  static BasicPoly sin(int m) { return monomial({0, 0, 0, m, Phase::Sin}, S(1)); }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  S coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? S(0) : it->second;
  }

  /// Adds c * m, keeping canonical form (no zero coefficients, no sin(0 theta)).
  void add_term(Monomial m, const S& c) {
    if (m.harmonic < 0) {
      m.harmonic = -m.harmonic;
      if (m.phase == Phase::Sin) {
        add_term(m, -c);
        return;
      }
    }
    if (m.harmonic == 0 && m.phase == Phase::Sin) return;
    if (m.r_pow < kMinRPower) throw DomainError("Laurent power of r below the supported bound");
    if (m.R_pow < 0 || m.Theta_pow < 0) throw DomainError("negative power of R or Theta");
    if (Traits::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  BasicPoly& operator+=(const BasicPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  BasicPoly& operator-=(const BasicPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  BasicPoly& operator*=(const S& s) {
    if (Traits::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend BasicPoly operator+(BasicPoly a, const BasicPoly& b) { return a += b; }
  friend BasicPoly operator-(BasicPoly a, const BasicPoly& b) { return a -= b; }
  friend BasicPoly operator-(BasicPoly a) { return a *= S(-1); }
  friend BasicPoly operator*(BasicPoly a, const S& s) { return a *= s; }
  friend BasicPoly operator*(const S& s, BasicPoly a) { return a *= s; }

  friend BasicPoly operator*(const BasicPoly& a, const BasicPoly& b) {
    BasicPoly out;
    const S half = S(1) / S(2);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        const S c = ca * cb;
        Monomial base{ma.r_pow + mb.r_pow, ma.R_pow + mb.R_pow, ma.Theta_pow + mb.Theta_pow, 0, Phase::Cos};
        const int p = ma.harmonic, q = mb.harmonic;
        if (p == 0 || q == 0) {
          // cos(0) = 1: no product-to-sum needed.
          Monomial m = base;
          m.harmonic = p + q;
          m.phase = p == 0 ? mb.phase : ma.phase;
          out.add_term(m, c);
          continue;
        }
        const S hc = half * c;
        auto term = [&](int harmonic, Phase ph, const S& coef) {
          Monomial m = base;
          m.harmonic = harmonic;
          m.phase = ph;
          out.add_term(m, coef);
        };
        if (ma.phase == Phase::Cos && mb.phase == Phase::Cos) {
          term(p - q, Phase::Cos, hc);
          term(p + q, Phase::Cos, hc);
        } else if (ma.phase == Phase::Sin && mb.phase == Phase::Sin) {
          term(p - q, Phase::Cos, hc);
          term(p + q, Phase::Cos, -hc);
        } else if (ma.phase == Phase::Sin) {  // sin p cos q
          term(p + q, Phase::Sin, hc);
          term(p - q, Phase::Sin, hc);
        } else {  // cos p sin q
          term(p + q, Phase::Sin, hc);
          term(q - p, Phase::Sin, hc);
        }
      }
    }
    return out;
  }
  BasicPoly& operator*=(const BasicPoly& o) { return *this = *this * o; }

  BasicPoly pow(int n) const {
    if (n < 0) throw DomainError("negative polynomial power");
    BasicPoly out = constant(S(1));
    for (int i = 0; i < n; ++i) out *= *this;
    return out;
  }

  friend bool operator==(const BasicPoly& a, const BasicPoly& b) { return a.terms_ == b.terms_; }

  double evaluate(double r, double theta, double R, double Theta) const {
    double sum = 0.0;
    for (const auto& [m, c] : terms_) {
      const double trig = m.phase == Phase::Cos ? std::cos(m.harmonic * theta) : std::sin(m.harmonic * theta);
      sum += Traits::to_double(c) * std::pow(r, m.r_pow) * std::pow(R, m.R_pow) * std::pow(Theta, m.Theta_pow) * trig;
    }
    return sum;
  }

  double max_abs_coefficient() const {
    double mx = 0.0;
    for (const auto& [m, c] : terms_) mx = std::max(mx, Traits::magnitude(c));
    return mx;
  }

  int max_R_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.R_pow);
    return d;
  }

  /// Canonical-form validator.
  bool is_canonical() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) {
      const Monomial& m = kv.first;
      return !Traits::is_zero(kv.second) && m.harmonic >= 0 && !(m.harmonic == 0 && m.phase == Phase::Sin) &&
             m.r_pow >= kMinRPower && m.R_pow >= 0 && m.Theta_pow >= 0;
    });
  }

  /// Drops terms whose magnitude is at most tol.
  BasicPoly chop(double tol) const {
    BasicPoly out;
    for (const auto& [m, c] : terms_) {
      if (Traits::magnitude(c) > tol) out.terms_.emplace(m, c);
    }
    return out;
  }

  /// One term per line in lexicographic (r, R, Theta, harmonic, phase) order:
  /// "<coef> <r_pow> <R_pow> <Theta_pow> <harmonic> <c|s>".
  std::string serialize() const {
    std::ostringstream os;
    for (const auto& [m, c] : terms_) {
      os << Traits::to_string(c) << ' ' << m.r_pow << ' ' << m.R_pow << ' ' << m.Theta_pow << ' ' << m.harmonic << ' '
         << (m.phase == Phase::Cos ? 'c' : 's') << '\n';
    }
    return os.str();
  }

  static BasicPoly parse(std::istream& in) {
    BasicPoly p;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      std::string coef;
      Monomial m;
      char ph = 'c';
      if (!(ls >> coef >> m.r_pow >> m.R_pow >> m.Theta_pow >> m.harmonic >> ph) || (ph != 'c' && ph != 's')) {
        throw DomainError("malformed polynomial line: " + line);
      }
      m.phase = ph == 'c' ? Phase::Cos : Phase::Sin;
      p.add_term(m, S(coef_from_string(coef)));
    }
    return p;
  }

  /// Human-readable rendering, e.g. "2.5 r^2 R cos(3t)".
  std::string pretty() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << Traits::to_string(c);
      if (m.r_pow) os << " r^" << m.r_pow;
      if (m.R_pow) os << " R^" << m.R_pow;
      if (m.Theta_pow) os << " Th^" << m.Theta_pow;
      if (m.harmonic) os << (m.phase == Phase::Cos ? " cos(" : " sin(") << m.harmonic << "t)";
    }
    return os.str();
  }

private:
  static auto coef_from_string(const std::string& s) {
    if constexpr (std::is_same_v<S, double>) {
      return std::stod(s);
    } else {
      return S(s);
    }
  }

  Terms terms_;
};

using LaurentFourierPoly = BasicPoly<double>;
using ExactPoly = BasicPoly<Rational>;

namespace detail {
template <class S, class F>
BasicPoly<S> map_terms(const BasicPoly<S>& p, F&& f) {
  BasicPoly<S> out;
  for (const auto& [m, c] : p.terms()) f(out, m, c);
  return out;
}
}  // namespace detail

template <class S>
BasicPoly<S> d_r(const BasicPoly<S>& p) {
  return detail::map_terms(p, [](BasicPoly<S>& out, Monomial m, const S& c) {
    if (m.r_pow == 0) return;
    const int k = m.r_pow;
    --m.r_pow;
    out.add_term(m, c * S(k));
  });
}

template <class S>
BasicPoly<S> d_R(const BasicPoly<S>& p) {
  return detail::map_terms(p, [](BasicPoly<S>& out, Monomial m, const S& c) {
    if (m.R_pow == 0) return;
    const int k = m.R_pow;
    --m.R_pow;
    out.add_term(m, c * S(k));
  });
}

template <class S>
BasicPoly<S> d_Theta(const BasicPoly<S>& p) {
  return detail::map_terms(p, [](BasicPoly<S>& out, Monomial m, const S& c) {
    if (m.Theta_pow == 0) return;
    const int k = m.Theta_pow;
    --m.Theta_pow;
    out.add_term(m, c * S(k));
  });
}

template <class S>
BasicPoly<S> d_theta(const BasicPoly<S>& p) {
  return detail::map_terms(p, [](BasicPoly<S>& out, Monomial m, const S& c) {
    if (m.harmonic == 0) return;
    const int k = m.harmonic;
    if (m.phase == Phase::Cos) {
      m.phase = Phase::Sin;
      out.add_term(m, -c * S(k));
    } else {
      m.phase = Phase::Cos;
      out.add_term(m, c * S(k));
    }
  });
}

/// Terms with harmonic 0 (the theta-mean), rendered for error reports.
template <class S>
std::vector<std::string> mean_terms(const BasicPoly<S>& p) {
  std::vector<std::string> out;
  for (const auto& [m, c] : p.terms()) {
    if (m.harmonic == 0) out.push_back(BasicPoly<S>::monomial(m, c).pretty());
  }
  return out;
}

/// Inverse of d/dtheta on zero-mean polynomials. Throws MeanObstructionError otherwise.
template <class S>
BasicPoly<S> antiderivative_theta(const BasicPoly<S>& p) {
  if (auto bad = mean_terms(p); !bad.empty()) throw MeanObstructionError(std::move(bad));
  return detail::map_terms(p, [](BasicPoly<S>& out, Monomial m, const S& c) {
    const S k(m.harmonic);
    if (m.phase == Phase::Cos) {
      m.phase = Phase::Sin;
      out.add_term(m, c / k);
    } else {
      m.phase = Phase::Cos;
      out.add_term(m, -c / k);
    }
  });
}

/// -r d/dR
template <class S>
BasicPoly<S> op_LN(const BasicPoly<S>& p) {
  return detail::map_terms(p, [](BasicPoly<S>& out, Monomial m, const S& c) {
    if (m.R_pow == 0) return;
    const int k = m.R_pow;
    --m.R_pow;
    ++m.r_pow;
    out.add_term(m, -c * S(k));
  });
}

/// {W, Theta + r^2/2} = dW/dtheta - r dW/dR.
template <class S>
BasicPoly<S> op_L(const BasicPoly<S>& w) {
  return d_theta(w) + op_LN(w);
}

/// {f, g} = f_r g_R - f_R g_r + f_theta g_Theta - f_Theta g_theta.
template <class S>
BasicPoly<S> poisson_bracket(const BasicPoly<S>& f, const BasicPoly<S>& g) {
  BasicPoly<S> out = d_r(f) * d_R(g);
  out -= d_R(f) * d_r(g);
  out += d_theta(f) * d_Theta(g);
  out -= d_Theta(f) * d_theta(g);
  return out;
}

/// f = star + prime with star theta-free and prime of zero theta-mean.
template <class S>
std::pair<BasicPoly<S>, BasicPoly<S>> split_mean(const BasicPoly<S>& f) {
  std::pair<BasicPoly<S>, BasicPoly<S>> out;
  for (const auto& [m, c] : f.terms()) (m.harmonic == 0 ? out.first : out.second).add_term(m, c);
  return out;
}

/// Solves {W, Theta + r^2/2} = rhs for zero-mean rhs by the terminating series
/// W = sum_k (-LS^-1 LN)^k LS^-1 rhs, then checks the equation by back-substitution.
template <class S>
BasicPoly<S> solve_homological(const BasicPoly<S>& rhs, int* series_terms = nullptr) {
  BasicPoly<S> term = antiderivative_theta(rhs);
  BasicPoly<S> w = term;
  int n = 1;
  while (!term.is_zero()) {
    if (n > 64) throw ConsistencyError("homological series did not terminate");
    term = -antiderivative_theta(op_LN(term));
    if (term.is_zero()) break;
    w += term;
    ++n;
  }
  if (series_terms) *series_terms = n;
  const BasicPoly<S> residual = op_L(w) - rhs;
  const double scale = std::max(rhs.max_abs_coefficient(), w.max_abs_coefficient());
  if (!ScalarTraits<S>::negligible(residual.max_abs_coefficient(), scale)) {
    throw ConsistencyError("homological equation back-substitution failed");
  }
  return w;
}

template <class S>
using Matrix4T = std::array<std::array<S, 4>, 4>;

/// Dense polynomial of total degree <= 4 in four variables.
template <class S>
class CartesianPoly4 {
public:
  static constexpr int kMaxDegree = 4;
  using Exponents = std::array<int, 4>;

  CartesianPoly4() { coeffs_.fill(S(0)); }

  const S& coeff(const Exponents& e) const { return coeffs_[index(e)]; }
  void set(const Exponents& e, const S& c) { coeffs_[index(e)] = c; }
  void add(const Exponents& e, const S& c) { coeffs_[index(e)] += c; }

  template <class F>
  void for_each_nonzero(F&& f) const {
    for (int a = 0; a <= kMaxDegree; ++a)
      for (int b = 0; a + b <= kMaxDegree; ++b)
        for (int c = 0; a + b + c <= kMaxDegree; ++c)
          for (int d = 0; a + b + c + d <= kMaxDegree; ++d) {
            const Exponents e{a, b, c, d};
            const S& v = coeffs_[index(e)];
            if (!ScalarTraits<S>::is_zero(v)) f(e, v);
          }
  }

  double evaluate(const std::array<double, 4>& x) const {
    double sum = 0.0;
    for_each_nonzero([&](const Exponents& e, const S& c) {
      sum += ScalarTraits<S>::to_double(c) * std::pow(x[0], e[0]) * std::pow(x[1], e[1]) * std::pow(x[2], e[2]) *
             std::pow(x[3], e[3]);
    });
    return sum;
  }

private:
  static std::size_t index(const Exponents& e) {
    int total = 0;
    for (int v : e) {
      if (v < 0) throw DomainError("negative exponent");
      total += v;
    }
    if (total > kMaxDegree) throw DomainError("CartesianPoly4 degree exceeds 4");
    return static_cast<std::size_t>(((e[0] * 5 + e[1]) * 5 + e[2]) * 5 + e[3]);
  }

  std::array<S, 625> coeffs_;
};

/// Symplectic polar images of z1..z4:
/// z1 = r cos, z2 = r sin, z3 = R cos - (Theta/r) sin, z4 = R sin + (Theta/r) cos.
template <class S>
std::array<BasicPoly<S>, 4> polar_coordinates() {
  using P = BasicPoly<S>;
  const P theta_over_r = P::Theta() * P::r(-1);
  return {P::r() * P::cos(1), P::r() * P::sin(1), P::R() * P::cos(1) - theta_over_r * P::sin(1),
          P::R() * P::sin(1) + theta_over_r * P::cos(1)};
}

/// Substitutes x = P z followed by the symplectic polar map.
template <class S>
BasicPoly<S> cart_to_polar(const CartesianPoly4<S>& p, const Matrix4T<S>& basis) {
  using P = BasicPoly<S>;
  const auto z = polar_coordinates<S>();
  std::array<std::array<P, CartesianPoly4<S>::kMaxDegree + 1>, 4> powers;
  for (int k = 0; k < 4; ++k) {
    P xk;
    for (int c = 0; c < 4; ++c) {
      if (!ScalarTraits<S>::is_zero(basis[k][c])) xk += z[c] * basis[k][c];
    }
    powers[k][0] = P::constant(S(1));
    for (int e = 1; e <= CartesianPoly4<S>::kMaxDegree; ++e) powers[k][e] = powers[k][e - 1] * xk;
  }
  P out;
  p.for_each_nonzero([&](const auto& e, const S& c) {
    out += powers[0][e[0]] * powers[1][e[1]] * powers[2][e[2]] * powers[3][e[3]] * c;
  });
  return out;
}

template <class S>
Matrix4T<S> identity_basis() {
  Matrix4T<S> m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = S(i == j ? 1 : 0);
  return m;
}

}  // namespace r4bp::nf
