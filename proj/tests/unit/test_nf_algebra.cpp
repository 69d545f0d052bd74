#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "r4bp/errors.hpp"
#include "r4bp/nf_algebra.hpp"

namespace {

namespace oracle = r4bp::testing;

using namespace r4bp;
using namespace r4bp::nf;
using r4bp::testing::random_poly;
using r4bp::testing::random_zero_mean;
using Q = Rational;
using EP = ExactPoly;
using DP = LaurentFourierPoly;

TEST(NfAlgebra, CanonicalRelations) {
  EXPECT_EQ(poisson_bracket(EP::r(), EP::R()), EP::constant(1));
  EXPECT_EQ(poisson_bracket(EP::r(), EP::Theta()), EP());
  EXPECT_EQ(poisson_bracket(EP::R(), EP::Theta()), EP());
  // theta enters only through cos/sin: {cos t, Theta} = -sin t.
  EXPECT_EQ(poisson_bracket(EP::cos(1), EP::Theta()), -EP::sin(1));
}

TEST(NfAlgebra, BracketWithQuadraticPartIsTheHomologicalOperator) {
  const EP h00 = EP::Theta() + EP::r(2) * Q(1, 2);
  const EP w = EP::r() * EP::R() * EP::cos(1);
  const EP expected = d_theta(w) - EP::r() * d_R(w);
  EXPECT_EQ(poisson_bracket(w, h00), expected);
  EXPECT_EQ(op_L(w), expected);
  // written out: -r R sin t - r^2 cos t
  EXPECT_EQ(expected, -(EP::r() * EP::R() * EP::sin(1)) - EP::r(2) * EP::cos(1));
}

TEST(NfAlgebra, ProductToSum) {
  EXPECT_EQ(EP::cos(2) * EP::cos(3), (EP::cos(1) + EP::cos(5)) * Q(1, 2));
  EXPECT_EQ(EP::sin(2) * EP::sin(3), (EP::cos(1) - EP::cos(5)) * Q(1, 2));
  EXPECT_EQ(EP::sin(2) * EP::cos(3), (EP::sin(5) - EP::sin(1)) * Q(1, 2));
  EXPECT_EQ(EP::cos(2) * EP::sin(3), (EP::sin(5) + EP::sin(1)) * Q(1, 2));
  EXPECT_EQ(EP::sin(1) * EP::sin(1) + EP::cos(1) * EP::cos(1), EP::constant(1));
  EXPECT_TRUE(EP::sin(0).is_zero());
}

TEST(NfAlgebra, RingAxiomsExact) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const EP a = random_poly<Q>(rng), b = random_poly<Q>(rng), c = random_poly<Q>(rng);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a + b, b + a);
    EXPECT_TRUE((a - a).is_zero());
    for (const EP& p : {a * b, a + b, a * (b + c)}) EXPECT_TRUE(p.is_canonical());
  }
}

TEST(NfAlgebra, BracketAxiomsExact) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const EP f = random_poly<Q>(rng), g = random_poly<Q>(rng), h = random_poly<Q>(rng);
    const Q k(3, 7);
    EXPECT_EQ(poisson_bracket(f, g), -poisson_bracket(g, f));
    EXPECT_EQ(poisson_bracket(f * k + g, h), poisson_bracket(f, h) * k + poisson_bracket(g, h));
    EXPECT_EQ(poisson_bracket(f, g * h), poisson_bracket(f, g) * h + g * poisson_bracket(f, h));
    const EP jacobi = poisson_bracket(f, poisson_bracket(g, h)) + poisson_bracket(g, poisson_bracket(h, f)) +
                      poisson_bracket(h, poisson_bracket(f, g));
    EXPECT_TRUE(jacobi.is_zero()) << jacobi.pretty();
    EXPECT_TRUE(poisson_bracket(f, g).is_canonical());
  }
}

TEST(NfAlgebra, AntiderivativeInvertsThetaDerivative) {
  EXPECT_EQ(antiderivative_theta(EP::cos(1)), EP::sin(1));
  EXPECT_EQ(antiderivative_theta(EP::sin(3)), EP::cos(3) * Q(-1, 3));
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const EP f = random_zero_mean<Q>(rng);
    EXPECT_EQ(d_theta(antiderivative_theta(f)), f);
    EXPECT_TRUE(antiderivative_theta(f).is_canonical());
  }
}

TEST(NfAlgebra, AntiderivativeRejectsMean) {
  EXPECT_THROW(antiderivative_theta(EP::constant(1)), MeanObstructionError);
  try {
    antiderivative_theta(EP::cos(2) + EP::r(2) * Q(5));
    FAIL() << "no exception";
  } catch (const MeanObstructionError& e) {
    ASSERT_EQ(e.offending_terms().size(), 1u);
    EXPECT_NE(e.offending_terms()[0].find("r^2"), std::string::npos);
  }
}

TEST(NfAlgebra, NilpotentOperator) {
  EXPECT_EQ(op_LN(EP::R()), -EP::r());
  EXPECT_TRUE(op_LN(EP::Theta(2) * EP::r(-2)).is_zero());
  std::mt19937_64 rng(14);
  for (int i = 0; i < 50; ++i) {
    EP f = random_poly<Q>(rng);
    const int jmax = f.max_R_degree();
    for (int k = 0; k <= jmax; ++k) f = op_LN(f);
    EXPECT_TRUE(f.is_zero());
  }
}

TEST(NfAlgebra, HomologicalSolver) {
  EXPECT_EQ(solve_homological(EP::cos(1)), EP::sin(1));
  std::mt19937_64 rng(15);
  for (int i = 0; i < 50; ++i) {
    const EP rhs = random_zero_mean<Q>(rng);
    const EP w = solve_homological(rhs);
    EXPECT_EQ(op_L(w), rhs);
  }
  EXPECT_THROW(solve_homological(EP::R(2)), MeanObstructionError);
}

TEST(NfAlgebra, CubicSeriesTerminatesAfterFourTerms) {
  // A generic cubic in z: its polar form has R-degree 3, so LN^4 kills it.
  CartesianPoly4<Q> p;
  p.set({3, 0, 0, 0}, Q(2));
  p.set({1, 2, 0, 0}, Q(-1));
  p.set({0, 0, 3, 0}, Q(1, 3));
  p.set({1, 0, 1, 1}, Q(5));
  const EP polar = cart_to_polar(p, identity_basis<Q>());
  const auto [star, prime] = split_mean(polar);
  EXPECT_TRUE(star.is_zero());
  int terms = 0;
  const EP w = solve_homological(prime, &terms);
  EXPECT_EQ(terms, 4);
  EXPECT_EQ(op_L(w), prime);
}

TEST(NfAlgebra, SplitMean) {
  const auto [s, p] = split_mean(EP::constant(1) + EP::cos(1));
  EXPECT_EQ(s, EP::constant(1));
  EXPECT_EQ(p, EP::cos(1));
  std::mt19937_64 rng(16);
  for (int i = 0; i < 20; ++i) {
    const EP f = random_poly<Q>(rng);
    const auto [fs, fp] = split_mean(f);
    EXPECT_EQ(fs + fp, f);
    EXPECT_EQ(split_mean(fs).first, fs);
    EXPECT_TRUE(split_mean(fs).second.is_zero());
  }
}

TEST(NfAlgebra, CartesianToPolar) {
  CartesianPoly4<Q> p;
  p.set({2, 0, 0, 0}, Q(1));
  p.set({0, 2, 0, 0}, Q(1));
  EXPECT_EQ(cart_to_polar(p, identity_basis<Q>()), EP::r(2));

  CartesianPoly4<Q> q;
  q.set({0, 0, 2, 0}, Q(1));
  q.set({0, 0, 0, 2}, Q(1));
  EXPECT_EQ(cart_to_polar(q, identity_basis<Q>()), EP::R(2) + EP::Theta(2) * EP::r(-2));
  // Angular momentum z1 z4 - z2 z3 = Theta.
  CartesianPoly4<Q> l;
  l.set({1, 0, 0, 1}, Q(1));
  l.set({0, 1, 1, 0}, Q(-1));
  EXPECT_EQ(cart_to_polar(l, identity_basis<Q>()), EP::Theta());
  EXPECT_THROW(p.set({3, 1, 1, 0}, Q(1)), DomainError);
}

TEST(NfAlgebra, CartesianToPolarPointEvaluation) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.2, 1.5), ang(0.0, 6.283185307179586);
  CartesianPoly4<double> p;
  int a = 0;
  for (int e0 = 0; e0 <= 4; ++e0)
    for (int e1 = 0; e0 + e1 <= 4; ++e1)
      for (int e2 = 0; e0 + e1 + e2 <= 4; ++e2)
        for (int e3 = 0; e0 + e1 + e2 + e3 <= 4; ++e3) p.set({e0, e1, e2, e3}, u(rng) * (++a % 3 == 0 ? 0.0 : 1.0));
  Matrix4T<double> basis{};
  for (auto& row : basis)
    for (auto& v : row) v = u(rng);
  const DP polar = cart_to_polar(p, basis);
  for (int i = 0; i < 100; ++i) {
    const double r = pos(rng), th = ang(rng), R = u(rng), Th = u(rng);
    const std::array<double, 4> z{r * std::cos(th), r * std::sin(th), R * std::cos(th) - Th / r * std::sin(th),
                                  R * std::sin(th) + Th / r * std::cos(th)};
    std::array<double, 4> x{};
    for (int k = 0; k < 4; ++k)
      for (int c = 0; c < 4; ++c) x[k] += basis[k][c] * z[c];
    const double expect = p.evaluate(x);
    EXPECT_NEAR(polar.evaluate(r, th, R, Th), expect, 1e-12 * std::max(1.0, std::abs(expect)));
  }
}

TEST(NfAlgebra, EvaluationIsAHomomorphism) {
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.3, 1.5);
  for (int i = 0; i < 50; ++i) {
    const DP f = random_poly<double>(rng), g = random_poly<double>(rng);
    const std::array<double, 4> x{pos(rng), 3.0 * u(rng), u(rng), u(rng)};
    const double ff = oracle::eval(f, x), gg = oracle::eval(g, x);
    EXPECT_NEAR(oracle::eval(f * g, x), ff * gg, 1e-12 * (1 + std::abs(ff * gg)));
    EXPECT_NEAR(oracle::eval(f + g, x), ff + gg, 1e-12 * (1 + std::abs(ff) + std::abs(gg)));
    const double br = oracle::eval(poisson_bracket(f, g), x);
    EXPECT_NEAR(br, oracle::bracket_fd(f, g, x), 1e-6 * (1 + std::abs(br)));
  }
}

TEST(NfAlgebra, LaurentBound) {
  EXPECT_NO_THROW(EP::r(kMinRPower));
  EXPECT_THROW(EP::r(kMinRPower - 1), DomainError);
  EXPECT_THROW(d_r(EP::r(kMinRPower)), DomainError);
  EXPECT_THROW(EP::r(-5) * EP::r(-4), DomainError);
}

TEST(NfAlgebra, SerializationRoundTrip) {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 20; ++i) {
    const EP f = random_poly<Q>(rng);
    std::istringstream in(f.serialize());
    EXPECT_EQ(EP::parse(in), f);
    const DP g = random_poly<double>(rng) * 0.1;
    std::istringstream in2(g.serialize());
    EXPECT_EQ(DP::parse(in2), g);
  }
  const EP f = EP::R() * EP::cos(2) + EP::r(-2) * Q(3);
  EXPECT_EQ(f.serialize(), "3 -2 0 0 0 c\n1 0 1 0 2 c\n");
  std::istringstream bad("1 2 3\n");
  EXPECT_THROW(EP::parse(bad), DomainError);
}

TEST(NfAlgebra, DoubleAndExactAgree) {
  std::mt19937_64 rng_a(20), rng_b(20);
  for (int i = 0; i < 20; ++i) {
    const EP fa = random_poly<Q>(rng_a), ga = random_poly<Q>(rng_a);
    const DP fb = random_poly<double>(rng_b), gb = random_poly<double>(rng_b);
    const EP e = poisson_bracket(fa, ga);
    const DP d = poisson_bracket(fb, gb).chop(1e-14);
    ASSERT_EQ(e.size(), d.size());
    for (const auto& [m, c] : e.terms()) EXPECT_DOUBLE_EQ(d.coefficient(m), c.convert_to<double>());
  }
}

}  // namespace
