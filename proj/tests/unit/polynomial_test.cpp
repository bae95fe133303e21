#include <gtest/gtest.h>

#include <random>

#include "adeglab/errors.hpp"
#include "adeglab/polynomial.hpp"

namespace adeglab {
namespace {

using Poly = MultilinearPolynomial;

TEST(Interpolate, SpecExamples) {
  const auto and2 = interpolate(make_builtin(Builtin::And, 2));
  EXPECT_EQ(and2, Poly::monomial(2, 0b11));
  const auto par2 = interpolate(make_builtin(Builtin::Parity, 2));
  EXPECT_EQ(par2, Poly::monomial(2, 0b01) + Poly::monomial(2, 0b10) + Poly::monomial(2, 0b11, -2));
  const auto maj = interpolate(make_builtin(Builtin::Maj, 3));
  EXPECT_EQ(maj.degree(), 3);
  EXPECT_EQ(maj.coefficient(0b111), -2);
  EXPECT_EQ(maj.coefficient(0b011), 1);
  EXPECT_EQ(maj.coefficient(0b101), 1);
  EXPECT_EQ(maj.coefficient(0b110), 1);
  EXPECT_EQ(maj.terms().size(), 4u);
}

TEST(Interpolate, ReproducesTableExhaustively) {
  for (int n = 0; n <= 3; ++n) {
    const std::uint64_t count = std::uint64_t{1} << (std::uint64_t{1} << n);
    for (std::uint64_t t = 0; t < count; ++t) {
      const auto f = BooleanFunction::from_words(n, {t});
      EXPECT_EQ(linf_error(interpolate(f), f), 0);
    }
  }
  std::mt19937_64 rng(3);
  std::vector<std::uint64_t> words(16);
  for (auto& w : words) w = rng();
  const auto f = BooleanFunction::from_words(10, words);
  const auto values = point_values(interpolate(f));
  for (std::uint64_t k = 0; k < f.size(); ++k) ASSERT_EQ(values[k], f.at(k) ? 1 : 0);
}

TEST(Interpolate, ZetaMoebiusRoundTrip) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Poly p(5);
    for (int k = 0; k < 8; ++k) {
      p.add_term(static_cast<Poly::Monomial>(rng() % 32),
                 Rational(static_cast<long>(rng() % 11) - 5) / static_cast<long>(1 + rng() % 4));
    }
    EXPECT_EQ(from_point_values(5, point_values(p)), p);
  }
}

TEST(Interpolate, DegreeIsSubmultiplicative) {
  const std::vector<BooleanFunction> family = {
      make_builtin(Builtin::And, 2), make_builtin(Builtin::Or, 2), make_builtin(Builtin::Parity, 2),
      make_builtin(Builtin::Maj, 3), BooleanFunction::from_words(2, {0b0111}),
      BooleanFunction::from_words(3, {0x6b}), make_builtin(Builtin::Parity, 3)};
  for (const auto& f : family) {
    for (const auto& g : family) {
      if (f.arity() * g.arity() > 10) continue;
      EXPECT_LE(interpolate(compose(f, g)).degree(), interpolate(f).degree() * interpolate(g).degree());
    }
  }
}

TEST(EvalPoly, SpecExamples) {
  const RealPoint half2{Rational(1, 2), Rational(1, 2)};
  EXPECT_EQ(eval_poly(Poly::monomial(2, 0b11), half2), Rational(1, 4));
  const RealPoint any{Rational(3), Rational(-5, 7)};
  EXPECT_EQ(eval_poly(Poly::constant(2, Rational(7, 3)), any), Rational(7, 3));
  const RealPoint half3{Rational(1, 2), Rational(1, 2), Rational(1, 2)};
  EXPECT_EQ(eval_poly(interpolate(make_builtin(Builtin::Maj, 3)), half3), Rational(1, 2));
  EXPECT_THROW(eval_poly(Poly::constant(2, 1), half3), PreconditionError);
}

TEST(LinfError, SpecExamples) {
  const auto and2 = make_builtin(Builtin::And, 2);
  const Poly p = Poly::constant(2, Rational(-1, 3)) + Poly::monomial(2, 0b01, Rational(2, 3)) +
                 Poly::monomial(2, 0b10, Rational(2, 3));
  EXPECT_EQ(linf_error(p, and2), Rational(1, 3));
  EXPECT_EQ(linf_error(Poly::constant(2, Rational(1, 2)), make_builtin(Builtin::Parity, 2)),
            Rational(1, 2));
  EXPECT_THROW(linf_error(Poly::constant(3, 0), and2), PreconditionError);
}

TEST(Arithmetic, ProductMultilinearizes) {
  const auto x1 = Poly::monomial(2, 0b01);
  const auto x2 = Poly::monomial(2, 0b10);
  EXPECT_EQ(x1 * x1, x1);
  EXPECT_EQ((x1 + x2) * (x1 + x2), x1 + x2 + Poly::monomial(2, 0b11, 2));
  EXPECT_TRUE((x1 - x1).is_zero());
  EXPECT_EQ((x1 - x1).degree(), 0);
  EXPECT_THROW(Poly::monomial(2, 0b100), PreconditionError);
}

TEST(Robustness, SpecExamples) {
  const auto maj = interpolate(make_builtin(Builtin::Maj, 3));
  const std::vector<int> x{1, 1, 0};
  const RealPoint zero(3, Rational(0));
  EXPECT_TRUE(robustness_probe(maj, x, zero, Rational(1, 10)));
  const auto and2 = interpolate(make_builtin(Builtin::And, 2));
  const RealPoint d{Rational(-1, 20), Rational(-1, 20)};
  EXPECT_TRUE(robustness_probe(and2, std::vector<int>{1, 1}, d, Rational(1, 10)));
}

TEST(Robustness, PreconditionsAreChecked) {
  const auto and2 = interpolate(make_builtin(Builtin::And, 2));
  const std::vector<int> x{1, 1};
  EXPECT_THROW(robustness_probe(and2, x, RealPoint{Rational(1, 10), 0}, Rational(1, 10)), PreconditionError);
  const Poly wide = Poly::constant(2, 2);
  EXPECT_THROW(robustness_probe(wide, x, RealPoint(2, Rational(0)), Rational(1, 10)), PreconditionError);
}

// Inside the cube the multilinear extension of a [0,1]-valued p is a convex
// combination of cube values, so only steps that leave the cube can exceed the
// bound. At a corner of AND_n with every coordinate pushed outward by d/n the
// excess is (1+d/n)^n - 1 - d, which is second order in d but positive.
TEST(Robustness, OutwardCornerExcessIsDetected) {
  const auto and2 = interpolate(make_builtin(Builtin::And, 2));
  const std::vector<int> x{1, 1};
  const RealPoint out{Rational(1, 20), Rational(1, 20)};
  EXPECT_FALSE(robustness_probe(and2, x, out, Rational(1, 10)));
  EXPECT_EQ(eval_poly(and2, RealPoint{Rational(21, 20), Rational(21, 20)}) - 1, Rational(41, 400));
}

TEST(Robustness, HoldsForInwardPerturbations) {
  std::mt19937_64 rng(17);
  const Rational delta(1, 10);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<std::uint64_t> words(BooleanFunction::word_count(n));
    for (auto& w : words) w = rng();
    if (n < 6) words[0] &= (std::uint64_t{1} << (1 << n)) - 1;
    const auto p = interpolate(BooleanFunction::from_words(n, words));
    const std::uint64_t k = rng() % (std::uint64_t{1} << n);
    const auto x = bits_of(k, n);
    RealPoint d(n);
    for (int i = 0; i < n; ++i) {
      const Rational mag = Rational(static_cast<long>(rng() % 1001)) / (1000 * n * 10);
      d[i] = x[i] ? -mag : mag;
    }
    ASSERT_TRUE(robustness_probe(p, x, d, delta));
  }
}

}  // namespace
}  // namespace adeglab
