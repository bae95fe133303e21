#include <gtest/gtest.h>

#include <random>

#include "adeglab/amplify.hpp"
#include "adeglab/errors.hpp"

namespace adeglab {
namespace {

const Rational kThird(1, 3);

BooleanFunction fn(Builtin b, int n) { return make_builtin(b, n); }

DualWitness witness_at(const BooleanFunction& g, const Rational& threshold) {
  return *approx_degree(g, threshold).witness;
}

SplitDual parity_split() { return split_dual(witness_at(fn(Builtin::Parity, 2), kThird)); }

MultilinearPolynomial random_polynomial(int arity, std::mt19937_64& rng, int terms) {
  MultilinearPolynomial p(arity);
  const auto all = (MultilinearPolynomial::Monomial{1} << arity) - 1;
  for (int k = 0; k < terms; ++k) {
    p.add_term(static_cast<MultilinearPolynomial::Monomial>(rng()) & all,
               Rational(static_cast<long>(rng() % 21) - 10) / static_cast<long>(1 + rng() % 7));
  }
  return p;
}

TEST(SplitDual, ParityExample) {
  const auto s = parity_split();
  const Rational h(1, 2);
  EXPECT_EQ(s.mu1, (std::vector<Rational>{0, h, h, 0}));
  EXPECT_EQ(s.mu0, (std::vector<Rational>{h, 0, 0, h}));
}

TEST(SplitDual, ReproducesWitness) {
  for (std::uint64_t t = 0; t < 256; t += 3) {
    const auto g = BooleanFunction::from_words(3, {t});
    const auto c = approx_degree(g, kThird);
    if (!c.witness) continue;
    const auto s = split_dual(*c.witness);
    for (std::size_t x = 0; x < s.mu0.size(); ++x) {
      EXPECT_EQ((s.mu1[x] - s.mu0[x]) / 2, c.witness->values[x]);
    }
  }
}

TEST(SplitDual, OneSidedSupport) {
  const auto g = fn(Builtin::Or, 2);
  const auto s = split_dual(*one_sided_approx_degree(g, kThird).witness);
  for (std::uint64_t x = 0; x < g.size(); ++x) {
    if (s.mu1[x] > 0) EXPECT_TRUE(g.at(x));
  }
  EXPECT_EQ(mu_expectation(s, g, 1), 1);
}

TEST(SplitDual, RejectsPurityZero) {
  DualWitness w;
  w.arity = 1;
  w.values = {Rational(1, 2), Rational(1, 2)};
  w.purity_degree = 0;
  EXPECT_THROW(split_dual(w), PreconditionError);
}

TEST(MuExpectation, ParityExamples) {
  const auto s = parity_split();
  const auto g = fn(Builtin::Parity, 2);
  EXPECT_EQ(mu_expectation(s, g, 1), 1);
  EXPECT_EQ(mu_expectation(s, g, 0), 0);
  EXPECT_THROW(mu_expectation(s, fn(Builtin::Parity, 3), 1), PreconditionError);
}

TEST(MuExpectation, ErrorLemmasOnSmallFunctions) {
  const Rational threshold = (1 - kThird) / 2;
  for (int n = 1; n <= 3; ++n) {
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << (1 << n)); ++t) {
      const auto g = BooleanFunction::from_words(n, {t});
      if (g.is_constant()) continue;
      const auto s = split_dual(witness_at(g, threshold));
      EXPECT_GT(mu_expectation(s, g, 1), 1 - kThird) << to_literal(g);
      EXPECT_LT(mu_expectation(s, g, 0), kThird) << to_literal(g);
    }
  }
}

TEST(ApplyL, Examples) {
  const auto s = parity_split();
  EXPECT_EQ(apply_L(MultilinearPolynomial::constant(4, Rational(7, 3)), s, 2, 1),
            MultilinearPolynomial::constant(2, Rational(7, 3)));

  const auto one_block = apply_L(MultilinearPolynomial::monomial(2, 0b11), s, 1, 1);
  MultilinearPolynomial expected(1);
  expected.add_term(0, Rational(1, 2));
  expected.add_term(1, Rational(-1, 2));
  EXPECT_EQ(one_block, expected);

  const auto two_blocks = apply_L(MultilinearPolynomial::monomial(4, 0b0111), s, 2, 1);
  MultilinearPolynomial quarter(2);
  quarter.add_term(0, Rational(1, 4));
  quarter.add_term(1, Rational(-1, 4));
  EXPECT_EQ(two_blocks, quarter);
  EXPECT_LE(two_blocks.degree(), 3 / 2);

  EXPECT_THROW(apply_L(MultilinearPolynomial(5), s, 2, 1), PreconditionError);
}

struct LConfig {
  BooleanFunction g;
  int n_blocks;
  int copies;
};

std::vector<LConfig> l_configs() {
  return {{fn(Builtin::Parity, 2), 2, 1}, {fn(Builtin::Parity, 2), 2, 2}, {fn(Builtin::Or, 2), 2, 2},
          {fn(Builtin::Maj, 3), 2, 1},    {fn(Builtin::Parity, 3), 1, 2}, {fn(Builtin::Or, 2), 3, 1}};
}

TEST(ApplyL, Linearity) {
  std::mt19937_64 rng(11);
  for (const auto& c : l_configs()) {
    const auto s = split_dual(witness_at(c.g, (1 - kThird) / 2));
    const int arity = c.n_blocks * c.copies * c.g.arity();
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = random_polynomial(arity, rng, 12);
      const auto q = random_polynomial(arity, rng, 12);
      const Rational a(3, 7), b(-2);
      EXPECT_EQ(apply_L(a * p + b * q, s, c.n_blocks, c.copies),
                a * apply_L(p, s, c.n_blocks, c.copies) + b * apply_L(q, s, c.n_blocks, c.copies));
    }
  }
}

TEST(ApplyL, DegreeReduction) {
  std::mt19937_64 rng(12);
  for (const auto& c : l_configs()) {
    const auto s = split_dual(witness_at(c.g, (1 - kThird) / 2));
    const int arity = c.n_blocks * c.copies * c.g.arity();
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = random_polynomial(arity, rng, 1 + static_cast<int>(rng() % 10));
      EXPECT_LE(apply_L(p, s, c.n_blocks, c.copies).degree(), p.degree() / s.purity_degree);
    }
  }
}

TEST(ApplyL, Contraction) {
  std::mt19937_64 rng(13);
  for (const auto& c : l_configs()) {
    const auto s = split_dual(witness_at(c.g, (1 - kThird) / 2));
    const int arity = c.n_blocks * c.copies * c.g.arity();
    for (int trial = 0; trial < 10; ++trial) {
      const auto p = random_polynomial(arity, rng, 8);
      Rational bound = 0;
      for (const auto& v : point_values(p)) bound = std::max(bound, abs(v));
      for (const auto& v : point_values(apply_L(p, s, c.n_blocks, c.copies))) EXPECT_LE(abs(v), bound);
    }
  }
}

PipelineConfig config(Builtin f, Builtin g, Middle middle, int t) {
  PipelineConfig c;
  c.outer = fn(f, 2);
  c.inner = fn(g, 2);
  c.middle = middle;
  c.t = t;
  return c;
}

TEST(Pipeline, ParityInnerIsNoiseless) {
  const auto r = verify_amplifier_pipeline(config(Builtin::And, Builtin::Parity, Middle::Maj, 1));
  EXPECT_TRUE(r.invariants_ok());
  EXPECT_EQ(r.e_mu1, 1);
  EXPECT_EQ(r.e_mu0, 0);
  EXPECT_EQ(r.z_deviation, 0);
  EXPECT_EQ(r.d_inner, 2);
  EXPECT_LE(r.approx_error_of_Lp, kThird);
  EXPECT_LE(r.deg_after, r.deg_before / 2);
  EXPECT_TRUE(r.bound_met);
}

TEST(Pipeline, AndMiddleOneSided) {
  const auto r = verify_amplifier_pipeline(config(Builtin::And, Builtin::Or, Middle::And, 2));
  EXPECT_TRUE(r.invariants_ok()) << report_to_json(r).dump();
  EXPECT_EQ(r.e_mu1, 1);
  EXPECT_EQ(r.total_arity, 8);
}

TEST(Pipeline, TwelveBitMajoritySandwich) {
  auto c = config(Builtin::Or, Builtin::Parity, Middle::Maj, 3);
  c.delta = Rational(1, 4);
  const auto r = verify_amplifier_pipeline(c);
  EXPECT_TRUE(r.invariants_ok()) << report_to_json(r).dump();
  EXPECT_EQ(r.total_arity, 12);
  EXPECT_TRUE(r.bound_met);
  EXPECT_LE(r.approx_error_of_Lp, c.delta + c.epsilon);
  EXPECT_LE(r.deg_after, r.deg_before / 2);
}

TEST(Pipeline, GivenAmplifier) {
  auto c = config(Builtin::And, Builtin::Or, Middle::Given, 1);
  c.given = fn(Builtin::Parity, 2);
  const auto r = verify_amplifier_pipeline(c);
  EXPECT_TRUE(r.invariants_ok()) << report_to_json(r).dump();
  EXPECT_EQ(r.t, 2);
  EXPECT_EQ(r.total_arity, 8);
}

TEST(Pipeline, Preconditions) {
  EXPECT_THROW(verify_amplifier_pipeline(config(Builtin::And, Builtin::Or, Middle::Maj, 2)), PreconditionError);
  auto c = config(Builtin::And, Builtin::Or, Middle::Maj, 1);
  c.delta = Rational(1, 2);
  EXPECT_THROW(verify_amplifier_pipeline(c), PreconditionError);
  c = config(Builtin::And, Builtin::Or, Middle::Maj, 11);
  EXPECT_THROW(verify_amplifier_pipeline(c), LimitError);
}

TEST(Pipeline, CsvRowMatchesHeader) {
  const auto r = verify_amplifier_pipeline(config(Builtin::And, Builtin::Parity, Middle::Maj, 1));
  const auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  EXPECT_EQ(count(report_csv_row(r)), count(report_csv_header()));
}

}  // namespace
}  // namespace adeglab
