#include <gtest/gtest.h>

#include <random>

#include "adeglab/errors.hpp"
#include "adeglab/gadgets.hpp"

namespace adeglab {
namespace {

const auto kAnd2 = make_builtin(Builtin::And, 2);
const auto kOr2 = make_builtin(Builtin::Or, 2);
const auto kNand2 = negate(make_builtin(Builtin::And, 2));
const auto kMaj3 = make_builtin(Builtin::Maj, 3);

bool qualifies(const BooleanFunction& h) {
  const auto c = classify(h);
  return c == FunctionClass::MonotoneOther || c == FunctionClass::NonMonotoneOther;
}

TEST(NegationGadget, Examples) {
  const auto g = find_negation_gadget(kNand2);
  ASSERT_TRUE(g);
  EXPECT_EQ(g->free_index, 2);
  EXPECT_EQ(g->fixed.values, (std::map<int, bool>{{1, true}}));
  EXPECT_FALSE(find_negation_gadget(kMaj3));
  const auto n1 = find_negation_gadget(make_builtin(Builtin::Not, 1));
  ASSERT_TRUE(n1);
  EXPECT_TRUE(n1->fixed.values.empty());
  EXPECT_EQ(n1->free_index, 1);
}

TEST(NegationGadget, ExistsExactlyForNonMonotone) {
  for (std::uint64_t t = 0; t < 256; ++t) {
    const auto h = BooleanFunction::from_words(3, {t});
    const auto g = find_negation_gadget(h);
    EXPECT_EQ(g.has_value(), !is_monotone(h)) << t;
    if (g) EXPECT_EQ(restrict(h, g->fixed), make_builtin(Builtin::Not, 1));
  }
}

TEST(SensitiveBlock, Examples) {
  const auto m = find_min_sensitive_block2(kMaj3);
  EXPECT_EQ(m.point, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(m.i, 1);
  EXPECT_EQ(m.j, 2);
  EXPECT_FALSE(m.orientation);
  const auto n = find_min_sensitive_block2(kNand2);
  EXPECT_EQ(n.point, (std::vector<int>{0, 0}));
  EXPECT_TRUE(n.orientation);
  EXPECT_THROW(find_min_sensitive_block2(make_builtin(Builtin::Parity, 3)), PreconditionError);
  EXPECT_THROW(find_min_sensitive_block2(negate(make_builtin(Builtin::Parity, 3))), PreconditionError);
  EXPECT_THROW(find_min_sensitive_block2(BooleanFunction::from_words(2, {0b1010})), PreconditionError);
}

TEST(MinimalInputs, Examples) {
  EXPECT_EQ(find_minimal_one_input(kMaj3), (std::vector<int>{1, 1, 0}));
  EXPECT_FALSE(find_minimal_one_input(make_builtin(Builtin::Or, 3)));
  EXPECT_EQ(find_minimal_one_input(make_builtin(Builtin::And, 3)), (std::vector<int>{1, 1, 1}));
  EXPECT_THROW(find_minimal_one_input(kNand2), PreconditionError);
  EXPECT_FALSE(find_maximal_zero_input(make_builtin(Builtin::And, 3)));
}

TEST(MinimalInputs, MonotoneClaimIsExhaustive) {
  for (std::uint64_t t = 0; t < 256; ++t) {
    const auto h = BooleanFunction::from_words(3, {t});
    if (!is_monotone(h) || !depends_on_all(h)) continue;
    EXPECT_EQ(!find_minimal_one_input(h).has_value(), h == make_builtin(Builtin::Or, 3)) << t;
    EXPECT_EQ(!find_maximal_zero_input(h).has_value(), h == make_builtin(Builtin::And, 3)) << t;
  }
}

TEST(Simulate, Examples) {
  auto maj_and = simulate_and2(kMaj3);
  EXPECT_EQ(maj_and.depth(), 1);
  EXPECT_TRUE(maj_and.verified);
  EXPECT_EQ(maj_and.gates[maj_and.root][2].value, 0);
  auto nand_and = simulate_and2(kNand2);
  EXPECT_EQ(nand_and.depth(), 2);
  EXPECT_TRUE(verify_circuit(nand_and, kAnd2));
  EXPECT_EQ(simulate_or2(kMaj3).depth(), 1);
  EXPECT_THROW(simulate_and2(kAnd2), PreconditionError);
  EXPECT_THROW(simulate_or2(make_builtin(Builtin::Parity, 2)), PreconditionError);
}

TEST(Simulate, VerifyRejectsWrongTarget) {
  SimulationCircuit c{kMaj3, {{GateInput::variable(1), GateInput::variable(2), GateInput::constant(false)}}, 0, 2};
  EXPECT_TRUE(verify_circuit(c, kAnd2));
  c.gates[0][2] = GateInput::constant(true);
  EXPECT_FALSE(verify_circuit(c, kAnd2));
  EXPECT_FALSE(c.verified);
  EXPECT_TRUE(verify_circuit(c, kOr2));
  EXPECT_THROW(verify_circuit(c, kMaj3), PreconditionError);
}

void check_census_function(const BooleanFunction& h) {
  auto a = simulate_and2(h);
  auto o = simulate_or2(h);
  EXPECT_TRUE(a.verified && o.verified);
  EXPECT_LE(a.depth(), 3);
  EXPECT_LE(o.depth(), 3);
  EXPECT_TRUE(is_min_sensitive_block2(h, find_min_sensitive_block2(h)));
}

TEST(Simulate, ExhaustiveTwoAndThreeBits) {
  int two = 0, three = 0;
  for (std::uint64_t t = 0; t < 16; ++t) {
    const auto h = BooleanFunction::from_words(2, {t});
    if (!qualifies(h)) continue;
    ++two;
    check_census_function(h);
  }
  for (std::uint64_t t = 0; t < 256; ++t) {
    const auto h = BooleanFunction::from_words(3, {t});
    if (!qualifies(h)) continue;
    ++three;
    check_census_function(h);
  }
  EXPECT_EQ(two, 6);
  EXPECT_EQ(three, 214);
}

TEST(Simulate, RandomFourBitFunctions) {
  std::mt19937_64 rng(4);
  int done = 0;
  while (done < 200) {
    const auto h = BooleanFunction::from_words(4, {rng() & 0xffff});
    if (!qualifies(h)) continue;
    ++done;
    check_census_function(h);
  }
}

TEST(Circuit, JsonIsNested) {
  const auto j = circuit_to_json(simulate_and2(kNand2));
  EXPECT_EQ(j.at("depth"), 2);
  EXPECT_TRUE(j.at("root").at("gate").at(1).contains("gate"));
}

TEST(MajorityProjection, ThreeIsIdentity) {
  const auto r = majority_projection(3, MajorityBase::Maj3, {.d_max = 2});
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.depth, 1);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(r.projection.targets[k], ProjectionTarget::variable(k + 1));
}

TEST(MajorityProjection, FiveFromMajorityTree) {
  const auto r = majority_projection(5, MajorityBase::Maj3, {.d_max = 6, .seed = 1});
  ASSERT_TRUE(r.found);
  EXPECT_LE(r.depth, 6);
  EXPECT_EQ(evaluate_projected_tree(MajorityBase::Maj3, r.depth, r.projection, 5), make_builtin(Builtin::Maj, 5));
}

TEST(MajorityProjection, FiveFromAndOrTree) {
  const auto r = majority_projection(5, MajorityBase::AndOr, {.d_max = 8, .seed = 1});
  ASSERT_TRUE(r.found);
  EXPECT_LE(r.depth, 8);
  EXPECT_EQ(evaluate_projected_tree(MajorityBase::AndOr, r.depth, r.projection, 5), make_builtin(Builtin::Maj, 5));
}

TEST(MajorityProjection, TreeEvaluationMatchesTabulatedPower) {
  std::mt19937_64 rng(8);
  for (const auto base : {MajorityBase::Maj3, MajorityBase::AndOr}) {
    const auto h = majority_base_function(base);
    const auto h2 = power(h, 2);
    for (int trial = 0; trial < 20; ++trial) {
      Projection p;
      for (int leaf = 0; leaf < h2.arity(); ++leaf) {
        p.targets.push_back(rng() % 4 == 0 ? ProjectionTarget::constant(rng() % 2)
                                           : ProjectionTarget::variable(1 + static_cast<int>(rng() % 5)));
      }
      EXPECT_EQ(evaluate_projected_tree(base, 2, p, 5), apply_projection(h2, p, 5));
    }
  }
}

TEST(MajorityProjection, BudgetExhaustionIsReported) {
  const auto r = majority_projection(5, MajorityBase::Maj3, {.d_max = 1, .attempts_per_depth = 50});
  EXPECT_FALSE(r.found);
  EXPECT_EQ(r.attempts_by_depth, (std::vector<std::uint64_t>{50}));
  EXPECT_THROW(majority_projection(4, MajorityBase::Maj3, {}), PreconditionError);
}

}  // namespace
}  // namespace adeglab
