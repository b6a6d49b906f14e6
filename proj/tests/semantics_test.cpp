#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "generators.hpp"
#include "qcl/semantics.hpp"

namespace qcl {
namespace {

Formula redundant_pairs() {
  return Formula::conjunction(
      Formula::disjunction(Formula::atom("A"), Formula::atom("B")),
      Formula::disjunction(Formula::atom("C"), Formula::atom("D")));
}

TEST(EvalExact, Examples) {
  const IndependentContext any{{{"A", 0.5}, {"B", 0.5}}};
  EXPECT_DOUBLE_EQ(eval_exact(Formula::top(), any).p_true, 1.0);
  EXPECT_DOUBLE_EQ(eval_exact(Formula::bottom(), any).p_true, 0.0);

  EXPECT_NEAR(eval_exact(Formula::conjunction(Formula::atom("A"), Formula::atom("B")),
                         any).p_true,
              0.25, kTol);

  const IndependentContext all_09{
      {{"A", 0.9}, {"B", 0.9}, {"C", 0.9}, {"D", 0.9}}};
  EXPECT_NEAR(eval_exact(redundant_pairs(), all_09).p_true, 0.9801, kTol);
}

TEST(EvalExact, Errors) {
  EXPECT_THROW(eval_exact(Formula::atom("A"), IndependentContext{}), UnknownAtom);

  Formula big = Formula::atom("x0");
  IndependentContext ctx;
  ctx.probs["x0"] = 0.5;
  for (int i = 1; i < 25; ++i) {
    big = Formula::disjunction(big, Formula::atom("x" + std::to_string(i)));
    ctx.probs["x" + std::to_string(i)] = 0.5;
  }
  EXPECT_THROW(eval_exact(big, ctx), TooManyAtoms);
}

TEST(EvalExact, RejectsExcessiveNesting) {
  Formula chain = Formula::atom("a");
  for (int i = 0; i < 80; ++i) chain = Formula::implies(Formula::atom("a"), chain);
  const IndependentContext ctx{{{"a", 0.5}}};
  EXPECT_THROW(eval_exact(chain, ctx), BadParameter);
}

TEST(EvalExact, MultiplicativeOverDisjointConjunction) {
  Rng rng(31);
  const std::vector<std::string> left{"a", "b", "c"};
  const std::vector<std::string> right{"x", "y", "z"};
  for (int trial = 0; trial < 300; ++trial) {
    const Formula phi = testing::random_formula(rng, left, 3);
    const Formula psi = testing::random_formula(rng, right, 3);
    IndependentContext ctx;
    for (const auto& name : left) ctx.probs[name] = rng.uniform01();
    for (const auto& name : right) ctx.probs[name] = rng.uniform01();
    const double joint = eval_exact(Formula::conjunction(phi, psi), ctx).p_true;
    const double split = eval_exact(phi, ctx).p_true * eval_exact(psi, ctx).p_true;
    EXPECT_NEAR(joint, split, kTol);
  }
}

TEST(EvalExact, NegationComplements) {
  Rng rng(32);
  const std::vector<std::string> atoms{"a", "b", "c", "d"};
  for (int trial = 0; trial < 300; ++trial) {
    const Formula phi = testing::random_formula(rng, atoms, 4);
    IndependentContext ctx;
    for (const auto& name : atoms) ctx.probs[name] = rng.uniform01();
    EXPECT_NEAR(eval_exact(Formula::negation(phi), ctx).p_true,
                1.0 - eval_exact(phi, ctx).p_true, 1e-12);
  }
}

TEST(EvalMonteCarlo, TracksExactValue) {
  Rng rng(33);
  const std::vector<std::string> atoms{"a", "b", "c"};
  const Formula phi = testing::random_formula(rng, atoms, 4);
  IndependentContext ctx;
  for (const auto& name : atoms) ctx.probs[name] = rng.uniform01();
  const double exact = eval_exact(phi, ctx).p_true;
  const double estimate = eval_monte_carlo(phi, ctx, 200000, 7).p_true;
  EXPECT_NEAR(estimate, exact, 0.01);
}

TEST(Holds, Examples) {
  const IndependentContext ctx{{{"A", 0.6}}};
  EXPECT_TRUE(holds(Formula::atom("A"), Confidence(0, 0), ctx));
  EXPECT_TRUE(holds(Formula::atom("A"), Confidence(0.5, 0.2), ctx));
  EXPECT_FALSE(holds(Formula::atom("A"), Confidence(0.7, 0), ctx));
}

TEST(IndependenceLemma, Examples) {
  const IndependentContext ctx{{{"A", 0.3}, {"B", 0.7}}};
  EXPECT_TRUE(check_independence_lemma(Formula::atom("A"), Formula::atom("B"), ctx,
                                       BoolSet::only_true(), BoolSet::only_true()));
  EXPECT_TRUE(check_independence_lemma(Formula::atom("A"), Formula::atom("B"), ctx,
                                       BoolSet::empty(), BoolSet::only_true()));

  const IndependentContext ctx4{
      {{"A", 0.25}, {"B", 0.5}, {"C", 0.75}, {"D", 0.99}}};
  const Formula phi = Formula::conjunction(Formula::atom("A"), Formula::atom("B"));
  const Formula psi = Formula::disjunction(Formula::atom("C"), Formula::atom("D"));
  for (BoolSet S : {BoolSet::only_true(), BoolSet::only_false(), BoolSet::both()}) {
    for (BoolSet T : {BoolSet::only_true(), BoolSet::only_false(), BoolSet::both()}) {
      EXPECT_TRUE(check_independence_lemma(phi, psi, ctx4, S, T));
    }
  }
}

TEST(IndependenceLemma, RejectsSharedAtoms) {
  const IndependentContext ctx{{{"A", 0.3}, {"B", 0.7}}};
  EXPECT_THROW(
      check_independence_lemma(Formula::atom("A"),
                               Formula::disjunction(Formula::atom("A"),
                                                    Formula::atom("B")),
                               ctx, BoolSet::only_true(), BoolSet::only_true()),
      SharedAtoms);
}

TEST(IndependenceLemma, RandomizedPairs) {
  Rng rng(34);
  const std::vector<std::string> left{"a", "b", "c", "d"};
  const std::vector<std::string> right{"w", "x", "y", "z"};
  const BoolSet sets[] = {BoolSet::empty(), BoolSet::only_true(),
                          BoolSet::only_false(), BoolSet::both()};
  for (int trial = 0; trial < 400; ++trial) {
    const Formula phi = testing::random_formula(rng, left, 3);
    const Formula psi = testing::random_formula(rng, right, 3);
    IndependentContext ctx;
    for (const auto& name : left) ctx.probs[name] = rng.uniform01();
    for (const auto& name : right) ctx.probs[name] = rng.uniform01();
    const BoolSet S = sets[rng.below(4)];
    const BoolSet T = sets[rng.below(4)];
    EXPECT_TRUE(check_independence_lemma(phi, psi, ctx, S, T));
  }
}

TEST(CheckSoundness, TwoComponentSystem) {
  const ProofTree tree = infer_confidences(
      ProofShape::and_i(ProofShape::ax("software"), ProofShape::ax("hardware")),
      {{"software", {0.5, 0.2}}, {"hardware", {0.3, 0.01}}});
  const IndependentContext ctx{{{"software", 0.6}, {"hardware", 0.4}}};
  // 0.6 * 0.4 = 0.24 lies in [0.15, 1 - 0.208].
  EXPECT_TRUE(check_soundness(tree, ctx));
}

TEST(CheckSoundness, UnknownLeavesAlwaysHold) {
  const ProofTree tree = infer_confidences(
      ProofShape::or_i(ProofShape::and_i(ProofShape::ax("a"), ProofShape::ax("b")),
                       ProofShape::ax("c")),
      {{"a", {0, 0}}, {"b", {0, 0}}, {"c", {0, 0}}});
  const IndependentContext ctx{{{"a", 0.17}, {"b", 0.92}, {"c", 0.5}}};
  EXPECT_TRUE(check_soundness(tree, ctx));
}

TEST(CheckSoundness, RejectsEliminationRules) {
  ProofTree minor;
  minor.rule = Rule::Unk;
  minor.conclusion.goal = Formula::atom("a");
  minor.conclusion.confidence = Confidence(0.5, 0.2);
  ProofTree major;
  major.rule = Rule::Unk;
  major.conclusion.goal = Formula::implies(Formula::atom("a"), Formula::atom("b"));
  major.conclusion.confidence = Confidence(0, 0);
  ProofTree node;
  node.rule = Rule::ImpEl;
  node.premises = {major, minor};
  node.conclusion.goal = Formula::atom("b");
  node.conclusion.confidence = rule_imp_e_l({0, 0}, {0.5, 0.2});
  const IndependentContext ctx{{{"a", 0.5}, {"b", 0.5}}};
  EXPECT_THROW(check_soundness(node, ctx), EliminationRulePresent);
}

TEST(CheckSoundness, RejectsNonLinearConclusions) {
  const ProofTree tree = infer_confidences(
      ProofShape::and_i(ProofShape::ax("a"), ProofShape::unk(Formula::atom("a"))),
      {{"a", {0.5, 0.2}}});
  const IndependentContext ctx{{{"a", 0.6}}};
  EXPECT_THROW(check_soundness(tree, ctx), NonLinearFormula);
}

// Randomized soundness property: introduction-only proofs of linear formulas
// against the exact enumeration oracle. The acceptance suite runs the
// full-size version of this.
TEST(CheckSoundness, RandomizedTrials) {
  Rng rng(424242);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto generated = testing::random_soundness_case(rng, 5);
    const ProofTree tree =
        infer_confidences(generated.shape, generated.leaf_confidences);
    EXPECT_TRUE(check_soundness(tree, generated.ctx))
        << "conclusion " << to_string(tree.conclusion.goal) << " : ("
        << tree.conclusion.confidence.t << ", " << tree.conclusion.confidence.f
        << ") but exact probability is "
        << eval_exact(tree.conclusion.goal, generated.ctx).p_true;
  }
}

}  // namespace
}  // namespace qcl
