#include <gtest/gtest.h>

#include <map>
#include <string>

#include "generators.hpp"
#include "qcl/io.hpp"

namespace qcl {
namespace {

TEST(RoundSig, TwelveSignificantDigits) {
  EXPECT_DOUBLE_EQ(round_sig(0.123456789123456), 0.123456789123);
  EXPECT_DOUBLE_EQ(round_sig(1.0 / 3.0), 0.333333333333);
  EXPECT_DOUBLE_EQ(round_sig(10.0), 10.0);
  EXPECT_DOUBLE_EQ(round_sig(0.0), 0.0);
  EXPECT_DOUBLE_EQ(round_sig(round_sig(1.0 / 3.0)), round_sig(1.0 / 3.0));
}

TEST(FtJson, RoundTrip) {
  Rng rng(91);
  for (int trial = 0; trial < 100; ++trial) {
    const FaultTree ft = random_ft(2 + static_cast<int>(rng.below(9)),
                                   rng.below(1u << 31));
    const FaultTree reparsed = parse_ft(serialize_ft(ft));
    EXPECT_EQ(serialize_ft(reparsed), serialize_ft(ft));
  }
}

TEST(ExprJson, ParseTreeForm) {
  using E = ConfidenceExpr;
  const ConfidenceExpr parsed = expr_from_json(json::parse(R"({
    "op": "sub",
    "args": [
      {"op": "const", "value": 1},
      {"op": "pow", "args": [{"op": "const", "value": 0.5}, {"op": "var"}]}
    ]})"));
  EXPECT_EQ(parsed, E::sub(E::constant(1.0), E::pow(E::constant(0.5), E::var())));
  EXPECT_NEAR(evaluate(parsed, 5.0), 1.0 - 1.0 / 32.0, 1e-15);
}

TEST(ExprJson, BuiltinShorthands) {
  EXPECT_EQ(expr_from_json(json::parse(
                R"({"builtin": "exponential", "base": 0.99, "shift": 1})")),
            builtin(Exponential{0.99, 1.0}));
  EXPECT_EQ(expr_from_json(json::parse(
                R"({"builtin": "coverage", "n": 10, "r0": 2})")),
            builtin(Coverage{10, 2}));
  EXPECT_EQ(expr_from_json(json::parse(
                R"({"builtin": "random_testing", "p": 0.1, "r0": 10})")),
            builtin(RandomTesting{0.1, 10}));
}

TEST(ExprJson, Errors) {
  EXPECT_THROW(expr_from_json(json::parse(R"({"op": "madd", "args": []})")),
               SchemaError);
  EXPECT_THROW(expr_from_json(json::parse(R"({"op": "add", "args": [{"op": "var"}]})")),
               SchemaError);
  EXPECT_THROW(expr_from_json(json::parse(R"({"builtin": "weibull"})")), SchemaError);
  EXPECT_THROW(expr_from_json(json::parse(R"({"op": "const"})")), SchemaError);
}

TEST(ExprJson, RoundTrip) {
  const ConfidenceExpr exprs[] = {
      builtin(Exponential{0.99, 1.0}), builtin(Coverage{10, 2}),
      builtin(RandomTesting{0.1, 10}),
      ConfidenceExpr::max(ConfidenceExpr::neg(ConfidenceExpr::var()),
                          ConfidenceExpr::constant(0.25))};
  for (const ConfidenceExpr& expr : exprs) {
    EXPECT_EQ(expr_from_json(expr_to_json(expr)), expr);
  }
}

TEST(ComponentsJson, RoundTripAndErrors) {
  const std::string text = R"({
    "A": {"fn": {"builtin": "exponential", "base": 0.5, "shift": 0}, "spent": 0},
    "B": {"fn": {"builtin": "exponential", "base": 0.5, "shift": 0}, "spent": 5}
  })";
  const auto components = parse_components(text);
  ASSERT_EQ(components.size(), 2u);
  EXPECT_EQ(components[0].name, "A");
  EXPECT_EQ(components[1].spent, 5.0);

  const auto reparsed = components_from_json(components_to_json(components));
  ASSERT_EQ(reparsed.size(), components.size());
  for (size_t i = 0; i < components.size(); ++i) {
    EXPECT_EQ(reparsed[i].name, components[i].name);
    EXPECT_EQ(reparsed[i].expr, components[i].expr);
    EXPECT_EQ(reparsed[i].spent, components[i].spent);
  }

  EXPECT_THROW(parse_components(R"({"A": {"spent": 1}})"), SchemaError);
  EXPECT_THROW(parse_components(R"({"A": {"fn": {"op": "var"}, "spent": -1}})"),
               SchemaError);
  EXPECT_THROW(parse_components(R"([1, 2])"), SchemaError);
}

TEST(ConfidencesJson, ParseAndValidate) {
  const auto confs = parse_confidences(R"({"A": {"t": 0.9, "f": 0.05}})");
  EXPECT_NEAR(confs.at("A").t, 0.9, 1e-12);
  // t + f > 1 is rejected at the schema boundary.
  EXPECT_THROW(parse_confidences(R"({"A": {"t": 0.7, "f": 0.4}})"), SchemaError);
  EXPECT_THROW(parse_confidences(R"({"A": {"t": 0.7}})"), SchemaError);
}

TEST(ProofJson, RoundTripsTranslatedProofs) {
  Rng rng(92);
  for (int trial = 0; trial < 50; ++trial) {
    const FaultTree ft = random_ft(2 + static_cast<int>(rng.below(6)),
                                   rng.below(1u << 31));
    std::map<std::string, Confidence> leaf_conf;
    for (const std::string& name : basic_events(ft)) {
      leaf_conf[name] = testing::random_confidence(rng);
    }
    const ProofTree proof = translate(ft, leaf_conf);
    const std::string text = serialize_proof(proof);
    const ProofTree reparsed = parse_proof(text);
    EXPECT_EQ(serialize_proof(reparsed), text);
    EXPECT_TRUE(check_proof(reparsed).ok);
    EXPECT_EQ(reparsed.conclusion.goal, proof.conclusion.goal);
  }
}

TEST(ProofJson, Errors) {
  EXPECT_THROW(parse_proof("{"), SchemaError);
  EXPECT_THROW(parse_proof(R"({"root": {}})"), SchemaError);
  EXPECT_THROW(parse_proof(R"({"context": [], "root": {"rule": "nope",
    "formula": "A", "confidence": {"t": 0, "f": 0}, "premises": []}})"),
               SchemaError);
  // Wrong arity.
  EXPECT_THROW(parse_proof(R"({"context": [], "root": {"rule": "and_i",
    "formula": "A & B", "confidence": {"t": 0, "f": 0}, "premises": []}})"),
               SchemaError);
}

TEST(AllocationJson, RoundTrip) {
  AllocationResult result;
  result.strategy = "sa";
  result.split = {{"A", 3.25}, {"B", 6.75}};
  result.predicted_before = 0.968720436;
  result.predicted_after = 0.999938966;
  const std::string text = serialize_allocation(result);
  const AllocationResult reparsed = parse_allocation(text);
  EXPECT_EQ(reparsed.strategy, result.strategy);
  EXPECT_EQ(reparsed.split, result.split);
  EXPECT_EQ(serialize_allocation(reparsed), text);
}

TEST(ConfigJson, Rq1AndRq2) {
  const Rq1Config rq1 = rq1_config_from_json(json::parse(R"({
    "n_fts": 20, "n_sps": 10, "sp_range": [100, 300],
    "budgets": [1, 10, 100, 1000], "ft_leaves": 6,
    "conf_family": {"builtin": "exponential", "base": 0.99, "shift": 1},
    "seed": 42})"));
  EXPECT_EQ(rq1.n_fts, 20);
  EXPECT_EQ(rq1.budgets.size(), 4u);
  EXPECT_EQ(rq1.conf_family, builtin(Exponential{0.99, 1.0}));

  const Rq2Config rq2 = rq2_config_from_json(json::parse(R"({
    "n_fts": 5, "n_sps": 5, "n_fds": 20, "n_runs": 20, "sp_range": [10, 70],
    "budgets": [60, 600], "test_cost": 10, "observability": 0.1, "seed": 42})"));
  EXPECT_EQ(rq2.n_fds, 20);
  EXPECT_EQ(rq2.observability, 0.1);

  EXPECT_THROW(rq1_config_from_json(json::parse(R"({"n_fts": 1})")), SchemaError);
  EXPECT_THROW(rq1_config_from_json(json::parse(R"({
    "n_fts": 2, "n_sps": 2, "sp_range": [100, 300], "budgets": [1, "ten"],
    "ft_leaves": 6,
    "conf_family": {"builtin": "exponential", "base": 0.99, "shift": 1},
    "seed": 42})")),
               SchemaError);
  EXPECT_THROW(rq2_config_from_json(json::parse(R"({
    "n_fts": 5, "n_sps": 5, "n_fds": 20, "n_runs": 20, "sp_range": [10, 70],
    "budgets": [60, 600], "test_cost": 10, "observability": 1.5, "seed": 42})")),
               BadParameter);
}

}  // namespace
}  // namespace qcl
