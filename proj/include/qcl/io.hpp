#pragma once

#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcl/allocator.hpp"
#include "qcl/confidence_fn.hpp"
#include "qcl/experiments.hpp"
#include "qcl/fault_tree.hpp"
#include "qcl/proof.hpp"

namespace qcl {

using json = nlohmann::json;

/// Rounds to 12 significant digits, the precision used for all serialized
/// numbers. Keeps outputs short and stable under parse/serialize round trips,
/// with rounding error two orders of magnitude below the library tolerance so
/// that reloaded proofs still satisfy the rule arithmetic.
inline double round_sig(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return std::strtod(buffer, nullptr);
}

namespace detail {

inline const json& require_field(const json& j, const char* field,
                                 const char* what) {
  auto it = j.find(field);
  if (it == j.end()) {
    throw SchemaError(std::string(what) + ": missing field \"" + field + "\"");
  }
  return *it;
}

inline double number_field(const json& j, const char* field, const char* what) {
  const json& v = require_field(j, field, what);
  if (!v.is_number()) {
    throw SchemaError(std::string(what) + ": field \"" + field + "\" must be a number");
  }
  return v.get<double>();
}

inline std::string string_field(const json& j, const char* field, const char* what) {
  const json& v = require_field(j, field, what);
  if (!v.is_string()) {
    throw SchemaError(std::string(what) + ": field \"" + field + "\" must be a string");
  }
  return v.get<std::string>();
}

inline json parse_text(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw SchemaError(std::string(what) + ": malformed JSON");
  }
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fault trees: {"type":"basic","name":...} or {"type":"and"|"or","children":[...]}

inline FaultTree ft_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("fault tree: node must be an object");
  const std::string type = detail::string_field(j, "type", "fault tree");
  if (type == "basic") {
    const std::string name = detail::string_field(j, "name", "fault tree");
    if (!is_identifier(name)) {
      throw SchemaError("fault tree: name \"" + name + "\" is not an identifier");
    }
    return FaultTree{FaultTree::Kind::Basic, name, {}};
  }
  if (type != "and" && type != "or") {
    throw SchemaError("fault tree: unknown node type \"" + type + "\"");
  }
  const json& children = detail::require_field(j, "children", "fault tree");
  if (!children.is_array() || children.size() < 2) {
    throw SchemaError("fault tree: field \"children\" must be an array of >= 2 nodes");
  }
  FaultTree gate{type == "and" ? FaultTree::Kind::And : FaultTree::Kind::Or, "", {}};
  for (const json& child : children) gate.children.push_back(ft_from_json(child));
  return gate;
}

inline FaultTree parse_ft(const std::string& text) {
  FaultTree ft = ft_from_json(detail::parse_text(text, "fault tree"));
  validate_ft(ft);
  return ft;
}

inline json ft_to_json(const FaultTree& ft) {
  json j;
  switch (ft.kind) {
    case FaultTree::Kind::Basic:
      j["type"] = "basic";
      j["name"] = ft.name;
      return j;
    case FaultTree::Kind::And:
      j["type"] = "and";
      break;
    case FaultTree::Kind::Or:
      j["type"] = "or";
      break;
  }
  j["children"] = json::array();
  for (const FaultTree& child : ft.children) j["children"].push_back(ft_to_json(child));
  return j;
}

inline std::string serialize_ft(const FaultTree& ft) {
  return ft_to_json(ft).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Confidence expressions: operator parse trees, with builtin shorthands.

inline ConfidenceExpr expr_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("confidence function: node must be an object");

  if (j.contains("builtin")) {
    const std::string family = detail::string_field(j, "builtin", "confidence function");
    if (family == "coverage") {
      return builtin(Coverage{detail::number_field(j, "n", "coverage family"),
                              detail::number_field(j, "r0", "coverage family")});
    }
    if (family == "random_testing") {
      return builtin(RandomTesting{detail::number_field(j, "p", "random-testing family"),
                                   detail::number_field(j, "r0", "random-testing family")});
    }
    if (family == "exponential") {
      return builtin(Exponential{detail::number_field(j, "base", "exponential family"),
                                 detail::number_field(j, "shift", "exponential family")});
    }
    throw SchemaError("confidence function: unknown builtin \"" + family + "\"");
  }

  const std::string op = detail::string_field(j, "op", "confidence function");
  if (op == "const") {
    return ConfidenceExpr::constant(detail::number_field(j, "value", "confidence function"));
  }
  if (op == "var") return ConfidenceExpr::var();

  static const std::map<std::string, ConfidenceExpr::Op> kOps{
      {"add", ConfidenceExpr::Op::Add}, {"sub", ConfidenceExpr::Op::Sub},
      {"mul", ConfidenceExpr::Op::Mul}, {"div", ConfidenceExpr::Op::Div},
      {"pow", ConfidenceExpr::Op::Pow}, {"min", ConfidenceExpr::Op::Min},
      {"max", ConfidenceExpr::Op::Max}, {"neg", ConfidenceExpr::Op::Neg}};
  auto it = kOps.find(op);
  if (it == kOps.end()) {
    throw SchemaError("confidence function: unknown op \"" + op + "\"");
  }
  const json& args = detail::require_field(j, "args", "confidence function");
  if (!args.is_array() || args.size() != expected_arg_count(it->second)) {
    throw SchemaError("confidence function: op \"" + op + "\" needs " +
                      std::to_string(expected_arg_count(it->second)) + " args");
  }
  if (it->second == ConfidenceExpr::Op::Neg) {
    return ConfidenceExpr::neg(expr_from_json(args[0]));
  }
  ConfidenceExpr lhs = expr_from_json(args[0]);
  ConfidenceExpr rhs = expr_from_json(args[1]);
  switch (it->second) {
    case ConfidenceExpr::Op::Add: return ConfidenceExpr::add(lhs, rhs);
    case ConfidenceExpr::Op::Sub: return ConfidenceExpr::sub(lhs, rhs);
    case ConfidenceExpr::Op::Mul: return ConfidenceExpr::mul(lhs, rhs);
    case ConfidenceExpr::Op::Div: return ConfidenceExpr::div(lhs, rhs);
    case ConfidenceExpr::Op::Pow: return ConfidenceExpr::pow(lhs, rhs);
    case ConfidenceExpr::Op::Min: return ConfidenceExpr::min(lhs, rhs);
    default: return ConfidenceExpr::max(lhs, rhs);
  }
}

inline json expr_to_json(const ConfidenceExpr& e) {
  using Op = ConfidenceExpr::Op;
  json j;
  switch (e.op()) {
    case Op::Const:
      j["op"] = "const";
      j["value"] = round_sig(e.value());
      return j;
    case Op::Var:
      j["op"] = "var";
      return j;
    case Op::Add: j["op"] = "add"; break;
    case Op::Sub: j["op"] = "sub"; break;
    case Op::Mul: j["op"] = "mul"; break;
    case Op::Div: j["op"] = "div"; break;
    case Op::Pow: j["op"] = "pow"; break;
    case Op::Min: j["op"] = "min"; break;
    case Op::Max: j["op"] = "max"; break;
    case Op::Neg: j["op"] = "neg"; break;
  }
  j["args"] = json::array();
  for (size_t i = 0; i < e.arg_count(); ++i) j["args"].push_back(expr_to_json(e.arg(i)));
  return j;
}

// ---------------------------------------------------------------------------
// Component files: { "<name>": {"fn": <expr-or-builtin>, "spent": <number>} }

inline std::vector<ComponentModel> components_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("components: file must be a JSON object");
  std::vector<ComponentModel> components;
  for (const auto& [name, spec] : j.items()) {
    if (!is_identifier(name)) {
      throw SchemaError("components: name \"" + name + "\" is not an identifier");
    }
    if (!spec.is_object()) {
      throw SchemaError("components: entry \"" + name + "\" must be an object");
    }
    ComponentModel model;
    model.name = name;
    model.expr = expr_from_json(detail::require_field(spec, "fn", "components"));
    model.spent = detail::number_field(spec, "spent", "components");
    if (model.spent < 0.0) {
      throw SchemaError("components: entry \"" + name + "\" has negative spent");
    }
    components.push_back(std::move(model));
  }
  return components;
}

inline std::vector<ComponentModel> parse_components(const std::string& text) {
  return components_from_json(detail::parse_text(text, "components"));
}

inline json components_to_json(const std::vector<ComponentModel>& components) {
  json j = json::object();
  for (const ComponentModel& component : components) {
    j[component.name] = {{"fn", expr_to_json(component.expr)},
                         {"spent", round_sig(component.spent)}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// Confidence pairs and leaf-confidence files: { "<name>": {"t":..,"f":..} }

inline Confidence confidence_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("confidence: must be an object with t and f");
  const double t = detail::number_field(j, "t", "confidence");
  const double f = detail::number_field(j, "f", "confidence");
  try {
    return Confidence(t, f);
  } catch (const InvalidConfidence& e) {
    throw SchemaError(std::string("confidence: ") + e.what());
  }
}

inline json confidence_to_json(const Confidence& c) {
  return json{{"t", round_sig(c.t)}, {"f", round_sig(c.f)}};
}

inline std::map<std::string, Confidence> confidences_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("confidences: file must be a JSON object");
  std::map<std::string, Confidence> out;
  for (const auto& [name, value] : j.items()) {
    out.emplace(name, confidence_from_json(value));
  }
  return out;
}

inline std::map<std::string, Confidence> parse_confidences(const std::string& text) {
  return confidences_from_json(detail::parse_text(text, "confidences"));
}

// ---------------------------------------------------------------------------
// Proof trees. Formulas are stored rendered; the shared hypotheses appear
// once at the top level (the fault-tree pipeline only produces proofs whose
// nodes share one context).

inline json proof_node_to_json(const ProofTree& node) {
  json j;
  j["rule"] = rule_name(node.rule);
  j["formula"] = to_string(node.conclusion.goal);
  j["confidence"] = confidence_to_json(node.conclusion.confidence);
  j["premises"] = json::array();
  for (const ProofTree& premise : node.premises) {
    j["premises"].push_back(proof_node_to_json(premise));
  }
  return j;
}

inline json proof_to_json(const ProofTree& tree) {
  json context = json::array();
  for (const ContextEntry& entry : tree.conclusion.context.entries()) {
    context.push_back({{"formula", to_string(entry.formula)},
                       {"confidence", confidence_to_json(entry.confidence)}});
  }
  return json{{"context", context}, {"root", proof_node_to_json(tree)}};
}

namespace detail {

inline ProofTree proof_node_from_json(const json& j, const Context& gamma) {
  if (!j.is_object()) throw SchemaError("proof: node must be an object");
  const std::string rule_str = string_field(j, "rule", "proof");
  const auto rule = rule_from_name(rule_str);
  if (!rule) throw SchemaError("proof: unknown rule \"" + rule_str + "\"");

  ProofTree node;
  node.rule = *rule;
  node.conclusion.context = gamma;
  node.conclusion.goal = parse_formula(string_field(j, "formula", "proof"));
  node.conclusion.confidence =
      confidence_from_json(require_field(j, "confidence", "proof"));

  const json& premises = require_field(j, "premises", "proof");
  if (!premises.is_array()) throw SchemaError("proof: \"premises\" must be an array");
  for (const json& premise : premises) {
    node.premises.push_back(proof_node_from_json(premise, gamma));
  }
  if (static_cast<int>(node.premises.size()) != rule_arity(node.rule)) {
    throw SchemaError("proof: rule \"" + rule_str + "\" expects " +
                      std::to_string(rule_arity(node.rule)) + " premises");
  }
  return node;
}

}  // namespace detail

inline ProofTree proof_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("proof: file must be a JSON object");
  const json& context_json = detail::require_field(j, "context", "proof");
  if (!context_json.is_array()) throw SchemaError("proof: \"context\" must be an array");
  Context gamma;
  for (const json& entry : context_json) {
    gamma.insert(parse_formula(detail::string_field(entry, "formula", "proof context")),
                 confidence_from_json(detail::require_field(entry, "confidence",
                                                            "proof context")));
  }
  return detail::proof_node_from_json(detail::require_field(j, "root", "proof"), gamma);
}

inline ProofTree parse_proof(const std::string& text) {
  return proof_from_json(detail::parse_text(text, "proof"));
}

inline std::string serialize_proof(const ProofTree& tree) {
  return proof_to_json(tree).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Allocation results.

inline json allocation_to_json(const AllocationResult& result) {
  json split = json::object();
  for (const auto& [name, value] : result.split) split[name] = round_sig(value);
  return json{{"strategy", result.strategy},
              {"split", split},
              {"predicted_before", round_sig(result.predicted_before)},
              {"predicted_after", round_sig(result.predicted_after)}};
}

inline AllocationResult allocation_from_json(const json& j) {
  AllocationResult result;
  result.strategy = detail::string_field(j, "strategy", "allocation");
  result.predicted_before = detail::number_field(j, "predicted_before", "allocation");
  result.predicted_after = detail::number_field(j, "predicted_after", "allocation");
  const json& split = detail::require_field(j, "split", "allocation");
  if (!split.is_object()) throw SchemaError("allocation: \"split\" must be an object");
  for (const auto& [name, value] : split.items()) {
    if (!value.is_number()) {
      throw SchemaError("allocation: split entry \"" + name + "\" must be a number");
    }
    result.split[name] = value.get<double>();
  }
  return result;
}

inline std::string serialize_allocation(const AllocationResult& result) {
  return allocation_to_json(result).dump(2) + "\n";
}

inline AllocationResult parse_allocation(const std::string& text) {
  return allocation_from_json(detail::parse_text(text, "allocation"));
}

// ---------------------------------------------------------------------------
// Experiment configs, field names mirroring the config structs.

inline Rq1Config rq1_config_from_json(const json& j) {
  Rq1Config cfg;
  cfg.n_fts = static_cast<int>(detail::number_field(j, "n_fts", "rq1 config"));
  cfg.n_sps = static_cast<int>(detail::number_field(j, "n_sps", "rq1 config"));
  const json& range = detail::require_field(j, "sp_range", "rq1 config");
  if (!range.is_array() || range.size() != 2 || !range[0].is_number() ||
      !range[1].is_number()) {
    throw SchemaError("rq1 config: \"sp_range\" must be [low, high]");
  }
  cfg.sp_lo = range[0].get<double>();
  cfg.sp_hi = range[1].get<double>();
  const json& budgets = detail::require_field(j, "budgets", "rq1 config");
  if (!budgets.is_array() || budgets.empty()) {
    throw SchemaError("rq1 config: \"budgets\" must be a non-empty array");
  }
  for (const json& b : budgets) {
    if (!b.is_number()) throw SchemaError("rq1 config: budgets must be numbers");
    cfg.budgets.push_back(b.get<double>());
  }
  cfg.ft_leaves = static_cast<int>(detail::number_field(j, "ft_leaves", "rq1 config"));
  cfg.conf_family = expr_from_json(detail::require_field(j, "conf_family", "rq1 config"));
  cfg.seed = static_cast<std::uint64_t>(detail::number_field(j, "seed", "rq1 config"));
  validate(cfg);
  return cfg;
}

inline Rq2Config rq2_config_from_json(const json& j) {
  Rq2Config cfg;
  cfg.n_fts = static_cast<int>(detail::number_field(j, "n_fts", "rq2 config"));
  cfg.n_sps = static_cast<int>(detail::number_field(j, "n_sps", "rq2 config"));
  cfg.n_fds = static_cast<int>(detail::number_field(j, "n_fds", "rq2 config"));
  cfg.n_runs = static_cast<int>(detail::number_field(j, "n_runs", "rq2 config"));
  const json& range = detail::require_field(j, "sp_range", "rq2 config");
  if (!range.is_array() || range.size() != 2 || !range[0].is_number() ||
      !range[1].is_number()) {
    throw SchemaError("rq2 config: \"sp_range\" must be [low, high]");
  }
  cfg.sp_lo = range[0].get<double>();
  cfg.sp_hi = range[1].get<double>();
  const json& budgets = detail::require_field(j, "budgets", "rq2 config");
  if (!budgets.is_array() || budgets.empty()) {
    throw SchemaError("rq2 config: \"budgets\" must be a non-empty array");
  }
  for (const json& b : budgets) {
    if (!b.is_number()) throw SchemaError("rq2 config: budgets must be numbers");
    cfg.budgets.push_back(b.get<double>());
  }
  cfg.test_cost = detail::number_field(j, "test_cost", "rq2 config");
  cfg.observability = detail::number_field(j, "observability", "rq2 config");
  cfg.seed = static_cast<std::uint64_t>(detail::number_field(j, "seed", "rq2 config"));
  validate(cfg);
  return cfg;
}

}  // namespace qcl
