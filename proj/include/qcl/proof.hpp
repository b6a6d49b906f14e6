#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcl/confidence.hpp"
#include "qcl/formula.hpp"

namespace qcl {

enum class Rule { Ax, Unk, TopI, BotI, ImpI, ImpEl, ImpEr, NegI, AndI, OrI };

inline int rule_arity(Rule rule) {
  switch (rule) {
    case Rule::Ax:
    case Rule::Unk:
    case Rule::TopI:
    case Rule::BotI:
      return 0;
    case Rule::NegI:
      return 1;
    default:
      return 2;
  }
}

inline const char* rule_name(Rule rule) {
  switch (rule) {
    case Rule::Ax: return "ax";
    case Rule::Unk: return "unk";
    case Rule::TopI: return "top_i";
    case Rule::BotI: return "bot_i";
    case Rule::ImpI: return "imp_i";
    case Rule::ImpEl: return "imp_e_l";
    case Rule::ImpEr: return "imp_e_r";
    case Rule::NegI: return "neg_i";
    case Rule::OrI: return "or_i";
    case Rule::AndI: return "and_i";
  }
  return "?";
}

inline std::optional<Rule> rule_from_name(std::string_view name) {
  for (Rule rule : {Rule::Ax, Rule::Unk, Rule::TopI, Rule::BotI, Rule::ImpI,
                    Rule::ImpEl, Rule::ImpEr, Rule::NegI, Rule::AndI,
                    Rule::OrI}) {
    if (name == rule_name(rule)) return rule;
  }
  return std::nullopt;
}

/// Confidence of the four premise-free rules. (ax) returns the hypothesis
/// confidence unchanged; (unk) proves anything, with null confidence.
inline Confidence rule_const(Rule tag,
                             const std::optional<Confidence>& axiom_conf =
                                 std::nullopt) {
  switch (tag) {
    case Rule::Ax:
      if (!axiom_conf) {
        throw MissingAxiomConfidence("(ax) needs the hypothesis confidence");
      }
      return *axiom_conf;
    case Rule::Unk:
      return Confidence(0.0, 0.0);
    case Rule::TopI:
      return Confidence(1.0, 0.0);
    case Rule::BotI:
      return Confidence(0.0, 1.0);
    default:
      throw MalformedProof("rule_const expects a premise-free rule");
  }
}

struct ContextEntry {
  Formula formula;
  Confidence confidence;
};

/// The hypotheses Gamma: a finite set keyed by structural formula equality.
/// Inserting a formula that is already present overwrites its confidence.
class Context {
 public:
  void insert(Formula phi, Confidence c) {
    for (auto& entry : entries_) {
      if (entry.formula == phi) {
        entry.confidence = c;
        return;
      }
    }
    entries_.push_back({std::move(phi), c});
  }

  const Confidence* find(const Formula& phi) const {
    for (const auto& entry : entries_) {
      if (entry.formula == phi) return &entry.confidence;
    }
    return nullptr;
  }

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<ContextEntry>& entries() const { return entries_; }

 private:
  std::vector<ContextEntry> entries_;
};

struct Sequent {
  Context context;
  Formula goal = Formula::top();
  Confidence confidence;
};

/// A derivation: the rule applied at the root, its premise subtrees (arity
/// matching the rule) and the concluded sequent.
struct ProofTree {
  Rule rule = Rule::Unk;
  std::vector<ProofTree> premises;
  Sequent conclusion;
};

/// A proof skeleton: rules plus the leaf formulas; all confidences and the
/// internal-node formulas are derived by infer_confidences. Formulas are
/// required on (ax) and (unk) leaves only.
struct ProofShape {
  Rule rule = Rule::Unk;
  std::optional<Formula> formula;
  std::vector<ProofShape> premises;

  static ProofShape ax(std::string atom_name) {
    return {Rule::Ax, Formula::atom(std::move(atom_name)), {}};
  }
  static ProofShape unk(Formula phi) { return {Rule::Unk, std::move(phi), {}}; }
  static ProofShape top_i() { return {Rule::TopI, std::nullopt, {}}; }
  static ProofShape bot_i() { return {Rule::BotI, std::nullopt, {}}; }
  static ProofShape imp_i(ProofShape l, ProofShape r) {
    return {Rule::ImpI, std::nullopt, {std::move(l), std::move(r)}};
  }
  static ProofShape imp_e_l(ProofShape imp, ProofShape phi) {
    return {Rule::ImpEl, std::nullopt, {std::move(imp), std::move(phi)}};
  }
  static ProofShape imp_e_r(ProofShape imp, ProofShape psi) {
    return {Rule::ImpEr, std::nullopt, {std::move(imp), std::move(psi)}};
  }
  static ProofShape neg_i(ProofShape p) {
    return {Rule::NegI, std::nullopt, {std::move(p)}};
  }
  static ProofShape and_i(ProofShape l, ProofShape r) {
    return {Rule::AndI, std::nullopt, {std::move(l), std::move(r)}};
  }
  static ProofShape or_i(ProofShape l, ProofShape r) {
    return {Rule::OrI, std::nullopt, {std::move(l), std::move(r)}};
  }
};

namespace detail {

inline ProofTree infer_node(const ProofShape& shape, const Context& gamma,
                            const std::map<std::string, Confidence>& leaves) {
  if (static_cast<int>(shape.premises.size()) != rule_arity(shape.rule)) {
    throw MalformedProof(std::string("rule ") + rule_name(shape.rule) +
                         " applied to " + std::to_string(shape.premises.size()) +
                         " premises");
  }

  ProofTree node;
  node.rule = shape.rule;
  node.conclusion.context = gamma;
  for (const ProofShape& premise : shape.premises) {
    node.premises.push_back(infer_node(premise, gamma, leaves));
  }

  switch (shape.rule) {
    case Rule::Ax: {
      if (!shape.formula || shape.formula->kind() != Formula::Kind::Atom) {
        throw MalformedProof("(ax) leaves must carry an atom");
      }
      auto it = leaves.find(shape.formula->atom_name());
      if (it == leaves.end()) {
        throw UnknownAtom("no confidence assigned to atom '" +
                          shape.formula->atom_name() + "'");
      }
      node.conclusion.goal = *shape.formula;
      node.conclusion.confidence = it->second;
      break;
    }
    case Rule::Unk:
      if (!shape.formula) throw MalformedProof("(unk) leaves must carry a formula");
      node.conclusion.goal = *shape.formula;
      node.conclusion.confidence = rule_const(Rule::Unk);
      break;
    case Rule::TopI:
      node.conclusion.goal = Formula::top();
      node.conclusion.confidence = rule_const(Rule::TopI);
      break;
    case Rule::BotI:
      node.conclusion.goal = Formula::bottom();
      node.conclusion.confidence = rule_const(Rule::BotI);
      break;
    case Rule::ImpI:
      node.conclusion.goal = Formula::implies(node.premises[0].conclusion.goal,
                                              node.premises[1].conclusion.goal);
      node.conclusion.confidence =
          rule_imp_i(node.premises[0].conclusion.confidence,
                     node.premises[1].conclusion.confidence);
      break;
    case Rule::ImpEl: {
      const Formula& imp = node.premises[0].conclusion.goal;
      if (imp.kind() != Formula::Kind::Implies ||
          imp.lhs() != node.premises[1].conclusion.goal) {
        throw MalformedProof("(=>E,l) premises do not match");
      }
      node.conclusion.goal = imp.rhs();
      node.conclusion.confidence =
          rule_imp_e_l(node.premises[0].conclusion.confidence,
                       node.premises[1].conclusion.confidence);
      break;
    }
    case Rule::ImpEr: {
      const Formula& imp = node.premises[0].conclusion.goal;
      if (imp.kind() != Formula::Kind::Implies ||
          imp.rhs() != node.premises[1].conclusion.goal) {
        throw MalformedProof("(=>E,r) premises do not match");
      }
      node.conclusion.goal = imp.lhs();
      node.conclusion.confidence =
          rule_imp_e_r(node.premises[0].conclusion.confidence,
                       node.premises[1].conclusion.confidence);
      break;
    }
    case Rule::NegI:
      node.conclusion.goal = Formula::negation(node.premises[0].conclusion.goal);
      node.conclusion.confidence =
          rule_neg_i(node.premises[0].conclusion.confidence);
      break;
    case Rule::AndI:
      node.conclusion.goal =
          Formula::conjunction(node.premises[0].conclusion.goal,
                               node.premises[1].conclusion.goal);
      node.conclusion.confidence =
          rule_and_i(node.premises[0].conclusion.confidence,
                     node.premises[1].conclusion.confidence);
      break;
    case Rule::OrI:
      node.conclusion.goal =
          Formula::disjunction(node.premises[0].conclusion.goal,
                               node.premises[1].conclusion.goal);
      node.conclusion.confidence =
          rule_or_i(node.premises[0].conclusion.confidence,
                    node.premises[1].conclusion.confidence);
      break;
  }
  return node;
}

}  // namespace detail

/// Evaluates a proof skeleton bottom-up. Every (ax) leaf must name an atom in
/// leaf_assignment; the context is the full assignment. Side-condition
/// violations in elimination rules propagate as SideConditionViolated.
inline ProofTree infer_confidences(
    const ProofShape& shape,
    const std::map<std::string, Confidence>& leaf_assignment) {
  Context gamma;
  for (const auto& [name, conf] : leaf_assignment) {
    gamma.insert(Formula::atom(name), conf);
  }
  return detail::infer_node(shape, gamma, leaf_assignment);
}

/// Outcome of check_proof. When invalid, path points at the first failing
/// node (pre-order) and reason says what went wrong there.
struct CheckResult {
  bool ok = true;
  std::string path;
  std::string reason;

  explicit operator bool() const { return ok; }
};

namespace detail {

inline CheckResult fail_node(const std::string& path, std::string reason) {
  return CheckResult{false, path, std::move(reason)};
}

inline CheckResult check_node(const ProofTree& node, const std::string& path) {
  if (static_cast<int>(node.premises.size()) != rule_arity(node.rule)) {
    return fail_node(path, std::string("rule ") + rule_name(node.rule) +
                               " expects " + std::to_string(rule_arity(node.rule)) +
                               " premises, has " +
                               std::to_string(node.premises.size()));
  }

  const Formula& goal = node.conclusion.goal;
  const Confidence& conf = node.conclusion.confidence;
  auto conf_mismatch = [&](const Confidence& expected) {
    return fail_node(path, std::string(rule_name(node.rule)) + " arithmetic gives (" +
                               std::to_string(expected.t) + ", " +
                               std::to_string(expected.f) + "), node claims (" +
                               std::to_string(conf.t) + ", " +
                               std::to_string(conf.f) + ")");
  };

  switch (node.rule) {
    case Rule::Ax: {
      const Confidence* hyp = node.conclusion.context.find(goal);
      if (hyp == nullptr) {
        return fail_node(path, "(ax) conclusion '" + to_string(goal) +
                                   "' is not a hypothesis");
      }
      if (!approx_equal(*hyp, conf)) {
        return fail_node(path, "(ax) confidence differs from the hypothesis");
      }
      break;
    }
    case Rule::Unk:
      if (!approx_equal(conf, Confidence(0.0, 0.0))) {
        return fail_node(path, "(unk) must conclude with (0, 0)");
      }
      break;
    case Rule::TopI:
      if (goal != Formula::top()) return fail_node(path, "(topI) must conclude true");
      if (!approx_equal(conf, Confidence(1.0, 0.0))) return conf_mismatch({1, 0});
      break;
    case Rule::BotI:
      if (goal != Formula::bottom()) return fail_node(path, "(botI) must conclude false");
      if (!approx_equal(conf, Confidence(0.0, 1.0))) return conf_mismatch({0, 1});
      break;
    case Rule::ImpI: {
      if (goal != Formula::implies(node.premises[0].conclusion.goal,
                                   node.premises[1].conclusion.goal)) {
        return fail_node(path, "(=>I) conclusion shape mismatch");
      }
      Confidence expected = rule_imp_i(node.premises[0].conclusion.confidence,
                                       node.premises[1].conclusion.confidence);
      if (!approx_equal(expected, conf)) return conf_mismatch(expected);
      break;
    }
    case Rule::ImpEl: {
      const Formula& imp = node.premises[0].conclusion.goal;
      const Confidence& c_phi = node.premises[1].conclusion.confidence;
      if (imp.kind() != Formula::Kind::Implies ||
          imp.lhs() != node.premises[1].conclusion.goal || goal != imp.rhs()) {
        return fail_node(path, "(=>E,l) conclusion shape mismatch");
      }
      if (c_phi.t == 0.0 || c_phi.f == 1.0) {
        return fail_node(path, "(=>E,l) side condition violated");
      }
      Confidence expected =
          rule_imp_e_l(node.premises[0].conclusion.confidence, c_phi);
      if (!approx_equal(expected, conf)) return conf_mismatch(expected);
      break;
    }
    case Rule::ImpEr: {
      const Formula& imp = node.premises[0].conclusion.goal;
      const Confidence& c_psi = node.premises[1].conclusion.confidence;
      if (imp.kind() != Formula::Kind::Implies ||
          imp.rhs() != node.premises[1].conclusion.goal || goal != imp.lhs()) {
        return fail_node(path, "(=>E,r) conclusion shape mismatch");
      }
      if (c_psi.t == 1.0 || c_psi.f == 0.0) {
        return fail_node(path, "(=>E,r) side condition violated");
      }
      Confidence expected =
          rule_imp_e_r(node.premises[0].conclusion.confidence, c_psi);
      if (!approx_equal(expected, conf)) return conf_mismatch(expected);
      break;
    }
    case Rule::NegI: {
      if (goal != Formula::negation(node.premises[0].conclusion.goal)) {
        return fail_node(path, "(negI) conclusion shape mismatch");
      }
      Confidence expected = rule_neg_i(node.premises[0].conclusion.confidence);
      if (!approx_equal(expected, conf)) return conf_mismatch(expected);
      break;
    }
    case Rule::AndI: {
      if (goal != Formula::conjunction(node.premises[0].conclusion.goal,
                                       node.premises[1].conclusion.goal)) {
        return fail_node(path, "(andI) conclusion shape mismatch");
      }
      Confidence expected = rule_and_i(node.premises[0].conclusion.confidence,
                                       node.premises[1].conclusion.confidence);
      if (!approx_equal(expected, conf)) return conf_mismatch(expected);
      break;
    }
    case Rule::OrI: {
      if (goal != Formula::disjunction(node.premises[0].conclusion.goal,
                                       node.premises[1].conclusion.goal)) {
        return fail_node(path, "(orI) conclusion shape mismatch");
      }
      Confidence expected = rule_or_i(node.premises[0].conclusion.confidence,
                                      node.premises[1].conclusion.confidence);
      if (!approx_equal(expected, conf)) return conf_mismatch(expected);
      break;
    }
  }

  for (size_t i = 0; i < node.premises.size(); ++i) {
    CheckResult sub = check_node(node.premises[i],
                                 path + ".premises[" + std::to_string(i) + "]");
    if (!sub.ok) return sub;
  }
  return CheckResult{};
}

}  // namespace detail

/// Validates that every node's confidence equals its rule applied to the
/// premises (tolerance 1e-9), that conclusion formulas have the shape the
/// rule dictates, and that every (ax) conclusion appears in its context.
inline CheckResult check_proof(const ProofTree& tree) {
  return detail::check_node(tree, "root");
}

}  // namespace qcl
