#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qcl/confidence.hpp"
#include "qcl/formula.hpp"
#include "qcl/proof.hpp"
#include "qcl/rng.hpp"

namespace qcl {

/// Largest atom count eval_exact will enumerate (2^24 assignments).
inline constexpr int kMaxEnumerationAtoms = 24;

/// A finite product space: each atom is an independent Bernoulli variable
/// that is true with the given probability.
struct IndependentContext {
  std::map<std::string, double> probs;
};

struct SemanticsResult {
  double p_true = 0.0;
};

/// Subset of {true, false}, for events of the form "the formula's value lies
/// in S".
struct BoolSet {
  bool has_true = false;
  bool has_false = false;

  static BoolSet empty() { return {false, false}; }
  static BoolSet only_true() { return {true, false}; }
  static BoolSet only_false() { return {false, true}; }
  static BoolSet both() { return {true, true}; }

  bool contains(bool value) const { return value ? has_true : has_false; }
};

namespace detail {

/// Postfix program for evaluating a formula under a truth assignment given
/// as a bitmask, so enumeration does not chase pointers or look up names.
/// The operand stack is a fixed array; compile() rejects formulas whose
/// nesting would outgrow it.
struct CompiledFormula {
  enum class Op : std::uint8_t { PushAtom, PushTrue, PushFalse, Implies };
  struct Ins {
    Op op;
    int atom_index;
  };
  static constexpr int kStackSlots = 64;
  std::vector<Ins> code;

  static CompiledFormula compile(const Formula& phi,
                                 const std::map<std::string, int>& index) {
    CompiledFormula out;
    out.emit(phi, index);
    int depth = 0, peak = 0;
    for (const Ins& ins : out.code) {
      depth += ins.op == Op::Implies ? -1 : 1;
      peak = std::max(peak, depth);
    }
    if (peak > kStackSlots) {
      throw BadParameter("formula nesting exceeds " +
                         std::to_string(kStackSlots) + " pending operands");
    }
    return out;
  }

  void emit(const Formula& phi, const std::map<std::string, int>& index) {
    switch (phi.kind()) {
      case Formula::Kind::Atom:
        code.push_back({Op::PushAtom, index.at(phi.atom_name())});
        break;
      case Formula::Kind::Top:
        code.push_back({Op::PushTrue, 0});
        break;
      case Formula::Kind::Bottom:
        code.push_back({Op::PushFalse, 0});
        break;
      case Formula::Kind::Implies:
        emit(phi.lhs(), index);
        emit(phi.rhs(), index);
        code.push_back({Op::Implies, 0});
        break;
    }
  }

  bool eval(std::uint32_t mask) const {
    bool stack[kStackSlots];
    int top = 0;
    for (const Ins& ins : code) {
      switch (ins.op) {
        case Op::PushAtom:
          stack[top++] = (mask >> ins.atom_index) & 1u;
          break;
        case Op::PushTrue:
          stack[top++] = true;
          break;
        case Op::PushFalse:
          stack[top++] = false;
          break;
        case Op::Implies:
          stack[top - 2] = !stack[top - 2] || stack[top - 1];
          --top;
          break;
      }
    }
    return stack[0];
  }
};

inline std::map<std::string, int> atom_indices(const std::vector<std::string>& names) {
  std::map<std::string, int> index;
  for (size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<int>(i);
  return index;
}

inline std::vector<double> atom_probs(const std::vector<std::string>& names,
                                      const IndependentContext& ctx) {
  std::vector<double> probs;
  probs.reserve(names.size());
  for (const std::string& name : names) {
    auto it = ctx.probs.find(name);
    if (it == ctx.probs.end()) {
      throw UnknownAtom("context has no probability for atom '" + name + "'");
    }
    if (!(it->second >= 0.0 && it->second <= 1.0)) {
      throw BadParameter("probability of atom '" + name + "' outside [0,1]");
    }
    probs.push_back(it->second);
  }
  return probs;
}

inline double assignment_weight(std::uint32_t mask, const std::vector<double>& probs) {
  double w = 1.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    w *= ((mask >> i) & 1u) ? probs[i] : 1.0 - probs[i];
  }
  return w;
}

/// P(value of phi lies in S) by exhaustive enumeration over the given atoms
/// (which must cover phi). Kahan-summed so complementary events add to 1 at
/// far below the library tolerance.
inline double prob_in_set(const CompiledFormula& compiled, BoolSet S,
                          const std::vector<double>& probs) {
  if (!S.has_true && !S.has_false) return 0.0;
  if (S.has_true && S.has_false) return 1.0;
  const std::uint32_t count = 1u << probs.size();
  double sum = 0.0, comp = 0.0;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    if (S.contains(compiled.eval(mask))) {
      const double y = assignment_weight(mask, probs) - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
  }
  return sum;
}

}  // namespace detail

/// Exact probability that phi evaluates to true when every atom is drawn
/// independently with the context's probabilities. Enumerates all 2^n truth
/// assignments; n is capped at kMaxEnumerationAtoms.
inline SemanticsResult eval_exact(const Formula& phi, const IndependentContext& ctx) {
  std::set<std::string> atoms = atom_set(phi);
  std::vector<std::string> names(atoms.begin(), atoms.end());
  if (names.size() > static_cast<size_t>(kMaxEnumerationAtoms)) {
    throw TooManyAtoms("formula has " + std::to_string(names.size()) +
                       " atoms, enumeration bound is " +
                       std::to_string(kMaxEnumerationAtoms));
  }
  const auto compiled = detail::CompiledFormula::compile(phi, detail::atom_indices(names));
  const auto probs = detail::atom_probs(names, ctx);
  return SemanticsResult{detail::prob_in_set(compiled, BoolSet::only_true(), probs)};
}

/// Monte Carlo estimate of the same probability, for formulas beyond the
/// enumeration bound. Diagnostic aid only; accuracy is O(1/sqrt(samples)).
inline SemanticsResult eval_monte_carlo(const Formula& phi,
                                        const IndependentContext& ctx,
                                        std::uint64_t samples, std::uint64_t seed) {
  std::set<std::string> atoms = atom_set(phi);
  std::vector<std::string> names(atoms.begin(), atoms.end());
  const auto probs = detail::atom_probs(names, ctx);
  const auto compiled = detail::CompiledFormula::compile(phi, detail::atom_indices(names));
  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::uint32_t mask = 0;
    for (size_t i = 0; i < probs.size(); ++i) {
      if (rng.bernoulli(probs[i])) mask |= 1u << i;
    }
    if (compiled.eval(mask)) ++hits;
  }
  return SemanticsResult{static_cast<double>(hits) / static_cast<double>(samples)};
}

/// True iff the exact probability of phi lies in the interval [t, 1-f]
/// denoted by c, up to the library tolerance.
inline bool holds(const Formula& phi, const Confidence& c,
                  const IndependentContext& ctx) {
  const double p = eval_exact(phi, ctx).p_true;
  return p >= c.t - kTol && p <= 1.0 - c.f + kTol;
}

/// Checks, by joint and marginal enumeration, that the events
/// "phi's value lies in S" and "psi's value lies in T" are independent.
/// phi and psi must not share atoms.
inline bool check_independence_lemma(const Formula& phi, const Formula& psi,
                                     const IndependentContext& ctx, BoolSet S,
                                     BoolSet T) {
  std::set<std::string> phi_atoms = atom_set(phi);
  std::set<std::string> psi_atoms = atom_set(psi);
  for (const std::string& name : phi_atoms) {
    if (psi_atoms.count(name)) {
      throw SharedAtoms("formulas share atom '" + name + "'");
    }
  }

  std::vector<std::string> joint_names(phi_atoms.begin(), phi_atoms.end());
  joint_names.insert(joint_names.end(), psi_atoms.begin(), psi_atoms.end());
  if (joint_names.size() > static_cast<size_t>(kMaxEnumerationAtoms)) {
    throw TooManyAtoms("joint enumeration over " +
                       std::to_string(joint_names.size()) + " atoms");
  }

  const auto index = detail::atom_indices(joint_names);
  const auto probs = detail::atom_probs(joint_names, ctx);
  const auto phi_c = detail::CompiledFormula::compile(phi, index);
  const auto psi_c = detail::CompiledFormula::compile(psi, index);

  const std::uint32_t count = 1u << joint_names.size();
  double joint = 0.0, comp = 0.0;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    if (S.contains(phi_c.eval(mask)) && T.contains(psi_c.eval(mask))) {
      const double y = detail::assignment_weight(mask, probs) - comp;
      const double t = joint + y;
      comp = (t - joint) - y;
      joint = t;
    }
  }
  const double p_phi = detail::prob_in_set(phi_c, S, probs);
  const double p_psi = detail::prob_in_set(psi_c, T, probs);
  return std::fabs(joint - p_phi * p_psi) <= kTol;
}

namespace detail {

inline void require_intro_only(const ProofTree& node) {
  if (node.rule == Rule::ImpEl || node.rule == Rule::ImpEr) {
    throw EliminationRulePresent("proof uses elimination rule " +
                                 std::string(rule_name(node.rule)));
  }
  for (const ProofTree& premise : node.premises) require_intro_only(premise);
}

}  // namespace detail

/// Soundness check for the guaranteed fragment: the proof must use base and
/// introduction rules only and conclude a linear formula; the result is then
/// whether the concluded confidence interval really contains the formula's
/// exact probability under the context. Callers are expected to pick
/// contexts consistent with the (ax) leaf confidences.
inline bool check_soundness(const ProofTree& tree, const IndependentContext& ctx) {
  detail::require_intro_only(tree);
  if (!is_linear(tree.conclusion.goal)) {
    throw NonLinearFormula("conclusion '" + to_string(tree.conclusion.goal) +
                           "' repeats an atom");
  }
  return holds(tree.conclusion.goal, tree.conclusion.confidence, ctx);
}

}  // namespace qcl
