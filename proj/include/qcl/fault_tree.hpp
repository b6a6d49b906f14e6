#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcl/proof.hpp"
#include "qcl/rng.hpp"

namespace qcl {

/// AND/OR gate tree over named basic events. Basic events are independent
/// components; a gate fires when all (AND) or any (OR) of its children fire,
/// and the system fails when the root fires.
struct FaultTree {
  enum class Kind { Basic, And, Or };

  Kind kind = Kind::Basic;
  std::string name;                 // basic events only
  std::vector<FaultTree> children;  // gates only, always >= 2
};

/// Basic-event names of the tree in left-to-right leaf order.
inline void collect_basic_events(const FaultTree& ft, std::vector<std::string>& out) {
  if (ft.kind == FaultTree::Kind::Basic) {
    out.push_back(ft.name);
    return;
  }
  for (const FaultTree& child : ft.children) collect_basic_events(child, out);
}

inline std::vector<std::string> basic_events(const FaultTree& ft) {
  std::vector<std::string> out;
  collect_basic_events(ft, out);
  return out;
}

/// Enforces the tree invariants: every gate has at least two children and
/// basic-event names are unique across the whole tree.
inline void validate_ft(const FaultTree& ft) {
  if (ft.kind == FaultTree::Kind::Basic) {
    if (!is_identifier(ft.name)) {
      throw SchemaError("basic-event name '" + ft.name + "' is not an identifier");
    }
  } else if (ft.children.size() < 2) {
    throw SchemaError("gate has " + std::to_string(ft.children.size()) +
                      " children, at least 2 required");
  }
  for (const FaultTree& child : ft.children) validate_ft(child);

  std::vector<std::string> names = basic_events(ft);
  std::set<std::string> distinct(names.begin(), names.end());
  if (distinct.size() != names.size()) {
    throw SchemaError("duplicate basic-event name in fault tree");
  }
}

inline FaultTree basic_event(std::string name) {
  FaultTree ft{FaultTree::Kind::Basic, std::move(name), {}};
  validate_ft(ft);
  return ft;
}

inline FaultTree and_gate(std::vector<FaultTree> children) {
  FaultTree ft{FaultTree::Kind::And, "", std::move(children)};
  validate_ft(ft);
  return ft;
}

inline FaultTree or_gate(std::vector<FaultTree> children) {
  FaultTree ft{FaultTree::Kind::Or, "", std::move(children)};
  validate_ft(ft);
  return ft;
}

namespace detail {

inline ProofTree translate_node(const FaultTree& ft, const Context& gamma,
                                const std::map<std::string, Confidence>& leaf_conf) {
  if (ft.kind == FaultTree::Kind::Basic) {
    auto it = leaf_conf.find(ft.name);
    if (it == leaf_conf.end()) {
      throw UnknownBasicEvent("no confidence given for basic event '" + ft.name + "'");
    }
    ProofTree leaf;
    leaf.rule = Rule::Ax;
    leaf.conclusion = Sequent{gamma, Formula::atom(ft.name), it->second};
    return leaf;
  }

  // Dualization: the proof speaks about absence of faults, so an AND gate
  // (all children must fault) becomes a disjunction of the children being
  // fault-free, and an OR gate a conjunction. N-ary gates fold left to
  // binary rule applications.
  const bool is_and_gate = ft.kind == FaultTree::Kind::And;
  ProofTree acc = translate_node(ft.children[0], gamma, leaf_conf);
  for (size_t i = 1; i < ft.children.size(); ++i) {
    ProofTree next = translate_node(ft.children[i], gamma, leaf_conf);
    ProofTree parent;
    parent.rule = is_and_gate ? Rule::OrI : Rule::AndI;
    Formula goal = is_and_gate
                       ? Formula::disjunction(acc.conclusion.goal, next.conclusion.goal)
                       : Formula::conjunction(acc.conclusion.goal, next.conclusion.goal);
    Confidence conf = is_and_gate
                          ? rule_or_i(acc.conclusion.confidence, next.conclusion.confidence)
                          : rule_and_i(acc.conclusion.confidence, next.conclusion.confidence);
    parent.conclusion = Sequent{gamma, std::move(goal), conf};
    parent.premises.push_back(std::move(acc));
    parent.premises.push_back(std::move(next));
    acc = std::move(parent);
  }
  return acc;
}

}  // namespace detail

/// Translates a fault tree into an introduction-only proof. Unique leaf
/// names guarantee the conclusion is linear, so the translated proof always
/// lands in the soundness-guaranteed fragment.
inline ProofTree translate(const FaultTree& ft,
                           const std::map<std::string, Confidence>& leaf_conf) {
  validate_ft(ft);
  Context gamma;
  for (const std::string& name : basic_events(ft)) {
    auto it = leaf_conf.find(name);
    if (it == leaf_conf.end()) {
      throw UnknownBasicEvent("no confidence given for basic event '" + name + "'");
    }
    gamma.insert(Formula::atom(name), it->second);
  }
  return detail::translate_node(ft, gamma, leaf_conf);
}

/// The conclusion's true confidence as a function of per-component true
/// confidences (false confidences held at 0): an AND gate combines child
/// reliabilities r_i as 1 - prod(1 - r_i), an OR gate as prod(r_i).
class ReliabilityPolynomial {
 public:
  explicit ReliabilityPolynomial(FaultTree ft) : ft_(std::move(ft)) {
    validate_ft(ft_);
    leaves_ = basic_events(ft_);
  }

  const std::vector<std::string>& leaf_order() const { return leaves_; }
  const FaultTree& tree() const { return ft_; }

  /// Values indexed per leaf_order().
  double eval_ordered(std::span<const double> leaf_values) const {
    size_t next_leaf = 0;
    return eval_node(ft_, leaf_values, next_leaf);
  }

  double operator()(const std::map<std::string, double>& leaf_values) const {
    std::vector<double> ordered;
    ordered.reserve(leaves_.size());
    for (const std::string& name : leaves_) {
      auto it = leaf_values.find(name);
      if (it == leaf_values.end()) {
        throw UnknownBasicEvent("no value given for basic event '" + name + "'");
      }
      ordered.push_back(it->second);
    }
    return eval_ordered(ordered);
  }

 private:
  static double eval_node(const FaultTree& node, std::span<const double> values,
                          size_t& next_leaf) {
    if (node.kind == FaultTree::Kind::Basic) return values[next_leaf++];
    if (node.kind == FaultTree::Kind::And) {
      double miss = 1.0;
      for (const FaultTree& child : node.children) {
        miss *= 1.0 - eval_node(child, values, next_leaf);
      }
      return 1.0 - miss;
    }
    double prod = 1.0;
    for (const FaultTree& child : node.children) {
      prod *= eval_node(child, values, next_leaf);
    }
    return prod;
  }

  FaultTree ft_;
  std::vector<std::string> leaves_;
};

inline ReliabilityPolynomial reliability_fn(const FaultTree& ft) {
  return ReliabilityPolynomial(ft);
}

namespace detail {

inline double failure_node(const FaultTree& node,
                           const std::map<std::string, double>& leaf_failure) {
  if (node.kind == FaultTree::Kind::Basic) {
    auto it = leaf_failure.find(node.name);
    if (it == leaf_failure.end()) {
      throw UnknownBasicEvent("no failure probability for basic event '" +
                              node.name + "'");
    }
    return it->second;
  }
  if (node.kind == FaultTree::Kind::And) {
    double prod = 1.0;
    for (const FaultTree& child : node.children) {
      prod *= failure_node(child, leaf_failure);
    }
    return prod;
  }
  double miss = 1.0;
  for (const FaultTree& child : node.children) {
    miss *= 1.0 - failure_node(child, leaf_failure);
  }
  return 1.0 - miss;
}

}  // namespace detail

/// Classical quantitative propagation of independent fault probabilities:
/// an AND gate outputs the product of its children, an OR gate
/// 1 - prod(1 - child).
inline double failure_prob(const FaultTree& ft,
                           const std::map<std::string, double>& leaf_failure) {
  return detail::failure_node(ft, leaf_failure);
}

namespace detail {

inline FaultTree random_ft_node(int n_leaves, Rng& rng, int& next_name) {
  if (n_leaves == 1) {
    return FaultTree{FaultTree::Kind::Basic, "e" + std::to_string(next_name++), {}};
  }
  const int left = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_leaves - 1)));
  const FaultTree::Kind kind = rng.bernoulli(0.5) ? FaultTree::Kind::And : FaultTree::Kind::Or;
  std::vector<FaultTree> children;
  children.push_back(random_ft_node(left, rng, next_name));
  children.push_back(random_ft_node(n_leaves - left, rng, next_name));
  return FaultTree{kind, "", std::move(children)};
}

}  // namespace detail

/// Random full binary gate tree with the given number of leaves
/// (n_leaves - 1 binary gates). The split of leaves between the two subtrees
/// is uniform, each gate is AND or OR with probability 1/2, and leaves are
/// named e0, e1, ... left to right. Deterministic in the seed.
inline FaultTree random_ft(int n_leaves, std::uint64_t seed) {
  if (n_leaves < 2) throw BadParameter("random_ft needs at least 2 leaves");
  Rng rng(seed);
  int next_name = 0;
  return detail::random_ft_node(n_leaves, rng, next_name);
}

}  // namespace qcl
