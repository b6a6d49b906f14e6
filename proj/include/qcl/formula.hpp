#pragma once

#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcl/errors.hpp"

namespace qcl {

/// Propositional formulas over named atoms. The raw grammar is
///
///   phi ::= atom | true | false | phi => phi
///
/// Negation, disjunction and conjunction are syntactic sugar,
///
///   !phi       ==  phi => false
///   phi | psi  ==  !phi => psi
///   phi & psi  ==  !(!phi | !psi)
///
/// and the sugar constructors build these encodings directly, so structural
/// equality always compares desugared trees. Nodes are immutable and shared,
/// which makes copies cheap.
class Formula {
 public:
  enum class Kind { Atom, Top, Bottom, Implies };

  static Formula atom(std::string name) {
    return Formula(std::make_shared<const Node>(
        Node{Kind::Atom, std::move(name), nullptr, nullptr}));
  }
  static Formula top() {
    return Formula(std::make_shared<const Node>(
        Node{Kind::Top, "", nullptr, nullptr}));
  }
  static Formula bottom() {
    return Formula(std::make_shared<const Node>(
        Node{Kind::Bottom, "", nullptr, nullptr}));
  }
  static Formula implies(Formula lhs, Formula rhs) {
    return Formula(std::make_shared<const Node>(
        Node{Kind::Implies, "", std::move(lhs.node_), std::move(rhs.node_)}));
  }
  static Formula negation(Formula phi) {
    return implies(std::move(phi), bottom());
  }
  static Formula disjunction(Formula phi, Formula psi) {
    return implies(negation(std::move(phi)), std::move(psi));
  }
  static Formula conjunction(Formula phi, Formula psi) {
    return negation(disjunction(negation(std::move(phi)),
                                negation(std::move(psi))));
  }

  Kind kind() const { return node_->kind; }
  const std::string& atom_name() const { return node_->name; }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }

  bool operator==(const Formula& other) const {
    return equal(node_.get(), other.node_.get());
  }
  bool operator!=(const Formula& other) const { return !(*this == other); }

  /// Sugar pattern views on the desugared tree. Each returns true and fills
  /// the out-parameters when this node is exactly the corresponding encoding.
  bool match_negation(Formula* phi) const {
    if (kind() != Kind::Implies || node_->rhs->kind != Kind::Bottom) {
      return false;
    }
    *phi = lhs();
    return true;
  }
  bool match_disjunction(Formula* phi, Formula* psi) const {
    Formula neg_phi = top();
    if (kind() != Kind::Implies || !lhs().match_negation(&neg_phi)) {
      return false;
    }
    *phi = neg_phi;
    *psi = rhs();
    return true;
  }
  bool match_conjunction(Formula* phi, Formula* psi) const {
    Formula inner = top();
    Formula l = top(), r = top();
    if (!match_negation(&inner) || !inner.match_disjunction(&l, &r)) {
      return false;
    }
    Formula a = top(), b = top();
    if (!l.match_negation(&a) || !r.match_negation(&b)) return false;
    *phi = a;
    *psi = b;
    return true;
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case Kind::Atom:
        return a->name == b->name;
      case Kind::Top:
      case Kind::Bottom:
        return true;
      case Kind::Implies:
        return equal(a->lhs.get(), b->lhs.get()) &&
               equal(a->rhs.get(), b->rhs.get());
    }
    return false;
  }

  std::shared_ptr<const Node> node_;
};

/// Appends every atom occurrence in the raw (desugared) tree, duplicates
/// included.
inline void collect_atoms(const Formula& phi, std::vector<std::string>& out) {
  switch (phi.kind()) {
    case Formula::Kind::Atom:
      out.push_back(phi.atom_name());
      break;
    case Formula::Kind::Top:
    case Formula::Kind::Bottom:
      break;
    case Formula::Kind::Implies:
      collect_atoms(phi.lhs(), out);
      collect_atoms(phi.rhs(), out);
      break;
  }
}

inline std::set<std::string> atom_set(const Formula& phi) {
  std::vector<std::string> occurrences;
  collect_atoms(phi, occurrences);
  return std::set<std::string>(occurrences.begin(), occurrences.end());
}

/// True iff no atom occurs twice in the raw tree. The sugar encodings use
/// each operand once, so linearity of a sugared formula and of its desugared
/// form coincide.
inline bool is_linear(const Formula& phi) {
  std::vector<std::string> occurrences;
  collect_atoms(phi, occurrences);
  std::set<std::string> distinct(occurrences.begin(), occurrences.end());
  return distinct.size() == occurrences.size();
}

namespace detail {

// Precedence levels for rendering and parsing: => binds loosest and is
// right-associative, then |, &, and prefix !.
inline constexpr int kPrecImplies = 1;
inline constexpr int kPrecOr = 2;
inline constexpr int kPrecAnd = 3;
inline constexpr int kPrecUnary = 4;

inline void render(const Formula& phi, int min_prec, std::string& out) {
  Formula a = Formula::top(), b = Formula::top();
  if (phi.match_conjunction(&a, &b)) {
    const bool parens = kPrecAnd < min_prec;
    if (parens) out += '(';
    render(a, kPrecAnd, out);
    out += " & ";
    render(b, kPrecAnd + 1, out);
    if (parens) out += ')';
    return;
  }
  if (phi.match_disjunction(&a, &b)) {
    const bool parens = kPrecOr < min_prec;
    if (parens) out += '(';
    render(a, kPrecOr, out);
    out += " | ";
    render(b, kPrecOr + 1, out);
    if (parens) out += ')';
    return;
  }
  if (phi.match_negation(&a)) {
    out += '!';
    render(a, kPrecUnary, out);
    return;
  }
  switch (phi.kind()) {
    case Formula::Kind::Atom:
      out += phi.atom_name();
      return;
    case Formula::Kind::Top:
      out += "true";
      return;
    case Formula::Kind::Bottom:
      out += "false";
      return;
    case Formula::Kind::Implies: {
      const bool parens = kPrecImplies < min_prec;
      if (parens) out += '(';
      render(phi.lhs(), kPrecImplies + 1, out);
      out += " => ";
      render(phi.rhs(), kPrecImplies, out);
      if (parens) out += ')';
      return;
    }
  }
}

struct FormulaParser {
  std::string_view text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(std::string_view token) {
    skip_ws();
    if (text.substr(pos, token.size()) == token) {
      pos += token.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw SchemaError("formula parse error at offset " + std::to_string(pos) +
                      ": " + what);
  }

  Formula parse() {
    Formula result = parse_implies();
    skip_ws();
    if (pos != text.size()) fail("trailing input");
    return result;
  }

  Formula parse_implies() {
    Formula l = parse_or();
    if (eat("=>")) return Formula::implies(std::move(l), parse_implies());
    return l;
  }
  Formula parse_or() {
    Formula l = parse_and();
    while (true) {
      skip_ws();
      // Do not confuse '|' with a (nonexistent) '||' and never consume the
      // '=' of '=>' here.
      if (pos < text.size() && text[pos] == '|') {
        ++pos;
        l = Formula::disjunction(std::move(l), parse_and());
      } else {
        return l;
      }
    }
  }
  Formula parse_and() {
    Formula l = parse_unary();
    while (eat("&")) l = Formula::conjunction(std::move(l), parse_unary());
    return l;
  }
  Formula parse_unary() {
    if (eat("!")) return Formula::negation(parse_unary());
    return parse_primary();
  }
  Formula parse_primary() {
    skip_ws();
    if (eat("(")) {
      Formula inner = parse_implies();
      if (!eat(")")) fail("expected ')'");
      return inner;
    }
    if (pos >= text.size()) fail("unexpected end of input");
    const char c = text[pos];
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
      fail(std::string("unexpected character '") + c + "'");
    }
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
    }
    std::string name(text.substr(start, pos - start));
    if (name == "true") return Formula::top();
    if (name == "false") return Formula::bottom();
    return Formula::atom(std::move(name));
  }
};

}  // namespace detail

/// Renders with sugar recognized (conjunction, then disjunction, then
/// negation) and minimal parentheses. "true"/"false" are reserved words, so
/// atoms must not use them.
inline std::string to_string(const Formula& phi) {
  std::string out;
  detail::render(phi, 0, out);
  return out;
}

/// Inverse of to_string. Throws SchemaError on malformed input.
inline Formula parse_formula(std::string_view text) {
  detail::FormulaParser parser{text};
  return parser.parse();
}

/// Identifier charset accepted for atom / basic-event names in file formats.
inline bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  if (name == "true" || name == "false") return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) {
    return false;
  }
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

}  // namespace qcl
