#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qcl/confidence.hpp"
#include "qcl/errors.hpp"

namespace qcl {

/// Expression tree over the single resource variable r, defining how much
/// confidence a component gains from testing effort. Values are clamped to
/// [0,1] on evaluation; the function is expected to be non-decreasing
/// (see check_monotone).
class ConfidenceExpr {
 public:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Min, Max, Neg };

  static ConfidenceExpr constant(double v) { return make(Op::Const, v, {}); }
  static ConfidenceExpr var() { return make(Op::Var, 0.0, {}); }
  static ConfidenceExpr add(ConfidenceExpr a, ConfidenceExpr b) {
    return make(Op::Add, 0.0, {std::move(a), std::move(b)});
  }
  static ConfidenceExpr sub(ConfidenceExpr a, ConfidenceExpr b) {
    return make(Op::Sub, 0.0, {std::move(a), std::move(b)});
  }
  static ConfidenceExpr mul(ConfidenceExpr a, ConfidenceExpr b) {
    return make(Op::Mul, 0.0, {std::move(a), std::move(b)});
  }
  static ConfidenceExpr div(ConfidenceExpr a, ConfidenceExpr b) {
    return make(Op::Div, 0.0, {std::move(a), std::move(b)});
  }
  static ConfidenceExpr pow(ConfidenceExpr base, ConfidenceExpr exponent) {
    return make(Op::Pow, 0.0, {std::move(base), std::move(exponent)});
  }
  static ConfidenceExpr min(ConfidenceExpr a, ConfidenceExpr b) {
    return make(Op::Min, 0.0, {std::move(a), std::move(b)});
  }
  static ConfidenceExpr max(ConfidenceExpr a, ConfidenceExpr b) {
    return make(Op::Max, 0.0, {std::move(a), std::move(b)});
  }
  static ConfidenceExpr neg(ConfidenceExpr a) {
    return make(Op::Neg, 0.0, {std::move(a)});
  }

  Op op() const { return node_->op; }
  double value() const { return node_->value; }
  size_t arg_count() const { return node_->args.size(); }
  const ConfidenceExpr& arg(size_t i) const { return node_->args[i]; }

  bool operator==(const ConfidenceExpr& other) const {
    return equal(*node_, *other.node_);
  }
  bool operator!=(const ConfidenceExpr& other) const { return !(*this == other); }

 private:
  struct Node {
    Op op;
    double value;
    std::vector<ConfidenceExpr> args;
  };

  static ConfidenceExpr make(Op op, double value, std::vector<ConfidenceExpr> args) {
    ConfidenceExpr e;
    e.node_ = std::make_shared<const Node>(Node{op, value, std::move(args)});
    return e;
  }

  static bool equal(const Node& a, const Node& b) {
    if (a.op != b.op || a.args.size() != b.args.size()) return false;
    if (a.op == Op::Const && a.value != b.value) return false;
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (!(a.args[i] == b.args[i])) return false;
    }
    return true;
  }

  ConfidenceExpr() = default;
  std::shared_ptr<const Node> node_;
};

inline size_t expected_arg_count(ConfidenceExpr::Op op) {
  switch (op) {
    case ConfidenceExpr::Op::Const:
    case ConfidenceExpr::Op::Var:
      return 0;
    case ConfidenceExpr::Op::Neg:
      return 1;
    default:
      return 2;
  }
}

namespace detail {

inline double eval_raw(const ConfidenceExpr& e, double r) {
  using Op = ConfidenceExpr::Op;
  double result = 0.0;
  switch (e.op()) {
    case Op::Const: result = e.value(); break;
    case Op::Var: result = r; break;
    case Op::Add: result = eval_raw(e.arg(0), r) + eval_raw(e.arg(1), r); break;
    case Op::Sub: result = eval_raw(e.arg(0), r) - eval_raw(e.arg(1), r); break;
    case Op::Mul: result = eval_raw(e.arg(0), r) * eval_raw(e.arg(1), r); break;
    case Op::Div: {
      const double denom = eval_raw(e.arg(1), r);
      if (denom == 0.0) throw EvalError("division by zero at r = " + std::to_string(r));
      result = eval_raw(e.arg(0), r) / denom;
      break;
    }
    case Op::Pow: result = std::pow(eval_raw(e.arg(0), r), eval_raw(e.arg(1), r)); break;
    case Op::Min: result = std::min(eval_raw(e.arg(0), r), eval_raw(e.arg(1), r)); break;
    case Op::Max: result = std::max(eval_raw(e.arg(0), r), eval_raw(e.arg(1), r)); break;
    case Op::Neg: result = -eval_raw(e.arg(0), r); break;
  }
  if (!std::isfinite(result)) {
    throw EvalError("expression not finite at r = " + std::to_string(r));
  }
  return result;
}

}  // namespace detail

/// Evaluates the expression at r and clamps the result to [0,1]. When the
/// optional flag is passed, it records whether clamping fired, so callers
/// can tell well-formed confidence functions from overshooting ones.
inline double evaluate(const ConfidenceExpr& expr, double r, bool* clamped = nullptr) {
  const double raw = detail::eval_raw(expr, r);
  const double out = std::min(std::max(raw, 0.0), 1.0);
  if (clamped != nullptr) *clamped = out != raw;
  return out;
}

/// Coverage testing: a suite of n tests reaches full coverage, each costing
/// r0, so f(r) = min(r / (n r0), 1).
struct Coverage {
  double n = 0;
  double r0 = 0;
};

/// Uniform random testing: each test covers an independent fraction p of the
/// input space and costs r0, so f(r) = 1 - (1-p)^(r/r0).
struct RandomTesting {
  double p = 0;
  double r0 = 0;
};

/// Exponential growth f(r) = 1 - base^(r + shift); shift credits effort
/// already represented in the base confidence.
struct Exponential {
  double base = 0;
  double shift = 0;
};

using BuiltinFamily = std::variant<Coverage, RandomTesting, Exponential>;

inline ConfidenceExpr builtin(const BuiltinFamily& family) {
  using E = ConfidenceExpr;
  if (const auto* cov = std::get_if<Coverage>(&family)) {
    if (!(cov->n > 0.0) || !(cov->r0 > 0.0)) {
      throw BadParameter("coverage family needs n > 0 and r0 > 0");
    }
    return E::min(E::div(E::var(), E::constant(cov->n * cov->r0)), E::constant(1.0));
  }
  if (const auto* rt = std::get_if<RandomTesting>(&family)) {
    if (!(rt->p > 0.0 && rt->p < 1.0) || !(rt->r0 > 0.0)) {
      throw BadParameter("random-testing family needs p in (0,1) and r0 > 0");
    }
    return E::sub(E::constant(1.0),
                  E::pow(E::constant(1.0 - rt->p), E::div(E::var(), E::constant(rt->r0))));
  }
  const auto& exp = std::get<Exponential>(family);
  if (!(exp.base > 0.0 && exp.base < 1.0) || !std::isfinite(exp.shift)) {
    throw BadParameter("exponential family needs base in (0,1)");
  }
  return E::sub(E::constant(1.0),
                E::pow(E::constant(exp.base), E::add(E::var(), E::constant(exp.shift))));
}

/// Sampled monotonicity gate: evaluates at `samples` equally spaced points
/// on [0, r_max] and rejects any decrease beyond tolerance. A sampled check,
/// not a proof; adequate as input validation for user-supplied expressions.
inline bool check_monotone(const ConfidenceExpr& expr, double r_max, int samples) {
  if (samples < 2) throw BadParameter("check_monotone needs at least 2 samples");
  double prev = evaluate(expr, 0.0);
  for (int i = 1; i < samples; ++i) {
    const double r = r_max * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double cur = evaluate(expr, r);
    if (cur < prev - kTol) return false;
    prev = cur;
  }
  return true;
}

/// One system component: its confidence function and the resources already
/// spent on it. Spending s first and then r must equal evaluating the
/// original function at r + s.
struct ComponentModel {
  std::string name;
  ConfidenceExpr expr = ConfidenceExpr::constant(0.0);
  double spent = 0.0;
};

/// Confidence of a component after granting it `additional` resources on top
/// of what was already spent.
inline double component_confidence(const ComponentModel& model, double additional) {
  return evaluate(model.expr, model.spent + additional);
}

}  // namespace qcl
