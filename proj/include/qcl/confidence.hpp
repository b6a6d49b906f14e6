#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "qcl/errors.hpp"

namespace qcl {

/// Comparison tolerance used wherever two confidence values are tested for
/// equality. All quantities handled by the library have few significant
/// digits, so a fixed absolute tolerance is adequate.
inline constexpr double kTol = 1e-9;

/// A point of the confidence space C = {(t, f) in [0,1]^2 : t + f <= 1}.
///
/// t is the confidence that a statement holds, f the confidence that it does
/// not, and 1 - t - f the amount of ignorance. Equivalently, (t, f) is the
/// probability interval [t, 1 - f]. (1, 0) is certainty, (0, 0) is total
/// absence of knowledge.
struct Confidence {
  double t = 0.0;
  double f = 0.0;

  Confidence() = default;

  Confidence(double t_, double f_) : t(t_), f(f_) {
    if (!(t >= -kTol && t <= 1.0 + kTol && f >= -kTol && f <= 1.0 + kTol &&
          t + f <= 1.0 + kTol)) {
      throw InvalidConfidence("confidence (" + std::to_string(t_) + ", " +
                              std::to_string(f_) + ") lies outside C");
    }
  }

  friend bool operator==(const Confidence&, const Confidence&) = default;
};

inline bool approx_equal(const Confidence& a, const Confidence& b,
                         double tol = kTol) {
  return std::fabs(a.t - b.t) <= tol && std::fabs(a.f - b.f) <= tol;
}

/// Confidence order: b is at least as informative as a, componentwise.
inline bool confidence_leq(const Confidence& a, const Confidence& b) {
  return a.t <= b.t && a.f <= b.f;
}

/// Clamps both raw rule outputs to [0,1]. Raw outputs always satisfy
/// t + f <= 1, so a violation after clamping means the rule arithmetic
/// itself is broken.
inline Confidence clamp(double t_raw, double f_raw) {
  const double t = std::min(std::max(t_raw, 0.0), 1.0);
  const double f = std::min(std::max(f_raw, 0.0), 1.0);
  if (t + f > 1.0 + kTol) {
    throw ClampedOutOfSpace("clamped confidence (" + std::to_string(t) + ", " +
                            std::to_string(f) + ") has t + f > 1");
  }
  return Confidence(t, f);
}

/// (=>I): from phi:(t,f) and psi:(t',f'), phi => psi gets
/// (f + t' - f t', t f').
inline Confidence rule_imp_i(const Confidence& phi, const Confidence& psi) {
  return clamp(phi.f + psi.t - phi.f * psi.t, phi.t * psi.f);
}

/// (=>E,l): from phi => psi:(t,f) and phi:(t',f'), psi gets
/// (1 - (1-t)/t', f / (1-f')). Requires t' != 0 and f' != 1: a false
/// antecedent carries no information about the consequent.
inline Confidence rule_imp_e_l(const Confidence& imp, const Confidence& phi) {
  if (phi.t == 0.0 || phi.f == 1.0) {
    throw SideConditionViolated("(=>E,l) requires t' != 0 and f' != 1");
  }
  return clamp(1.0 - (1.0 - imp.t) / phi.t, imp.f / (1.0 - phi.f));
}

/// (=>E,r): from phi => psi:(t,f) and psi:(t',f'), phi gets
/// (f / (1-t'), 1 - (1-t)/f'). Requires t' != 1 and f' != 0.
inline Confidence rule_imp_e_r(const Confidence& imp, const Confidence& psi) {
  if (psi.t == 1.0 || psi.f == 0.0) {
    throw SideConditionViolated("(=>E,r) requires t' != 1 and f' != 0");
  }
  return clamp(imp.f / (1.0 - psi.t), 1.0 - (1.0 - imp.t) / psi.f);
}

/// (negI): negation swaps the two components.
inline Confidence rule_neg_i(const Confidence& c) { return clamp(c.f, c.t); }

/// (andI): (t t', f + f' - f f'), the product T-norm and its dual.
inline Confidence rule_and_i(const Confidence& a, const Confidence& b) {
  return clamp(a.t * b.t, a.f + b.f - a.f * b.f);
}

/// (orI): (t + t' - t t', f f').
inline Confidence rule_or_i(const Confidence& a, const Confidence& b) {
  return clamp(a.t + b.t - a.t * b.t, a.f * b.f);
}

}  // namespace qcl
