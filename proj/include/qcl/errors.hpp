#pragma once

#include <stdexcept>
#include <string>

namespace qcl {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Confidence space and rule arithmetic.
struct InvalidConfidence : Error { using Error::Error; };
struct ClampedOutOfSpace : Error { using Error::Error; };
struct SideConditionViolated : Error { using Error::Error; };

// Proof trees.
struct MissingAxiomConfidence : Error { using Error::Error; };
struct MalformedProof : Error { using Error::Error; };
struct UnknownAtom : Error { using Error::Error; };

// Probabilistic semantics.
struct TooManyAtoms : Error { using Error::Error; };
struct SharedAtoms : Error { using Error::Error; };
struct NonLinearFormula : Error { using Error::Error; };
struct EliminationRulePresent : Error { using Error::Error; };

// Fault trees and file formats.
struct SchemaError : Error { using Error::Error; };
struct UnknownBasicEvent : Error { using Error::Error; };

// Confidence functions and solvers.
struct EvalError : Error { using Error::Error; };
struct BadParameter : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };

// Experiments.
struct DegenerateConfidence : Error { using Error::Error; };

}  // namespace qcl
