#pragma once

#include <stdexcept>
#include <string>

namespace qng {

// Input outside the domain of a formula (negative rate, V outside (0,1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A quadrature or truncation refinement did not settle within its budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Fock-space cutoff is too small for the requested tail bound.
class CutoffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed object violates one of its structural invariants
// (trace, hermiticity, positivity, monotone threshold curve).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A (criterion, noise) or sweep combination that the engine does not model.
class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qng
