#pragma once

#include <stdexcept>
#include <string>

namespace ucodes {

/// Input violates a documented precondition (bad rank, size mismatch, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A randomized construction or sampler missed its certification target after
/// every allowed resample.
class CertificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ucodes
