#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uvm {

/// Invalid input to a constructor or operation. `field()` names the offending
/// parameter (dotted path for nested configuration).
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Failure inside a numerical routine (instability, pole, non-finite value).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The explicit scheme cannot be stable with the requested number of steps.
class CflError : public NumericalError {
 public:
  CflError(std::size_t requested, std::size_t required)
      : NumericalError("explicit scheme unstable: n_t=" + std::to_string(requested) +
                       ", minimum admissible n_t=" + std::to_string(required)),
        requested_(requested),
        required_(required) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t requested_;
  std::size_t required_;
};

}  // namespace uvm
