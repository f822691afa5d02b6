#pragma once

#include <stdexcept>
#include <string>

namespace hardy {

// Argument outside the mathematical domain of an operation (|z| > 1, p < 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input data that violates a documented invariant: malformed files, failed
// certificate re-validation, out-of-range parameters.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Gram matrix of the kernel reduction is numerically singular.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, int first, int second)
      : std::runtime_error(what), first_(first), second_(second) {}

  int first_index() const noexcept { return first_; }
  int second_index() const noexcept { return second_; }

 private:
  int first_;
  int second_;
};

// A study row broke g <= D_2 + tol. Carries a forensic dump of both certificates.
class SandwichViolation : public std::runtime_error {
 public:
  SandwichViolation(const std::string& what, std::string forensic)
      : std::runtime_error(what), forensic_(std::move(forensic)) {}

  const std::string& forensic() const noexcept { return forensic_; }

 private:
  std::string forensic_;
};

}  // namespace hardy
