#pragma once

#include <stdexcept>
#include <string>

namespace mixnorm {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Quadrature or root finding that stopped short of its tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  double achieved_error() const { return achieved_error_; }

 private:
  double achieved_error_;
};

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Kernel series cut too early for the requested accuracy.
class UnconvergedTruncation : public std::runtime_error {
 public:
  UnconvergedTruncation(const std::string& what, long required_degree)
      : std::runtime_error(what), required_degree_(required_degree) {}
  long required_degree() const { return required_degree_; }

 private:
  long required_degree_;
};

}  // namespace mixnorm
