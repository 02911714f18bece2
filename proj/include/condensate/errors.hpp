#pragma once

#include <stdexcept>
#include <string>

namespace condensate {

/// Malformed or inconsistent input (shapes, parse failures, mismatched algebras).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical precondition of an operation does not hold.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configured resource cap would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::size_t required)
      : std::runtime_error(what), required_(required) {}
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t required_;
};

/// An internal consistency assertion failed. Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace condensate
