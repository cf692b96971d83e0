#pragma once

#include <stdexcept>
#include <string>

namespace medianwalls {

/// A precondition on the inputs of an operation was violated.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configured size budget was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; `context` names the offending field.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& context, const std::string& what)
      : std::runtime_error(context + ": " + what), context_(context) {}
  [[nodiscard]] const std::string& context() const noexcept { return context_; }

 private:
  std::string context_;
};

}  // namespace medianwalls
