#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace zerr {

/// Malformed input text (file formats, CLI literals).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value that parsed but breaks a domain invariant. Carries every violation found.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  explicit ValidationError(const std::string& violation)
      : ValidationError(std::vector<std::string>{violation}) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// An exhaustive search hit its configured cap. Never reported as a result.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zerr
