#ifndef UCSCREEN_ERRORS_HPP
#define UCSCREEN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ucscreen {

/// Malformed input text; `path` is a JSON-pointer-like location.
class ParseError : public std::runtime_error {
public:
  ParseError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Caller misuse: dimension mismatches, bad labels, missing prerequisites.
class UsageError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A guard (node limit, enumeration size, resample budget) was exceeded.
class ResourceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The relaxed screening region is empty (typically a cost cut below C*).
class ScreeningInfeasible : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The UC model itself has no feasible commitment.
class InfeasibleUc : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ucscreen

#endif
