#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace halfsym {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by a caller-supplied argument.
class InvalidInput : public Error {
public:
  using Error::Error;
};

class InvalidPlane : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

/// Exact solver refused because the problem exceeds its size cap.
class TooLarge : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

/// An iterative solver hit its iteration budget before reaching the requested
/// tolerance. `gap()` is the relative gap it did achieve.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double gap) : Error(what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

private:
  double gap_;
};

/// Malformed file content. `offset()` is the byte offset of the problem.
class ParseError : public Error {
public:
  ParseError(const std::string& detail, std::size_t offset)
      : Error(detail + " (at byte " + std::to_string(offset) + ")"),
        detail_(detail),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }

private:
  std::string detail_;
  std::size_t offset_;
};

/// Well-formed data that breaks a domain invariant (non-finite coordinates...).
class ValidationError : public Error {
public:
  using Error::Error;
};

class MissingFeature : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace halfsym
