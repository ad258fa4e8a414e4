#pragma once

#include <stdexcept>
#include <string>

namespace tunable {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (domain, shape, sign).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical routine failed to produce a trustworthy answer.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidInput(message);
}

}  // namespace detail
}  // namespace tunable
