#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zeroone {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs disagree on alphabet, depth or vocabulary.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// An explicit size guard (search size, element cap, work cap) was exceeded.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// A generated structure outgrew its element cap.
class CapExceeded : public GuardError {
 public:
  CapExceeded(const std::string& what, std::size_t reached)
      : GuardError(what + ": element cap exceeded after " +
                   std::to_string(reached) + " elements"),
        reached_(reached) {}

  std::size_t reached() const noexcept { return reached_; }

 private:
  std::size_t reached_;
};

/// A numeric iteration ran out of its step budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A precondition on a domain argument does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace zeroone
