#pragma once

#include <stdexcept>
#include <string>

namespace relieve {

// Bad parameters or misuse of an operation. CLI maps this to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input data (CSV, JSON sidecars). Carries a human-readable
// location in the message when one is known. CLI exit code 2.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem trouble: unreadable input, unwritable output. CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A broken internal invariant; indicates a bug, not bad input. CLI exit code 4.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace relieve
