#pragma once

#include <stdexcept>
#include <string>

namespace corefonto {

// Base for every error the library raises. The CLI maps the subclasses onto
// process exit codes (usage 1, data 2, invariant 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameters or flag combinations.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Unreadable or malformed input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace corefonto
