#pragma once

#include <stdexcept>
#include <string>

namespace sbt {

// Malformed or inconsistent input data (duplicates, values out of the domain).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Index or cut point outside the valid range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Lookup of an absent value or position.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A caller broke an operation's precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Request exceeds a configured memory/time guard.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant failed. Always a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sbt
