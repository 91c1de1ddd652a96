#pragma once

#include <stdexcept>
#include <string>

namespace nsw {

// Malformed instance or task data (bad utility, dimension mismatch, parse failure).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bundles that are not a partition of the goods.
class InvalidAllocation : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// An algorithm was called outside its stated precondition (e.g. v_max >= mu
// passed to the grid builder).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Size guard of an exhaustive routine exceeded, or a value overflowed the
// fixed-width range used internally.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nsw
