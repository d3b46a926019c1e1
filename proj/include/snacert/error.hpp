#pragma once

#include <stdexcept>
#include <string>

namespace snacert {

// Malformed or invalid input data (syntax, shape, metric axioms). CLI exit 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation was called outside its precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace snacert
