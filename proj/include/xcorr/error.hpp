#pragma once

#include <stdexcept>
#include <string>

namespace xcorr {

// Bad parameters or malformed input. Maps to CLI exit code 1.
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// The request is well formed but refused for size reasons (enumeration budget,
// oracle feasibility). Maps to CLI exit code 2.
class Infeasible : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace xcorr
