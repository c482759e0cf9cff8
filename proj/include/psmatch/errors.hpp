#pragma once

#include <stdexcept>
#include <string>

namespace psmatch {

// Malformed or out-of-contract input (non-finite scores, bad tables, bad files).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A caliper that violates the structural conditions of its family, or one
// that is not certified for the algorithm it was handed to.
class InvalidCaliper : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// The requested target cannot be reached on this data.
class Infeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace psmatch
