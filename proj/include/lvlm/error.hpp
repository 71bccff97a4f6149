#pragma once

#include <stdexcept>
#include <string>

namespace lvlm {

// Malformed or incompatible input: bad shapes, out-of-range indices,
// unparsable files. Maps to exit code 1 in the CLI.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure on otherwise well-formed input, such as a covariance
// that is not positive definite. Maps to exit code 2 in the CLI.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lvlm
