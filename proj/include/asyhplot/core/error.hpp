#pragma once

#include <stdexcept>
#include <string>

namespace asyhplot {

/// Malformed or out-of-contract input (bad files, bad shapes, bad parameters).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation could not produce a valid result on otherwise well-formed input.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace asyhplot
