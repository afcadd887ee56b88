#pragma once

#include <stdexcept>
#include <string>

namespace phardy {

/// Invalid problem parameters, options or file content.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A Riesz convolution whose tail test shows the integral is infinite.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Descent produced negative values on more than the tolerated share of nodes.
class PositivityLossError : public std::runtime_error {
public:
    explicit PositivityLossError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace phardy
