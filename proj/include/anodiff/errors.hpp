#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace anodiff {

/// Invalid model parameters, grids or run configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A scheme produced a non-finite field or hit a singular solve.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::size_t step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace anodiff
