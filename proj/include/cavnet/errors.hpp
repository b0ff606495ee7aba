#pragma once

#include <stdexcept>
#include <string>

namespace cavnet {

// Config / argument problems. The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Integration accuracy failures (trace drift, non-convergence). Exit code 3.
class NumericalAccuracyError : public std::runtime_error {
public:
    explicit NumericalAccuracyError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cavnet
