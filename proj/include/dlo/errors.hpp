#pragma once

#include <stdexcept>
#include <string>

namespace dlo {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration / parameter combination. CLI maps this to exit code 1.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Mismatched vector/curve lengths between operands.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Coincident points, reversed segments and similar geometric degeneracies.
class GeometryError : public Error {
public:
    using Error::Error;
};

// Simulator produced a non-finite state. CLI maps this to exit code 2.
class InstabilityError : public Error {
public:
    InstabilityError(const std::string& what, double max_velocity, long step_index)
        : Error(what), max_velocity(max_velocity), step_index(step_index) {}

    double max_velocity = 0.0;
    long step_index = 0;
};

} // namespace dlo
