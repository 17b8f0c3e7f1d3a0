#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace hankelgm {

// Base class so callers can catch everything thrown by the library in one place.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the documented domain of an operation (bad alpha, empty
// interval, asymmetric grid, precondition violation named in the message).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Malformed descriptor strings, config files, unknown keys.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// A node evaluation produced a non-finite value; message names the node.
class SamplingError : public Error {
public:
    explicit SamplingError(const std::string& msg) : Error(msg) {}
};

// The requested tolerance could not be met; carries the error bound we did reach.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& msg, double achieved_bound)
        : Error(msg + " (achieved bound " + format(achieved_bound) + ")"), achieved(achieved_bound) {}
    double achieved;

private:
    static std::string format(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", v);
        return buf;
    }
};

// An iterative scheme (truncation ladder, panel refinement) failed to settle.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

}  // namespace hankelgm
