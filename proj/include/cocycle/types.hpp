#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>

namespace cocycle {

/// Fiber states and torus coordinates are dense double vectors.
using Vec = Eigen::VectorXd;

/// Malformed inputs: dimension mismatch, non-finite arguments, bad ranges.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A fiber state left the overflow guard ball (or became non-finite).
/// Carries the offending state and the step index at which it happened,
/// so callers can turn it into a non-dissipativity verdict.
struct OverflowError : std::runtime_error {
    Vec u;
    Vec y_coords;
    long t;
    OverflowError(const std::string& msg, Vec u_, Vec y_, long t_)
        : std::runtime_error(msg), u(std::move(u_)), y_coords(std::move(y_)), t(t_) {}
};

/// An evaluation asked for data outside a trajectory's index window.
struct WindowError : std::runtime_error {
    explicit WindowError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An analysis precondition on the supplied data failed (window too small,
/// no adjacent fiber pair, missing contraction certificate, ...).
struct DiagnosticError : std::runtime_error {
    explicit DiagnosticError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Unknown scenario name; the message lists the registry contents.
struct RegistryError : std::runtime_error {
    explicit RegistryError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative solver hit its iteration cap; carries the last sup-change.
struct ConvergenceError : std::runtime_error {
    double last_change;
    ConvergenceError(const std::string& msg, double last_change_)
        : std::runtime_error(msg), last_change(last_change_) {}
};

/// Malformed run config; line is 1-based in the config file (0 = unknown).
struct ConfigError : std::runtime_error {
    int line;
    ConfigError(const std::string& msg, int line_)
        : std::runtime_error(msg), line(line_) {}
};

}  // namespace cocycle
