#pragma once

#include <stdexcept>
#include <string>

namespace l1e {

/// Thrown when an equation has no admissible solution (e.g. Lyapunov
/// equation with a non-Hurwitz matrix).
struct NoSolutionError : std::runtime_error {
  explicit NoSolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when bisection endpoints do not bracket a stability transition.
struct BracketError : std::runtime_error {
  explicit BracketError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when a test oracle fails to converge. Harnesses must report this,
/// never swallow it.
struct OracleFailure : std::runtime_error {
  explicit OracleFailure(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when an operation's hypothesis is not met by the supplied data
/// (e.g. convergence analysis on a diverged run).
struct NotApplicableError : std::runtime_error {
  explicit NotApplicableError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace l1e
