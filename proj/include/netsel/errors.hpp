#pragma once

#include <stdexcept>
#include <string>

namespace netsel {

// Bad user-facing configuration: infeasible parameters, malformed files,
// contract violations at the API boundary. CLI exit code 2.
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: non-Hurwitz matrix where a stable one is required,
// quadrature budget exhausted, eigen-decomposition failure. CLI exit code 3.
class numerical_error : public std::runtime_error {
public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace netsel
