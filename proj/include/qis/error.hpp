#pragma once

#include <stdexcept>
#include <string>

namespace qis {

// File and format failures (bad magic, truncated payload, missing file).
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Numerical blow-up in an iterative solver. The CLI maps this to exit code 3.
class DivergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Requested inversion at a fully-saturated measurement (zero probability mass).
class SaturationError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

} // namespace qis
