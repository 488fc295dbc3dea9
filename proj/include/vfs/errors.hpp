#pragma once

#include <stdexcept>
#include <string>

namespace vfs {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the frequency set (e.g. tau = eta = 0) or negative gamma.
class InvalidFrequency : public Error {
 public:
  using Error::Error;
};

/// Mach number within tolerance of sqrt(2), or an operation called in the wrong regime.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// |mu+ + mu-| fell below the threshold and the continuous extension is disabled.
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

class NoRootFound : public Error {
 public:
  using Error::Error;
};

class QuadratureUnderResolved : public Error {
 public:
  using Error::Error;
};

class DecayViolated : public Error {
 public:
  using Error::Error;
};

/// |Sigma| < floor * Lambda^2 at a lattice frequency.
class SymbolTooSmall : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vfs
