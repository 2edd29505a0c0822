#pragma once

#include <stdexcept>
#include <string>

namespace qwell {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Two objects were defined on incompatible grids (length or node count).
class GridMismatchError : public Error
{
  public:
    using Error::Error;
};

/// A zero (or otherwise unnormalizable) state was supplied.
class DegenerateStateError : public Error
{
  public:
    using Error::Error;
};

/// An argument lies outside its mathematical domain (index, quantum number, count).
class DomainError : public Error
{
  public:
    using Error::Error;
};

/// Barrier/well dimensions do not fit inside the total length.
class GeometryError : public Error
{
  public:
    using Error::Error;
};

/// Inverse iteration failed to reach the residual target.
class ConvergenceError : public Error
{
  public:
    ConvergenceError(const std::string& what, double worst_residual)
        : Error(what), worst_residual_(worst_residual)
    {
    }
    double worst_residual() const noexcept { return worst_residual_; }

  private:
    double worst_residual_;
};

/// The initial state has too little weight inside the retained eigenbasis.
class TruncationError : public Error
{
  public:
    TruncationError(const std::string& what, double captured_weight)
        : Error(what), captured_weight_(captured_weight)
    {
    }
    double captured_weight() const noexcept { return captured_weight_; }

  private:
    double captured_weight_;
};

/// Spectral states built on different eigenbases were combined.
class BasisMismatchError : public Error
{
  public:
    using Error::Error;
};

/// The eigenbasis cannot support the requested construction (e.g. E2 <= E1).
class InvalidBasisError : public Error
{
  public:
    using Error::Error;
};

/// The root-finding bracket does not straddle the target.
class BracketError : public Error
{
  public:
    using Error::Error;
};

/// The objective is not monotone over the bracket.
class NonMonotonicError : public Error
{
  public:
    using Error::Error;
};

/// Malformed or inconsistent scenario configuration.
class ConfigError : public Error
{
  public:
    using Error::Error;
};

/// Eigen cache file is unreadable, stale or fails re-verification.
class CacheError : public Error
{
  public:
    using Error::Error;
};

}  // namespace qwell
