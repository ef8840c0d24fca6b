#pragma once

#include <stdexcept>
#include <string>

#include "formation/types.hpp"

namespace formation {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -- numeric kernel ----------------------------------------------------------

struct SingularMatrixError : Error {
  using Error::Error;
};

struct NoConvergenceError : Error {
  using Error::Error;
};

// -- assignment --------------------------------------------------------------

/// Condition v_i in Im N1(lambda_i) failed for the given spec column.
struct EigvecNotInImageError : Error {
  EigvecNotInImageError(Index index, double residual, std::string msg)
      : Error(std::move(msg)), index(index), residual(residual) {}
  Index index;
  double residual;
};

struct DependentEigvectorsError : Error {
  using Error::Error;
};

struct ImageConditionFailedError : Error {
  using Error::Error;
};

struct SingularShiftError : Error {
  using Error::Error;
};

struct ChainUnsolvableError : Error {
  ChainUnsolvableError(Index block, Index position, double residual, std::string msg)
      : Error(std::move(msg)), block(block), position(position), residual(residual) {}
  Index block;
  Index position;
  double residual;
};

struct SingularShiftSystemError : Error {
  using Error::Error;
};

struct InvalidSpecError : Error {
  using Error::Error;
};

struct AchievedMismatchError : Error {
  using Error::Error;
};

// -- topology ----------------------------------------------------------------

struct SingularVError : Error {
  using Error::Error;
};

struct RootComponentZeroError : Error {
  using Error::Error;
};

struct ZeroComponentError : Error {
  using Error::Error;
};

struct ReducedSystemDegenerateError : Error {
  using Error::Error;
};

struct ZeroDiagonalError : Error {
  using Error::Error;
};

// -- hierarchy ---------------------------------------------------------------

struct ZeroGroupConfigurationError : Error {
  using Error::Error;
};

struct GroupSynthesisError : Error {
  GroupSynthesisError(Index group, std::string msg) : Error(std::move(msg)), group(group) {}
  Index group;
};

// -- motion ------------------------------------------------------------------

struct DependentPairError : Error {
  using Error::Error;
};

// -- simulation --------------------------------------------------------------

struct DivergedError : Error {
  DivergedError(double t, double norm, std::string msg)
      : Error(std::move(msg)), t(t), norm(norm) {}
  double t;
  double norm;
};

struct NotSimpleZeroError : Error {
  using Error::Error;
};

// -- scenario / file I/O -----------------------------------------------------

struct ScenarioError : Error {
  using Error::Error;
};

}  // namespace formation
