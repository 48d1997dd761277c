#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hjg {

enum class ErrorCode {
  // graph
  AsymmetricWeights,
  NegativeWeight,
  SelfLoop,
  Disconnected,
  IndexOutOfRange,
  BadDimension,
  // simplex and mesh
  NotInSimplexEps,
  NotNondecreasing,
  OutOfRange,
  NonIntegerLevels,
  BadMeshSize,
  // calculus / hamiltonian
  NegativeArgument,
  SingularLogAtBoundary,
  ZeroCoordinate,
  BoundaryPoint,
  BadTensorWeights,
  BadParameter,
  // scheme
  NotInterior,
  NoDefinedNeighbor,
  CflViolation,
  NonFiniteValue,
  NonIntegerSteps,
  // experiments
  NonNestedMeshes,
  ConfigNotOracleCompatible,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Numerical failures map to exit code 3 in the CLI; everything else is a
/// configuration/input problem (exit code 2).
bool is_numerical_failure(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hjg
