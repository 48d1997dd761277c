#include "hjgraph/error.hpp"

namespace hjg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AsymmetricWeights: return "AsymmetricWeights";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::NotInSimplexEps: return "NotInSimplexEps";
    case ErrorCode::NotNondecreasing: return "NotNondecreasing";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonIntegerLevels: return "NonIntegerLevels";
    case ErrorCode::BadMeshSize: return "BadMeshSize";
    case ErrorCode::NegativeArgument: return "NegativeArgument";
    case ErrorCode::SingularLogAtBoundary: return "SingularLogAtBoundary";
    case ErrorCode::ZeroCoordinate: return "ZeroCoordinate";
    case ErrorCode::BoundaryPoint: return "BoundaryPoint";
    case ErrorCode::BadTensorWeights: return "BadTensorWeights";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::NoDefinedNeighbor: return "NoDefinedNeighbor";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NonIntegerSteps: return "NonIntegerSteps";
    case ErrorCode::NonNestedMeshes: return "NonNestedMeshes";
    case ErrorCode::ConfigNotOracleCompatible: return "ConfigNotOracleCompatible";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_numerical_failure(ErrorCode code) {
  return code == ErrorCode::NonFiniteValue || code == ErrorCode::CflViolation ||
         code == ErrorCode::NoDefinedNeighbor;
}

}  // namespace hjg
