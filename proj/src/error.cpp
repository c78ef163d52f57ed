#include "snnlz/error.hpp"

namespace snnlz {

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFewerThanTwoSpikes: return "FewerThanTwoSpikes";
    case ErrorCode::kWidthDoesNotDivideSequence: return "WidthDoesNotDivideSequence";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kLayerWidthMismatch: return "LayerWidthMismatch";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kSequenceTooShort: return "SequenceTooShort";
    case ErrorCode::kMissingPotentialTrace: return "MissingPotentialTrace";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kMissingClass: return "MissingClass";
    case ErrorCode::kEmptyTestSet: return "EmptyTestSet";
    case ErrorCode::kNoResultsFound: return "NoResultsFound";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kUnknownConfigKey: return "UnknownConfigKey";
    case ErrorCode::kNonfiniteLoss: return "NonfiniteLoss";
  }
  return "Unknown";
}

ErrorCategory CategoryOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kUnknownConfigKey:
      return ErrorCategory::kConfig;
    case ErrorCode::kNonfiniteLoss:
      return ErrorCategory::kNumerical;
    default:
      return ErrorCategory::kData;
  }
}

int ExitCodeFor(ErrorCode code) {
  switch (CategoryOf(code)) {
    case ErrorCategory::kConfig: return 2;
    case ErrorCategory::kData: return 3;
    case ErrorCategory::kNumerical: return 4;
  }
  return 1;
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(ToString(code)) + ": " + what),
      code_(code) {}

}  // namespace snnlz
