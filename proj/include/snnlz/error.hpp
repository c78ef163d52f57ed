#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace snnlz {

enum class ErrorCode {
  // data errors
  kFewerThanTwoSpikes,
  kWidthDoesNotDivideSequence,
  kDimensionMismatch,
  kLayerWidthMismatch,
  kGridMismatch,
  kEmptySequence,
  kSequenceTooShort,
  kMissingPotentialTrace,
  kEmptyDataset,
  kMissingClass,
  kEmptyTestSet,
  kNoResultsFound,
  kParse,
  kIo,
  // configuration errors
  kInvalidConfig,
  kUnknownConfigKey,
  // numerical divergence
  kNonfiniteLoss,
};

enum class ErrorCategory { kData, kConfig, kNumerical };

std::string_view ToString(ErrorCode code);
ErrorCategory CategoryOf(ErrorCode code);

// Process exit code for the CLI: 2 config, 3 data, 4 numerical divergence.
int ExitCodeFor(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace snnlz
