#pragma once

#include <stdexcept>
#include <string>

namespace eegpool {

// Every failure the library reports, grouped by the subsystem that raises it.
// The CLI maps these onto process exit codes (see tools/).
enum class ErrorCode {
  // EDF ingestion
  TruncatedHeader,
  NonNumericField,
  InvalidHeaderField,
  TruncatedRecords,
  DegenerateCalibration,
  MixedSampleRate,
  MalformedTal,
  NegativeOnset,
  DuplicateLabel,
  BadArity,
  NonFiniteCoordinate,
  MontageInvariant,
  WindowOutOfBounds,
  UnknownRunType,
  // coordinate transforms
  AntipodalPoint,
  DegenerateRankBelow2,
  PerplexityOutOfRange,
  NonConvergedBandwidth,
  KOutOfRange,
  // topomap
  NotDivisible,
  DegenerateAxis,
  PixelCollision,
  ArityMismatch,
  // augmentation / model
  ShapeMismatch,
  RectOutOfBounds,
  ConfigInvalid,
  OddDimension,
  EmptyBatch,
  BadMagic,
  VersionMismatch,
  // harness
  TooFewSubjects,
  MissingCache,
  DivergedLoss,
  EmptySet,
  // generic
  IoFailure,
  BadConfigKey,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace eegpool
