#include "eegpool/error.hpp"

namespace eegpool {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::TruncatedHeader: return "TruncatedHeader";
    case ErrorCode::NonNumericField: return "NonNumericField";
    case ErrorCode::InvalidHeaderField: return "InvalidHeaderField";
    case ErrorCode::TruncatedRecords: return "TruncatedRecords";
    case ErrorCode::DegenerateCalibration: return "DegenerateCalibration";
    case ErrorCode::MixedSampleRate: return "MixedSampleRate";
    case ErrorCode::MalformedTal: return "MalformedTal";
    case ErrorCode::NegativeOnset: return "NegativeOnset";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::BadArity: return "BadArity";
    case ErrorCode::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case ErrorCode::MontageInvariant: return "MontageInvariant";
    case ErrorCode::WindowOutOfBounds: return "WindowOutOfBounds";
    case ErrorCode::UnknownRunType: return "UnknownRunType";
    case ErrorCode::AntipodalPoint: return "AntipodalPoint";
    case ErrorCode::DegenerateRankBelow2: return "DegenerateRankBelow2";
    case ErrorCode::PerplexityOutOfRange: return "PerplexityOutOfRange";
    case ErrorCode::NonConvergedBandwidth: return "NonConvergedBandwidth";
    case ErrorCode::KOutOfRange: return "KOutOfRange";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::DegenerateAxis: return "DegenerateAxis";
    case ErrorCode::PixelCollision: return "PixelCollision";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::RectOutOfBounds: return "RectOutOfBounds";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::TooFewSubjects: return "TooFewSubjects";
    case ErrorCode::MissingCache: return "MissingCache";
    case ErrorCode::DivergedLoss: return "DivergedLoss";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::BadConfigKey: return "BadConfigKey";
  }
  return "UnknownError";
}

}  // namespace eegpool
