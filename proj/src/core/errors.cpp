#include "extractbench/errors.hpp"

namespace extractbench {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedSchema: return "MalformedSchema";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::Io: return "Io";
    case ErrorCode::EmbedderUnavailable: return "EmbedderUnavailable";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteNumber: return "NonFiniteNumber";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegenerateBatch: return "DegenerateBatch";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::ExtractorFailure: return "ExtractorFailure";
    case ErrorCode::TokenizerUnavailable: return "TokenizerUnavailable";
    case ErrorCode::InsufficientExamples: return "InsufficientExamples";
    case ErrorCode::GoldSchemaMismatch: return "GoldSchemaMismatch";
    case ErrorCode::FingerprintMismatch: return "FingerprintMismatch";
    case ErrorCode::GenerationFailure: return "GenerationFailure";
  }
  return "Unknown";
}

}  // namespace extractbench
