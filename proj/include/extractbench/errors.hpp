#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace extractbench {

enum class ErrorCode {
  InvalidArgument,
  MalformedSchema,
  MalformedInput,
  Io,
  EmbedderUnavailable,
  DimensionMismatch,
  NonFiniteNumber,
  ShapeMismatch,
  LengthMismatch,
  IndexOutOfRange,
  DegenerateBatch,
  EmptyDocument,
  ExtractorFailure,
  TokenizerUnavailable,
  InsufficientExamples,
  GoldSchemaMismatch,
  FingerprintMismatch,
  GenerationFailure,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by parse_schema; `offset` is a byte offset into the source when
/// the failure is syntactic, otherwise npos.
class MalformedSchemaError : public Error {
 public:
  MalformedSchemaError(const std::string& message, std::size_t offset = npos)
      : Error(ErrorCode::MalformedSchema, message), offset_(offset) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Raised while loading line-oriented inputs; `line` is 1-based.
class RecordError : public Error {
 public:
  RecordError(ErrorCode code, std::size_t line, const std::string& message)
      : Error(code, "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ExtractorFailure : public Error {
 public:
  ExtractorFailure(std::size_t chunk_index, const std::string& message)
      : Error(ErrorCode::ExtractorFailure,
              "chunk " + std::to_string(chunk_index) + ": " + message),
        chunk_index_(chunk_index) {}

  std::size_t chunk_index() const noexcept { return chunk_index_; }

 private:
  std::size_t chunk_index_;
};

}  // namespace extractbench
