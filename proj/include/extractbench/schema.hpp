#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "extractbench/field_value.hpp"

namespace extractbench {

enum class FieldKind { Text, Number, Boolean, Date, List, Object };

const char* to_string(FieldKind kind) noexcept;

/// One property of an extraction schema. List specs own an item spec;
/// object specs own their children in source order.
struct FieldSpec {
  std::string name;
  FieldKind kind = FieldKind::Text;
  std::string extraction_instruction;
  std::shared_ptr<const FieldSpec> item_spec;
  std::vector<FieldSpec> children;

  const FieldSpec* child(std::string_view child_name) const;

  /// Throws MalformedSchemaError when the kind/item/children invariants fail.
  void check_invariants() const;

  friend bool operator==(const FieldSpec& a, const FieldSpec& b);
};

class ExtractionSchema {
 public:
  ExtractionSchema() = default;
  explicit ExtractionSchema(std::vector<FieldSpec> properties);

  const std::vector<FieldSpec>& properties() const noexcept { return properties_; }
  const FieldSpec* find(std::string_view name) const;
  std::size_t size() const noexcept { return properties_.size(); }

  /// Serializes back into the supported dialect.
  Json to_json() const;
  std::string serialize() const;

  friend bool operator==(const ExtractionSchema&, const ExtractionSchema&) = default;

 private:
  std::vector<FieldSpec> properties_;
};

ExtractionSchema parse_schema(std::string_view source);
ExtractionSchema schema_from_json(const Json& j);

struct CombinedSchema {
  ExtractionSchema schema;
  /// Names that appeared in more than one part; the first spec was kept.
  std::vector<std::string> collisions;
};

CombinedSchema combine_schemas(const std::vector<ExtractionSchema>& parts);

/// A model's (or gold) extraction: top-level field name to value, in
/// source order.
class ExtractionOutput {
 public:
  ExtractionOutput() = default;
  explicit ExtractionOutput(FieldValue::Object values);

  static ExtractionOutput from_json(const Json& j);
  Json to_json() const;
  std::string serialize() const;

  const FieldValue::Object& values() const noexcept { return values_; }
  const FieldValue* find(std::string_view name) const;

  friend bool operator==(const ExtractionOutput&, const ExtractionOutput&) = default;

 private:
  FieldValue::Object values_;
};

enum class ParseMode { Strict, Lenient };

const char* to_string(ParseMode mode) noexcept;
std::optional<ParseMode> parse_mode_from_string(std::string_view s);

struct GateFailure {
  enum class Reason { NoJson, Unbalanced, NotAnObject };
  Reason reason;

  friend bool operator==(const GateFailure&, const GateFailure&) = default;
};

const char* to_string(GateFailure::Reason reason) noexcept;

using ParsedOutput = std::variant<ExtractionOutput, GateFailure>;

/// Lenient pre-processing: trims, strips a Markdown code fence and returns
/// the first balanced top-level `{...}` region. nullopt with `reason` set
/// when no such region exists.
std::optional<std::string_view> extract_json_object_text(std::string_view raw,
                                                         GateFailure::Reason* reason = nullptr);

ParsedOutput parse_model_output(std::string_view raw, ParseMode mode);

struct TypeMismatch {
  std::string field;
  FieldKind expected;
  ValueKind observed;

  friend bool operator==(const TypeMismatch&, const TypeMismatch&) = default;
};

struct ValidationReport {
  bool json_valid = true;
  std::vector<std::string> missing_required;
  std::vector<TypeMismatch> type_mismatches;

  bool conforms() const noexcept {
    return json_valid && missing_required.empty() && type_mismatches.empty();
  }
};

/// Every schema property is required. Extra output fields are ignored.
ValidationReport validate_output(const ExtractionOutput& out, const ExtractionSchema& schema);

/// Whether a value of `observed` kind is acceptable under `expected`.
bool kind_accepts(FieldKind expected, ValueKind observed) noexcept;

}  // namespace extractbench
