#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace extractbench {

using Json = nlohmann::ordered_json;

enum class ValueKind { Null, Boolean, Number, Text, List, Object };

const char* to_string(ValueKind kind) noexcept;

struct ObjectMember;

/// A typed extracted value. Object members keep their source order.
class FieldValue {
 public:
  using List = std::vector<FieldValue>;
  using Object = std::vector<ObjectMember>;

  FieldValue() = default;
  FieldValue(std::nullptr_t) {}
  FieldValue(bool b) : data_(b) {}
  FieldValue(double d) : data_(d) {}
  FieldValue(int i) : data_(static_cast<double>(i)) {}
  FieldValue(std::string s) : data_(std::move(s)) {}
  FieldValue(const char* s) : data_(std::string(s)) {}
  FieldValue(List items) : data_(std::move(items)) {}
  FieldValue(Object members) : data_(std::move(members)) {}

  static FieldValue from_json(const Json& j);
  Json to_json() const;

  ValueKind kind() const noexcept { return static_cast<ValueKind>(data_.index()); }

  bool is_null() const noexcept { return kind() == ValueKind::Null; }
  bool is_boolean() const noexcept { return kind() == ValueKind::Boolean; }
  bool is_number() const noexcept { return kind() == ValueKind::Number; }
  bool is_text() const noexcept { return kind() == ValueKind::Text; }
  bool is_list() const noexcept { return kind() == ValueKind::List; }
  bool is_object() const noexcept { return kind() == ValueKind::Object; }

  bool as_boolean() const { return std::get<bool>(data_); }
  double as_number() const { return std::get<double>(data_); }
  const std::string& as_text() const { return std::get<std::string>(data_); }
  const List& as_list() const { return std::get<List>(data_); }
  const Object& as_object() const { return std::get<Object>(data_); }

  /// Member lookup for object values; nullptr when absent or not an object.
  const FieldValue* find(std::string_view name) const;

  friend bool operator==(const FieldValue& a, const FieldValue& b);

 private:
  std::variant<std::monostate, bool, double, std::string, List, Object> data_;
};

struct ObjectMember {
  std::string name;
  FieldValue value;

  friend bool operator==(const ObjectMember&, const ObjectMember&) = default;
};

/// Text form used for the text-similarity fallback and for memory dedup.
/// Strings are returned verbatim; numbers use the shortest round-trip form
/// (integral values print without a fraction); lists and objects are
/// compact JSON.
std::string canonical_text(const FieldValue& v);

/// canonical_text with whitespace runs collapsed to one space and trimmed.
std::string normalized_text(const FieldValue& v);

std::string format_number(double d);

}  // namespace extractbench
