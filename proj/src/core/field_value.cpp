#include "extractbench/field_value.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "extractbench/errors.hpp"

namespace extractbench {

const char* to_string(ValueKind kind) noexcept {
  switch (kind) {
    case ValueKind::Null: return "null";
    case ValueKind::Boolean: return "boolean";
    case ValueKind::Number: return "number";
    case ValueKind::Text: return "text";
    case ValueKind::List: return "list";
    case ValueKind::Object: return "object";
  }
  return "unknown";
}

FieldValue FieldValue::from_json(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null:
      return FieldValue();
    case Json::value_t::boolean:
      return FieldValue(j.get<bool>());
    case Json::value_t::number_integer:
    case Json::value_t::number_unsigned:
    case Json::value_t::number_float:
      return FieldValue(j.get<double>());
    case Json::value_t::string:
      return FieldValue(j.get<std::string>());
    case Json::value_t::array: {
      List items;
      items.reserve(j.size());
      for (const auto& item : j) items.push_back(from_json(item));
      return FieldValue(std::move(items));
    }
    case Json::value_t::object: {
      Object members;
      members.reserve(j.size());
      for (const auto& [key, value] : j.items()) members.push_back({key, from_json(value)});
      return FieldValue(std::move(members));
    }
    default:
      throw Error(ErrorCode::MalformedInput, "unsupported JSON value");
  }
}

Json FieldValue::to_json() const {
  switch (kind()) {
    case ValueKind::Null: return nullptr;
    case ValueKind::Boolean: return as_boolean();
    case ValueKind::Number: {
      const double d = as_number();
      if (std::trunc(d) == d && std::fabs(d) < 9.0e15) return static_cast<std::int64_t>(d);
      return d;
    }
    case ValueKind::Text: return as_text();
    case ValueKind::List: {
      Json arr = Json::array();
      for (const auto& item : as_list()) arr.push_back(item.to_json());
      return arr;
    }
    case ValueKind::Object: {
      Json obj = Json::object();
      for (const auto& m : as_object()) obj[m.name] = m.value.to_json();
      return obj;
    }
  }
  return nullptr;
}

const FieldValue* FieldValue::find(std::string_view name) const {
  if (!is_object()) return nullptr;
  for (const auto& m : as_object()) {
    if (m.name == name) return &m.value;
  }
  return nullptr;
}

bool operator==(const FieldValue& a, const FieldValue& b) { return a.data_ == b.data_; }

std::string format_number(double d) {
  if (std::trunc(d) == d && std::fabs(d) < 9.0e15) {
    return std::to_string(static_cast<std::int64_t>(d));
  }
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), d);
  if (ec != std::errc()) return std::to_string(d);
  return std::string(buf.data(), end);
}

std::string canonical_text(const FieldValue& v) {
  switch (v.kind()) {
    case ValueKind::Null: return "null";
    case ValueKind::Boolean: return v.as_boolean() ? "true" : "false";
    case ValueKind::Number: return format_number(v.as_number());
    case ValueKind::Text: return v.as_text();
    case ValueKind::List:
    case ValueKind::Object: return v.to_json().dump();
  }
  return {};
}

std::string normalized_text(const FieldValue& v) {
  const std::string raw = canonical_text(v);
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    const bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (ws) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace extractbench
