#include "extractbench/schema.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "extractbench/errors.hpp"

namespace extractbench {

const char* to_string(FieldKind kind) noexcept {
  switch (kind) {
    case FieldKind::Text: return "text";
    case FieldKind::Number: return "number";
    case FieldKind::Boolean: return "boolean";
    case FieldKind::Date: return "date";
    case FieldKind::List: return "list";
    case FieldKind::Object: return "object";
  }
  return "unknown";
}

const FieldSpec* FieldSpec::child(std::string_view child_name) const {
  for (const auto& c : children) {
    if (c.name == child_name) return &c;
  }
  return nullptr;
}

namespace {

void check_sibling_names(const std::vector<FieldSpec>& specs, const std::string& where) {
  std::unordered_set<std::string> seen;
  for (const auto& s : specs) {
    if (s.name.empty()) throw MalformedSchemaError("empty property name in " + where);
    if (!seen.insert(s.name).second) {
      throw MalformedSchemaError("duplicate property '" + s.name + "' in " + where);
    }
  }
}

}  // namespace

void FieldSpec::check_invariants() const {
  if (name.empty()) throw MalformedSchemaError("field name must be non-empty");
  const bool has_item = item_spec != nullptr;
  const bool has_children = !children.empty();
  switch (kind) {
    case FieldKind::List:
      if (!has_item) throw MalformedSchemaError("list field '" + name + "' has no item spec");
      if (has_children) throw MalformedSchemaError("list field '" + name + "' has children");
      item_spec->check_invariants();
      break;
    case FieldKind::Object:
      if (!has_children) throw MalformedSchemaError("object field '" + name + "' has no properties");
      if (has_item) throw MalformedSchemaError("object field '" + name + "' has an item spec");
      check_sibling_names(children, "'" + name + "'");
      for (const auto& c : children) c.check_invariants();
      break;
    default:
      if (has_item || has_children) {
        throw MalformedSchemaError("scalar field '" + name + "' has nested specs");
      }
  }
}

bool operator==(const FieldSpec& a, const FieldSpec& b) {
  if (a.name != b.name || a.kind != b.kind ||
      a.extraction_instruction != b.extraction_instruction || a.children != b.children) {
    return false;
  }
  if (static_cast<bool>(a.item_spec) != static_cast<bool>(b.item_spec)) return false;
  return !a.item_spec || *a.item_spec == *b.item_spec;
}

ExtractionSchema::ExtractionSchema(std::vector<FieldSpec> properties)
    : properties_(std::move(properties)) {
  check_sibling_names(properties_, "schema");
  for (const auto& p : properties_) p.check_invariants();
}

const FieldSpec* ExtractionSchema::find(std::string_view name) const {
  for (const auto& p : properties_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

namespace {

Json spec_to_json(const FieldSpec& spec) {
  Json j = Json::object();
  switch (spec.kind) {
    case FieldKind::Text: j["type"] = "string"; break;
    case FieldKind::Date:
      j["type"] = "string";
      j["format"] = "date";
      break;
    case FieldKind::Number: j["type"] = "number"; break;
    case FieldKind::Boolean: j["type"] = "boolean"; break;
    case FieldKind::List: j["type"] = "array"; break;
    case FieldKind::Object: j["type"] = "object"; break;
  }
  if (!spec.extraction_instruction.empty()) {
    j["extraction_instruction"] = spec.extraction_instruction;
  }
  if (spec.kind == FieldKind::List) j["items"] = spec_to_json(*spec.item_spec);
  if (spec.kind == FieldKind::Object) {
    Json props = Json::object();
    for (const auto& c : spec.children) props[c.name] = spec_to_json(c);
    j["properties"] = std::move(props);
  }
  return j;
}

const std::string& require_string(const Json& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_string()) {
    throw MalformedSchemaError(std::string("'") + key + "' of " + where + " must be a string");
  }
  return v.get_ref<const std::string&>();
}

std::vector<FieldSpec> parse_properties(const Json& props, const std::string& where);

FieldSpec parse_spec(const std::string& name, const Json& j, const std::string& where) {
  if (!j.is_object()) throw MalformedSchemaError(where + " must be an object");
  static const std::set<std::string> allowed = {"type", "properties", "items",
                                                "extraction_instruction", "format"};
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw MalformedSchemaError("unsupported keyword '" + key + "' in " + where);
  }
  if (!j.contains("type")) throw MalformedSchemaError(where + " has no 'type'");

  FieldSpec spec;
  spec.name = name;
  const std::string& type = require_string(j, "type", where);
  if (j.contains("extraction_instruction")) {
    spec.extraction_instruction = require_string(j, "extraction_instruction", where);
  }
  if (type == "string") {
    spec.kind = FieldKind::Text;
  } else if (type == "number" || type == "integer") {
    spec.kind = FieldKind::Number;
  } else if (type == "boolean") {
    spec.kind = FieldKind::Boolean;
  } else if (type == "array") {
    spec.kind = FieldKind::List;
  } else if (type == "object") {
    spec.kind = FieldKind::Object;
  } else {
    throw MalformedSchemaError("unknown type '" + type + "' in " + where);
  }

  if (j.contains("format")) {
    const std::string& format = require_string(j, "format", where);
    if (spec.kind != FieldKind::Text || format != "date") {
      throw MalformedSchemaError("unsupported format '" + format + "' in " + where);
    }
    spec.kind = FieldKind::Date;
  }
  if (j.contains("items") != (spec.kind == FieldKind::List)) {
    throw MalformedSchemaError("'items' must appear exactly on array types (" + where + ")");
  }
  if (j.contains("properties") && spec.kind != FieldKind::Object) {
    throw MalformedSchemaError("'properties' on a non-object type (" + where + ")");
  }
  if (spec.kind == FieldKind::List) {
    spec.item_spec = std::make_shared<const FieldSpec>(parse_spec("items", j["items"], where + ".items"));
  }
  if (spec.kind == FieldKind::Object) {
    if (!j.contains("properties")) throw MalformedSchemaError(where + " has no 'properties'");
    spec.children = parse_properties(j["properties"], where);
  }
  spec.check_invariants();
  return spec;
}

std::vector<FieldSpec> parse_properties(const Json& props, const std::string& where) {
  if (!props.is_object()) throw MalformedSchemaError("'properties' of " + where + " must be an object");
  std::vector<FieldSpec> out;
  out.reserve(props.size());
  for (const auto& [key, value] : props.items()) {
    out.push_back(parse_spec(key, value, where + "." + key));
  }
  return out;
}

}  // namespace

Json ExtractionSchema::to_json() const {
  Json props = Json::object();
  for (const auto& p : properties_) props[p.name] = spec_to_json(p);
  Json j = Json::object();
  j["type"] = "object";
  j["properties"] = std::move(props);
  return j;
}

std::string ExtractionSchema::serialize() const { return to_json().dump(); }

ExtractionSchema schema_from_json(const Json& j) {
  if (!j.is_object()) throw MalformedSchemaError("schema must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "type" && key != "properties" && key != "extraction_instruction") {
      throw MalformedSchemaError("unsupported keyword '" + key + "' at schema root");
    }
  }
  if (!j.contains("type") || !j["type"].is_string() || j["type"].get<std::string>() != "object") {
    throw MalformedSchemaError("schema root must have \"type\": \"object\"");
  }
  if (!j.contains("properties")) return ExtractionSchema();
  return ExtractionSchema(parse_properties(j["properties"], "schema"));
}

ExtractionSchema parse_schema(std::string_view source) {
  Json j;
  try {
    j = Json::parse(source.begin(), source.end());
  } catch (const Json::parse_error& e) {
    throw MalformedSchemaError(std::string("unparseable schema: ") + e.what(), e.byte);
  }
  return schema_from_json(j);
}

CombinedSchema combine_schemas(const std::vector<ExtractionSchema>& parts) {
  CombinedSchema result;
  std::vector<FieldSpec> props;
  std::unordered_set<std::string> seen;
  for (const auto& part : parts) {
    for (const auto& p : part.properties()) {
      if (seen.insert(p.name).second) {
        props.push_back(p);
      } else {
        result.collisions.push_back(p.name);
      }
    }
  }
  result.schema = ExtractionSchema(std::move(props));
  return result;
}

ExtractionOutput::ExtractionOutput(FieldValue::Object values) : values_(std::move(values)) {}

ExtractionOutput ExtractionOutput::from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "extraction output must be a JSON object");
  FieldValue v = FieldValue::from_json(j);
  return ExtractionOutput(v.as_object());
}

Json ExtractionOutput::to_json() const { return FieldValue(values_).to_json(); }

std::string ExtractionOutput::serialize() const { return to_json().dump(); }

const FieldValue* ExtractionOutput::find(std::string_view name) const {
  for (const auto& m : values_) {
    if (m.name == name) return &m.value;
  }
  return nullptr;
}

const char* to_string(ParseMode mode) noexcept {
  return mode == ParseMode::Strict ? "strict" : "lenient";
}

std::optional<ParseMode> parse_mode_from_string(std::string_view s) {
  if (s == "strict") return ParseMode::Strict;
  if (s == "lenient") return ParseMode::Lenient;
  return std::nullopt;
}

const char* to_string(GateFailure::Reason reason) noexcept {
  switch (reason) {
    case GateFailure::Reason::NoJson: return "NoJson";
    case GateFailure::Reason::Unbalanced: return "Unbalanced";
    case GateFailure::Reason::NotAnObject: return "NotAnObject";
  }
  return "unknown";
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Returns the end (one past the matching '}') of the object starting at
// `open`, or npos if the braces never balance.
std::size_t balanced_end(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

}  // namespace

std::optional<std::string_view> extract_json_object_text(std::string_view raw,
                                                         GateFailure::Reason* reason) {
  std::string_view s = trim(raw);
  if (s.substr(0, 3) == "```") {
    const auto nl = s.find('\n');
    s = nl == std::string_view::npos ? std::string_view() : s.substr(nl + 1);
    s = trim(s);
    if (s.size() >= 3 && s.substr(s.size() - 3) == "```") s.remove_suffix(3);
  }
  const auto open = s.find('{');
  if (open == std::string_view::npos) {
    if (reason) *reason = GateFailure::Reason::NoJson;
    return std::nullopt;
  }
  const auto end = balanced_end(s, open);
  if (end == std::string_view::npos) {
    if (reason) *reason = GateFailure::Reason::Unbalanced;
    return std::nullopt;
  }
  return s.substr(open, end - open);
}

ParsedOutput parse_model_output(std::string_view raw, ParseMode mode) {
  std::string_view text = raw;
  if (mode == ParseMode::Lenient) {
    GateFailure::Reason reason{};
    auto region = extract_json_object_text(raw, &reason);
    if (!region) return GateFailure{reason};
    text = *region;
  }
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error&) {
    if (mode == ParseMode::Strict) {
      const auto open = raw.find('{');
      if (open != std::string_view::npos && balanced_end(raw, open) == std::string_view::npos) {
        return GateFailure{GateFailure::Reason::Unbalanced};
      }
    }
    return GateFailure{GateFailure::Reason::NoJson};
  }
  if (!j.is_object()) return GateFailure{GateFailure::Reason::NotAnObject};
  return ExtractionOutput::from_json(j);
}

bool kind_accepts(FieldKind expected, ValueKind observed) noexcept {
  switch (expected) {
    case FieldKind::Text:
    case FieldKind::Date:
      return observed == ValueKind::Text || observed == ValueKind::List;
    case FieldKind::Number:
      return observed == ValueKind::Number || observed == ValueKind::List;
    case FieldKind::Boolean:
      return observed == ValueKind::Boolean || observed == ValueKind::List;
    case FieldKind::List:
      return observed == ValueKind::List;
    case FieldKind::Object:
      return observed == ValueKind::Object;
  }
  return false;
}

ValidationReport validate_output(const ExtractionOutput& out, const ExtractionSchema& schema) {
  ValidationReport report;
  for (const auto& spec : schema.properties()) {
    const FieldValue* v = out.find(spec.name);
    if (!v) {
      report.missing_required.push_back(spec.name);
    } else if (!kind_accepts(spec.kind, v->kind())) {
      report.type_mismatches.push_back({spec.name, spec.kind, v->kind()});
    }
  }
  return report;
}

}  // namespace extractbench
