#include "extractbench/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "extractbench/errors.hpp"

namespace extractbench {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string_view v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\''))) {
    return std::string(v.substr(1, v.size() - 2));
  }
  return std::string(v);
}

// Strips a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

double to_double(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    const std::string s(v);
    const double d = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "'" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
  }
}

std::uint64_t to_unsigned(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "'" + std::string(key) + "' expects a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::string fmt(double d) {
  std::ostringstream os;
  os.precision(17);
  os << d;
  return os.str();
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++line_no;
    const auto line = trim(strip_comment(text.substr(pos, nl - pos)));
    pos = nl + 1;
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw RecordError(ErrorCode::InvalidArgument, line_no, "expected key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    if (!section.empty()) key = section + "." + key;
    out[key] = unquote(trim(line.substr(eq + 1)));
  }
  return out;
}

void ToolConfig::set(std::string_view full_key, std::string_view raw) {
  const auto dot = full_key.rfind('.');
  const std::string_view key = dot == std::string_view::npos ? full_key : full_key.substr(dot + 1);
  const std::string value(raw);
  auto& aug = augmentation;

  if (key == "tau") similarity.tau = to_double(key, value);
  else if (key == "date_half_life_days") similarity.date_half_life_days = to_double(key, value);
  else if (key == "numeric_rel_cap") similarity.numeric_rel_cap = to_double(key, value);
  else if (key == "numeric_floor_epsilon") similarity.numeric_floor_epsilon = to_double(key, value);
  else if (key == "parse_mode") {
    const auto m = parse_mode_from_string(value);
    if (!m) throw Error(ErrorCode::InvalidArgument, "parse_mode must be strict or lenient");
    parse_mode = *m;
  } else if (key == "embedder") {
    if (value == "deterministic") embedder = EmbeddingBackend::Deterministic;
    else if (value == "remote") embedder = EmbeddingBackend::Remote;
    else throw Error(ErrorCode::InvalidArgument, "embedder must be deterministic or remote");
  } else if (key == "embed_url") {
    embed_url = value.empty() ? std::nullopt : std::optional<std::string>(value);
  } else if (key == "embed_cache_capacity") embed_cache_capacity = to_unsigned(key, value);
  else if (key == "workers") workers = std::max<std::size_t>(1, to_unsigned(key, value));
  else if (key == "seed") seed = to_unsigned(key, value);
  else if (key == "llm_url") llm_url = value.empty() ? std::nullopt : std::optional<std::string>(value);
  else if (key == "llm_model") llm_model = value;
  else if (key == "llm_key") llm_key = value;
  else if (key == "max_new_tokens") max_new_tokens = static_cast<int>(to_unsigned(key, value));
  else if (key == "temperature") temperature = to_double(key, value);
  else if (key == "template_path") template_path = value.empty() ? std::nullopt : std::optional<std::filesystem::path>(value);
  else if (key == "extractor") {
    if (value != "mock" && value != "http") throw Error(ErrorCode::InvalidArgument, "extractor must be mock or http");
    extractor = value;
  } else if (key == "extractor_fixture_dir") extractor_fixture_dir = std::filesystem::path(value);
  else if (key == "extractor_guidance") extractor_guidance = value;
  else if (key == "chunk_size") chunk_size = to_unsigned(key, value);
  else if (key == "chunk_overlap") chunk_overlap = to_unsigned(key, value);
  else if (key == "cross_chunk_probability") aug.cross_chunk_probability = to_double(key, value);
  else if (key == "chunk_count_weights") {
    std::array<double, 3> w{};
    std::size_t n = 0;
    std::string_view rest = value;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = trim(rest.substr(0, comma));
      if (n >= 3) throw Error(ErrorCode::InvalidArgument, "chunk_count_weights takes three values");
      w[n++] = to_double(key, item);
      rest = comma == std::string_view::npos ? std::string_view() : rest.substr(comma + 1);
    }
    if (n != 3) throw Error(ErrorCode::InvalidArgument, "chunk_count_weights takes three values");
    aug.chunk_count_weights = w;
  } else if (key == "min_fields_per_chunk") aug.min_fields_per_chunk = to_unsigned(key, value);
  else if (key == "max_fields_per_chunk") aug.max_fields_per_chunk = to_unsigned(key, value);
  else if (key == "token_min") aug.token_min = to_unsigned(key, value);
  else if (key == "token_max") aug.token_max = to_unsigned(key, value);
  else if (key == "max_retries") aug.max_retries = static_cast<int>(to_unsigned(key, value));
  else if (key == "draws_per_document") draws_per_document = to_unsigned(key, value);
  else if (key == "holdout_n") holdout_n = to_unsigned(key, value);
  else throw Error(ErrorCode::InvalidArgument, "unknown configuration key '" + std::string(full_key) + "'");
}

std::optional<std::string> ToolConfig::get(std::string_view key) const {
  const auto& aug = augmentation;
  if (key == "tau") return fmt(similarity.tau);
  if (key == "date_half_life_days") return fmt(similarity.date_half_life_days);
  if (key == "numeric_rel_cap") return fmt(similarity.numeric_rel_cap);
  if (key == "numeric_floor_epsilon") return fmt(similarity.numeric_floor_epsilon);
  if (key == "parse_mode") return to_string(parse_mode);
  if (key == "embedder") return to_string(embedder);
  if (key == "embed_url") return embed_url.value_or("");
  if (key == "embed_cache_capacity") return std::to_string(embed_cache_capacity);
  if (key == "workers") return std::to_string(workers);
  if (key == "seed") return std::to_string(seed);
  if (key == "llm_url") return llm_url.value_or("");
  if (key == "llm_model") return llm_model;
  if (key == "max_new_tokens") return std::to_string(max_new_tokens);
  if (key == "temperature") return fmt(temperature);
  if (key == "template_path") return template_path ? template_path->string() : "";
  if (key == "extractor") return extractor;
  if (key == "extractor_fixture_dir") return extractor_fixture_dir ? extractor_fixture_dir->string() : "";
  if (key == "chunk_size") return std::to_string(chunk_size);
  if (key == "chunk_overlap") return std::to_string(chunk_overlap);
  if (key == "cross_chunk_probability") return fmt(aug.cross_chunk_probability);
  if (key == "token_min") return std::to_string(aug.token_min);
  if (key == "token_max") return std::to_string(aug.token_max);
  if (key == "max_retries") return std::to_string(aug.max_retries);
  if (key == "draws_per_document") return std::to_string(draws_per_document);
  if (key == "holdout_n") return std::to_string(holdout_n);
  return std::nullopt;
}

void ToolConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const auto base = path.parent_path();
  for (const auto& [key, value] : parse_key_values(ss.str())) {
    const bool is_path = key.ends_with("template_path") || key.ends_with("extractor_fixture_dir");
    if (is_path && !value.empty() && std::filesystem::path(value).is_relative()) {
      set(key, (base / value).string());
    } else {
      set(key, value);
    }
  }
}

void ToolConfig::apply_environment() {
  if (const char* url = std::getenv("EXTRACTBENCH_EMBED_URL"); url && *url) {
    embed_url = url;
    embedder = EmbeddingBackend::Remote;
  }
  if (const char* url = std::getenv("EXTRACTBENCH_LLM_URL"); url && *url) llm_url = url;
  if (const char* key = std::getenv("EXTRACTBENCH_LLM_KEY"); key && *key) llm_key = key;
}

PromptTemplate ToolConfig::prompt_template() const {
  return template_path ? PromptTemplate::load(*template_path) : PromptTemplate::builtin();
}

ChatClientOptions ToolConfig::chat_options() const {
  if (!llm_url) throw Error(ErrorCode::InvalidArgument, "no LLM endpoint configured (EXTRACTBENCH_LLM_URL)");
  ChatClientOptions o;
  o.url = *llm_url;
  o.model = llm_model;
  o.api_key = llm_key;
  o.max_tokens = max_new_tokens;
  o.temperature = temperature;
  return o;
}

}  // namespace extractbench
