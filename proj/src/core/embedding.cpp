#include "extractbench/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <list>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <httplib.h>

#include "extractbench/errors.hpp"
#include "extractbench/text.hpp"
#include "http_util.hpp"

namespace extractbench {

double EmbeddingVector::norm() const noexcept {
  double s = 0.0;
  for (double c : components) s += c * c;
  return std::sqrt(s);
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.dimension() != v.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "cosine of vectors with dimensions " +
                                                  std::to_string(u.dimension()) + " and " +
                                                  std::to_string(v.dimension()));
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < u.dimension(); ++i) dot += u.components[i] * v.components[i];
  const double denom = u.norm() * v.norm();
  if (denom == 0.0) return 0.0;
  const double c = dot / denom;
  return std::clamp(c, -1.0, 1.0);
}

const char* to_string(EmbeddingBackend backend) noexcept {
  return backend == EmbeddingBackend::Deterministic ? "deterministic" : "remote";
}

Json ProviderDescriptor::to_json() const {
  Json j = Json::object();
  j["backend"] = to_string(backend);
  j["dimension"] = dimension;
  j["endpoint"] = endpoint ? Json(*endpoint) : Json(nullptr);
  j["cache_capacity"] = cache_capacity;
  return j;
}

EmbeddingVector EmbeddingProvider::embed_one(const std::string& text) {
  return embed(std::span<const std::string>(&text, 1)).front();
}

namespace {

void normalize_or_fallback(std::vector<double>& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  if (s == 0.0) {
    std::fill(v.begin(), v.end(), 0.0);
    if (!v.empty()) v[0] = 1.0;
    return;
  }
  const double n = std::sqrt(s);
  for (double& c : v) c /= n;
}

}  // namespace

DeterministicEmbedder::DeterministicEmbedder(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
  if (dimension_ == 0) throw Error(ErrorCode::InvalidArgument, "embedding dimension must be positive");
}

EmbeddingVector DeterministicEmbedder::embed_text(std::string_view text) const {
  std::vector<double> acc(dimension_, 0.0);
  auto add = [&](std::string_view piece) {
    const std::uint64_t h = mix64(fnv1a64(piece, seed_));
    const std::size_t index = static_cast<std::size_t>(h % dimension_);
    acc[index] += (h >> 63) != 0 ? -1.0 : 1.0;
  };
  const auto bounds = utf8_boundaries(text);
  const std::size_t chars = bounds.size() - 1;
  if (chars < 3) {
    add(text);
  } else {
    for (std::size_t i = 0; i + 3 <= chars; ++i) {
      add(text.substr(bounds[i], bounds[i + 3] - bounds[i]));
    }
  }
  normalize_or_fallback(acc);
  return EmbeddingVector{std::move(acc)};
}

std::vector<EmbeddingVector> DeterministicEmbedder::embed(std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_text(t));
  return out;
}

ProviderDescriptor DeterministicEmbedder::descriptor() const {
  return {EmbeddingBackend::Deterministic, dimension_, std::nullopt, 0};
}

RemoteEmbedder::RemoteEmbedder(RemoteEmbedderOptions options) : options_(std::move(options)) {
  if (options_.endpoint.empty()) throw Error(ErrorCode::InvalidArgument, "remote embedder needs an endpoint");
  if (options_.batch_size == 0) options_.batch_size = 1;
  if (options_.max_attempts < 1) options_.max_attempts = 1;
  detail::split_url(options_.endpoint);
}

ProviderDescriptor RemoteEmbedder::descriptor() const {
  return {EmbeddingBackend::Remote, options_.expected_dimension, options_.endpoint, 0};
}

std::vector<EmbeddingVector> RemoteEmbedder::embed(std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (std::size_t start = 0; start < texts.size(); start += options_.batch_size) {
    const std::size_t n = std::min(options_.batch_size, texts.size() - start);
    auto part = embed_batch(texts.subspan(start, n));
    for (auto& v : part) out.push_back(std::move(v));
  }
  return out;
}

std::vector<EmbeddingVector> RemoteEmbedder::embed_batch(std::span<const std::string> batch) {
  const auto url = detail::split_url(options_.endpoint);
  const std::string route = detail::join_path(url.path, "/embed");
  Json request = Json::object();
  request["texts"] = Json::array();
  for (const auto& t : batch) request["texts"].push_back(t);
  const std::string body = request.dump();

  std::string last_error = "no attempt made";
  auto backoff = options_.initial_backoff;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(url.origin);
    client.set_connection_timeout(options_.connect_timeout);
    client.set_read_timeout(options_.read_timeout);
    auto res = client.Post(route, body, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "server error " + std::to_string(res->status) + ": " + res->body;
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::EmbedderUnavailable,
                  "embedding service rejected request (" + std::to_string(res->status) + "): " + res->body);
    }
    Json reply;
    try {
      reply = Json::parse(res->body);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::EmbedderUnavailable, std::string("malformed embedding reply: ") + e.what());
    }
    if (!reply.contains("vectors") || !reply["vectors"].is_array() ||
        reply["vectors"].size() != batch.size()) {
      throw Error(ErrorCode::EmbedderUnavailable, "embedding reply has wrong vector count");
    }
    std::vector<EmbeddingVector> out;
    out.reserve(batch.size());
    for (const auto& row : reply["vectors"]) {
      if (!row.is_array() || row.size() != options_.expected_dimension) {
        throw Error(ErrorCode::DimensionMismatch,
                    "embedding service returned length " + std::to_string(row.size()) +
                        ", expected " + std::to_string(options_.expected_dimension));
      }
      std::vector<double> comps;
      comps.reserve(row.size());
      for (const auto& c : row) comps.push_back(c.get<double>());
      normalize_or_fallback(comps);
      out.push_back(EmbeddingVector{std::move(comps)});
    }
    return out;
  }
  throw Error(ErrorCode::EmbedderUnavailable,
              "embedding service unavailable after " + std::to_string(options_.max_attempts) +
                  " attempts: " + last_error);
}

struct CachingEmbedder::Cache {
  using Entry = std::pair<std::string, EmbeddingVector>;
  std::size_t capacity;
  mutable std::mutex mutex;
  std::list<Entry> order;  // front = most recent
  std::unordered_map<std::string, std::list<Entry>::iterator> index;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;

  std::optional<EmbeddingVector> get(const std::string& key) {
    std::lock_guard lock(mutex);
    auto it = index.find(key);
    if (it == index.end()) {
      ++misses;
      return std::nullopt;
    }
    ++hits;
    order.splice(order.begin(), order, it->second);
    return it->second->second;
  }

  void put(const std::string& key, const EmbeddingVector& v) {
    std::lock_guard lock(mutex);
    auto it = index.find(key);
    if (it != index.end()) {
      it->second->second = v;
      order.splice(order.begin(), order, it->second);
      return;
    }
    order.emplace_front(key, v);
    index.emplace(key, order.begin());
    while (order.size() > capacity) {
      index.erase(order.back().first);
      order.pop_back();
    }
  }
};

CachingEmbedder::CachingEmbedder(std::unique_ptr<EmbeddingProvider> inner, std::size_t capacity)
    : inner_(std::move(inner)), cache_(std::make_unique<Cache>()) {
  cache_->capacity = capacity;
}

CachingEmbedder::~CachingEmbedder() = default;

std::vector<EmbeddingVector> CachingEmbedder::embed(std::span<const std::string> texts) {
  if (cache_->capacity == 0) return inner_->embed(texts);
  std::vector<std::optional<EmbeddingVector>> found(texts.size());
  std::vector<std::string> missing;
  std::unordered_map<std::string, std::size_t> missing_index;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    found[i] = cache_->get(texts[i]);
    if (!found[i] && !missing_index.count(texts[i])) {
      missing_index.emplace(texts[i], missing.size());
      missing.push_back(texts[i]);
    }
  }
  std::vector<EmbeddingVector> computed;
  if (!missing.empty()) {
    computed = inner_->embed(missing);
    for (std::size_t k = 0; k < missing.size(); ++k) cache_->put(missing[k], computed[k]);
  }
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.push_back(found[i] ? std::move(*found[i]) : computed[missing_index.at(texts[i])]);
  }
  return out;
}

ProviderDescriptor CachingEmbedder::descriptor() const {
  auto d = inner_->descriptor();
  d.cache_capacity = cache_->capacity;
  return d;
}

std::size_t CachingEmbedder::size() const {
  std::lock_guard lock(cache_->mutex);
  return cache_->order.size();
}

std::uint64_t CachingEmbedder::hits() const {
  std::lock_guard lock(cache_->mutex);
  return cache_->hits;
}

std::uint64_t CachingEmbedder::misses() const {
  std::lock_guard lock(cache_->mutex);
  return cache_->misses;
}

std::unique_ptr<EmbeddingProvider> make_embedder(EmbeddingBackend backend,
                                                 const std::optional<std::string>& endpoint,
                                                 std::size_t cache_capacity) {
  std::unique_ptr<EmbeddingProvider> inner;
  if (backend == EmbeddingBackend::Remote) {
    if (!endpoint || endpoint->empty()) {
      throw Error(ErrorCode::InvalidArgument, "remote embedder selected without an endpoint");
    }
    RemoteEmbedderOptions opts;
    opts.endpoint = *endpoint;
    inner = std::make_unique<RemoteEmbedder>(std::move(opts));
  } else {
    inner = std::make_unique<DeterministicEmbedder>();
  }
  return std::make_unique<CachingEmbedder>(std::move(inner), cache_capacity);
}

std::unique_ptr<EmbeddingProvider> make_embedder_from_env(std::size_t cache_capacity) {
  const char* url = std::getenv("EXTRACTBENCH_EMBED_URL");
  if (url && *url) return make_embedder(EmbeddingBackend::Remote, std::string(url), cache_capacity);
  return make_embedder(EmbeddingBackend::Deterministic, std::nullopt, cache_capacity);
}

}  // namespace extractbench
