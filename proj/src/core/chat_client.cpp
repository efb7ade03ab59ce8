#include "extractbench/chat_client.hpp"

#include <thread>

#include <httplib.h>

#include "extractbench/errors.hpp"
#include "extractbench/field_value.hpp"
#include "http_util.hpp"

namespace extractbench {

ChatClient::ChatClient(ChatClientOptions options) : options_(std::move(options)) {
  if (options_.url.empty()) throw Error(ErrorCode::InvalidArgument, "chat client needs a URL");
  detail::split_url(options_.url);
  if (options_.max_attempts < 1) options_.max_attempts = 1;
}

std::string ChatClient::complete(const std::vector<ChatMessage>& messages) const {
  const auto url = detail::split_url(options_.url);
  const std::string path = url.path.empty() ? "/" : url.path;

  Json request = Json::object();
  request["model"] = options_.model;
  request["messages"] = Json::array();
  for (const auto& m : messages) request["messages"].push_back({{"role", m.role}, {"content", m.content}});
  request["max_tokens"] = options_.max_tokens;
  request["temperature"] = options_.temperature;
  const std::string body = request.dump();

  httplib::Headers headers;
  if (!options_.api_key.empty()) headers.emplace("Authorization", "Bearer " + options_.api_key);

  std::string last_error;
  auto backoff = options_.initial_backoff;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(url.origin);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500 || res->status == 429) {
      last_error = "server replied " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::GenerationFailure,
                  "chat endpoint replied " + std::to_string(res->status) + ": " + res->body);
    }
    try {
      const Json reply = Json::parse(res->body);
      const auto& content = reply.at("choices").at(0).at("message").at("content");
      return content.is_string() ? content.get<std::string>() : content.dump();
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::GenerationFailure, std::string("malformed chat reply: ") + e.what());
    }
  }
  throw Error(ErrorCode::GenerationFailure, "chat endpoint unavailable: " + last_error);
}

}  // namespace extractbench
