#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace extractbench {

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatClientOptions {
  /// Full endpoint URL, e.g. https://host/v1/chat/completions.
  std::string url;
  std::string model;
  std::string api_key;
  int max_tokens = 532;
  double temperature = 0.0;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::milliseconds timeout{120000};
};

/// Minimal chat-completions client: posts {model, messages, max_tokens,
/// temperature} and returns choices[0].message.content. Transport errors
/// and 5xx replies are retried with exponential backoff.
class ChatClient {
 public:
  explicit ChatClient(ChatClientOptions options);

  std::string complete(const std::vector<ChatMessage>& messages) const;

  const ChatClientOptions& options() const noexcept { return options_; }

 private:
  ChatClientOptions options_;
};

}  // namespace extractbench
