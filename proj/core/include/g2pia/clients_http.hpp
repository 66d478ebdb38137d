#pragma once

#include "g2pia/generator.hpp"
#include "g2pia/harness.hpp"

#include <chrono>
#include <memory>
#include <string>

namespace g2pia {

struct HttpClientOptions {
  std::string base_url;  // e.g. http://localhost:8080
  std::string model;
  std::string api_key;  // sent as "Authorization: Bearer ..." when nonempty
  double temperature = 0.0;
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{100};  // doubled per retry
  std::chrono::seconds timeout{60};
};

/// OpenAI-compatible chat completions endpoint:
/// POST {base_url}/v1/chat/completions with {model, messages, temperature},
/// answer taken from choices[0].message.content. Retries transport errors and
/// 5xx with exponential backoff, then throws TransportError.
class ChatCompletionsClient : public AssistantClient {
 public:
  explicit ChatCompletionsClient(HttpClientOptions options);
  ~ChatCompletionsClient() override;

  std::string complete(const std::string& prompt) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// OpenAI-compatible embeddings endpoint:
/// POST {base_url}/v1/embeddings with {model, input: [text]}, vector taken
/// from data[0].embedding.
class RemoteEmbedder : public TextEmbedder {
 public:
  explicit RemoteEmbedder(HttpClientOptions options);
  ~RemoteEmbedder() override;

  EmbeddingVector embed(const std::string& text) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Victim backed by a chat completions endpoint.
class RemoteVictim : public VictimClient {
 public:
  explicit RemoteVictim(HttpClientOptions options)
      : client_(std::move(options)) {}

  std::string answer(const std::string& prompt) override {
    return client_.complete(prompt);
  }

 private:
  ChatCompletionsClient client_;
};

}  // namespace g2pia
