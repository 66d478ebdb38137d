#include "g2pia/clients_http.hpp"

#include <httplib.h>
#include <json.hpp>

#include <thread>

namespace g2pia {

using nlohmann::json;

namespace {

struct HttpPoster {
  explicit HttpPoster(HttpClientOptions opts)
      : options(std::move(opts)), client(options.base_url) {
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    if (!options.api_key.empty()) {
      client.set_default_headers(
          {{"Authorization", "Bearer " + options.api_key}});
    }
  }

  json post(const std::string& path, const json& body) {
    auto delay = options.backoff_base;
    std::string last_error;
    for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(delay);
        delay *= 2;
      }
      auto res = client.Post(path, body.dump(), "application/json");
      if (!res) {
        last_error = "no response (" + httplib::to_string(res.error()) + ")";
        continue;
      }
      if (res->status >= 500) {
        last_error = "server status " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        throw TransportError(path + ": status " + std::to_string(res->status) +
                             ": " + res->body);
      }
      try {
        return json::parse(res->body);
      } catch (const json::exception& e) {
        throw TransportError(path + ": bad JSON response: " + e.what());
      }
    }
    throw TransportError(path + ": retries exhausted: " + last_error);
  }

  HttpClientOptions options;
  httplib::Client client;
};

}  // namespace

struct ChatCompletionsClient::Impl : HttpPoster {
  using HttpPoster::HttpPoster;
};

ChatCompletionsClient::ChatCompletionsClient(HttpClientOptions options)
    : impl_(std::make_unique<Impl>(std::move(options))) {}

ChatCompletionsClient::~ChatCompletionsClient() = default;

std::string ChatCompletionsClient::complete(const std::string& prompt) {
  const json body{{"model", impl_->options.model},
                  {"messages", json::array({json{{"role", "user"},
                                                 {"content", prompt}}})},
                  {"temperature", impl_->options.temperature}};
  const json res = impl_->post("/v1/chat/completions", body);
  try {
    const std::string content =
        res.at("choices").at(0).at("message").at("content").get<std::string>();
    if (content.empty()) {
      throw TransportError("chat completion returned empty content");
    }
    return content;
  } catch (const json::exception& e) {
    throw TransportError(std::string("chat completion: unexpected shape: ") +
                         e.what());
  }
}

struct RemoteEmbedder::Impl : HttpPoster {
  using HttpPoster::HttpPoster;
};

RemoteEmbedder::RemoteEmbedder(HttpClientOptions options)
    : impl_(std::make_unique<Impl>(std::move(options))) {}

RemoteEmbedder::~RemoteEmbedder() = default;

EmbeddingVector RemoteEmbedder::embed(const std::string& text) {
  const json body{{"model", impl_->options.model},
                  {"input", json::array({text})}};
  const json res = impl_->post("/v1/embeddings", body);
  try {
    const auto& arr = res.at("data").at(0).at("embedding");
    Vector v(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) v[i] = arr[i].get<double>();
    return EmbeddingVector(v);
  } catch (const json::exception& e) {
    throw TransportError(std::string("embeddings: unexpected shape: ") + e.what());
  }
}

}  // namespace g2pia
