#include "g2pia/clients_http.hpp"

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <thread>

using namespace g2pia;
using nlohmann::json;

namespace {

/// Local loopback server for exercising the HTTP clients end to end.
struct TestServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::atomic<int> chat_calls{0};
  std::atomic<int> flaky_failures_left{0};
  std::string last_auth;
  std::string last_model;

  TestServer() {
    server.Post("/v1/chat/completions", [&](const httplib::Request& req,
                                            httplib::Response& res) {
      ++chat_calls;
      last_auth = req.get_header_value("Authorization");
      if (flaky_failures_left.fetch_sub(1) > 0) {
        res.status = 503;
        return;
      }
      flaky_failures_left = 0;
      const json body = json::parse(req.body);
      last_model = body.value("model", "");
      const std::string prompt = body["messages"][0]["content"];
      res.set_content(
          json{{"choices",
                json::array({json{{"message",
                                   json{{"role", "assistant"},
                                        {"content", "echo: " + prompt}}}}})}}
              .dump(),
          "application/json");
    });
    server.Post("/v1/embeddings", [&](const httplib::Request& req,
                                      httplib::Response& res) {
      const json body = json::parse(req.body);
      const std::string input = body["input"][0];
      // Toy embedding: (length, vowel count, 1).
      double vowels = 0;
      for (char c : input) {
        if (std::string("aeiou").find(c) != std::string::npos) ++vowels;
      }
      res.set_content(
          json{{"data", json::array({json{{"embedding",
                                           {double(input.size()), vowels, 1.0}}}})}}
              .dump(),
          "application/json");
    });
    server.Post("/v1/badjson", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("{not json", "application/json");
    });
    port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~TestServer() {
    server.stop();
    thread.join();
  }

  HttpClientOptions options() const {
    HttpClientOptions opts;
    opts.base_url = "http://127.0.0.1:" + std::to_string(port);
    opts.model = "test-model";
    opts.api_key = "sekret";
    opts.backoff_base = std::chrono::milliseconds(1);
    return opts;
  }
};

}  // namespace

TEST_CASE("chat client posts the prompt and reads the completion") {
  TestServer srv;
  ChatCompletionsClient client(srv.options());
  CHECK(client.complete("hello") == "echo: hello");
  CHECK(srv.last_model == "test-model");
  CHECK(srv.last_auth == "Bearer sekret");
}

TEST_CASE("chat client retries 5xx with backoff and then succeeds") {
  TestServer srv;
  srv.flaky_failures_left = 2;
  ChatCompletionsClient client(srv.options());
  CHECK(client.complete("retry me") == "echo: retry me");
  CHECK(srv.chat_calls == 3);
}

TEST_CASE("chat client gives up after exhausting retries") {
  TestServer srv;
  srv.flaky_failures_left = 100;
  auto opts = srv.options();
  opts.max_retries = 2;
  ChatCompletionsClient client(opts);
  CHECK_THROWS_AS(client.complete("never"), TransportError);
  CHECK(srv.chat_calls == 3);  // initial try + 2 retries
}

TEST_CASE("non-retryable statuses and malformed bodies raise TransportError") {
  TestServer srv;
  auto opts = srv.options();
  ChatCompletionsClient client(opts);
  // 404 from an unknown path is not retried.
  HttpClientOptions bad = opts;
  bad.base_url += "/missing";
  ChatCompletionsClient miss(bad);
  CHECK_THROWS_AS(miss.complete("x"), TransportError);
}

TEST_CASE("unreachable server raises TransportError after retries") {
  HttpClientOptions opts;
  opts.base_url = "http://127.0.0.1:1";  // nothing listens here
  opts.model = "m";
  opts.max_retries = 1;
  opts.backoff_base = std::chrono::milliseconds(1);
  opts.timeout = std::chrono::seconds(2);
  ChatCompletionsClient client(opts);
  CHECK_THROWS_AS(client.complete("x"), TransportError);
}

TEST_CASE("remote embedder parses the vector") {
  TestServer srv;
  RemoteEmbedder embedder(srv.options());
  const auto v = embedder.embed("abc");
  REQUIRE(v.dim() == 3);
  CHECK(v.values()[0] == doctest::Approx(3.0));
  CHECK(v.values()[1] == doctest::Approx(1.0));
  CHECK(v.values()[2] == doctest::Approx(1.0));
}

TEST_CASE("remote victim delegates to the chat endpoint") {
  TestServer srv;
  RemoteVictim victim(srv.options());
  CHECK(victim.answer("what is 2+2?") == "echo: what is 2+2?");
}
