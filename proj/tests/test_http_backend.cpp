#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ssas/inference.hpp"

using namespace ssas;
using nlohmann::json;

namespace {

/// Local chat-completion stand-in bound to an ephemeral port.
struct LocalServer {
  httplib::Server server;
  int port = 0;
  std::thread thread;

  explicit LocalServer(httplib::Server::Handler handler) {
    server.Post("/v1/chat/completions", std::move(handler));
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LocalServer() {
    server.stop();
    thread.join();
  }
  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  }
};

BackendConfig config_for(const LocalServer& server) {
  BackendConfig config;
  config.endpoint = server.endpoint();
  config.model = "test-model";
  config.temperature = 0.25;
  config.max_retries = 2;
  config.api_key_env = "SSAS_TEST_KEY";
  return config;
}

Prompt sample_prompt() {
  Review review{"r1", "e1", "lovely product", "2020-01-01", "2020-Q1"};
  return build_prompt(review, Method::Direct);
}

}  // namespace

TEST_CASE("http backend posts the chat payload and extracts the reply") {
  json seen_body;
  std::string seen_auth;
  LocalServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen_body = json::parse(req.body);
    if (req.has_header("Authorization")) {
      seen_auth = req.get_header_value("Authorization");
    }
    res.set_content(
        json{{"choices", {{{"message", {{"content", "Sentiment: positive"}}}}}}}
            .dump(),
        "application/json");
  });

  setenv("SSAS_TEST_KEY", "sekrit", 1);
  auto backend = http_backend(config_for(server));
  const std::string reply = backend->complete(sample_prompt(), 0);
  CHECK(reply == "Sentiment: positive");
  CHECK(parse_label(reply) == SentimentLabel::Positive);

  CHECK(seen_body["model"] == "test-model");
  CHECK(seen_body["temperature"] == doctest::Approx(0.25));
  REQUIRE(seen_body["messages"].is_array());
  const std::string content = seen_body["messages"][0]["content"];
  CHECK(content.find("lovely product") != std::string::npos);
  CHECK(seen_auth == "Bearer sekrit");
  unsetenv("SSAS_TEST_KEY");
}

TEST_CASE("http backend retries server errors with backoff") {
  std::atomic<int> calls{0};
  LocalServer server([&](const httplib::Request&, httplib::Response& res) {
    if (calls.fetch_add(1) == 0) {
      res.status = 500;
      return;
    }
    res.set_content(json{{"text", "neutral"}}.dump(), "application/json");
  });

  BackendConfig config = config_for(server);
  config.response_path = "text";
  auto backend = http_backend(config);
  CHECK(backend->complete(sample_prompt(), 0) == "neutral");
  CHECK(calls.load() == 2);
}

TEST_CASE("http backend does not retry hard client errors") {
  std::atomic<int> calls{0};
  LocalServer server([&](const httplib::Request&, httplib::Response& res) {
    calls.fetch_add(1);
    res.status = 404;
  });

  auto backend = http_backend(config_for(server));
  CHECK_THROWS_WITH_AS(backend->complete(sample_prompt(), 0),
                       doctest::Contains("404"), std::runtime_error);
  CHECK(calls.load() == 1);
}

TEST_CASE("a wrong response path is reported, not misparsed") {
  LocalServer server([&](const httplib::Request&, httplib::Response& res) {
    res.set_content(json{{"unexpected", 1}}.dump(), "application/json");
  });
  auto backend = http_backend(config_for(server));
  CHECK_THROWS_WITH_AS(backend->complete(sample_prompt(), 0),
                       doctest::Contains("response path"), std::runtime_error);
}

TEST_CASE("nested response paths with array indices work") {
  LocalServer server([&](const httplib::Request&, httplib::Response& res) {
    res.set_content(
        json{{"choices",
              {{{"message", {{"content", "negative, sadly"}}}}}}}
            .dump(),
        "application/json");
  });
  BackendConfig config = config_for(server);
  config.response_path = "choices.0.message.content";
  auto backend = http_backend(config);
  CHECK(backend->complete(sample_prompt(), 0) == "negative, sadly");
}
