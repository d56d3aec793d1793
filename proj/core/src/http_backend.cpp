#include <chrono>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ssas/inference.hpp"
#include "ssas/util.hpp"

namespace ssas {
namespace {

using nlohmann::json;

/// Token bucket; acquire() blocks until a request slot is available.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_second)
      : rate_(requests_per_second),
        tokens_(requests_per_second > 0 ? requests_per_second : 0),
        last_(std::chrono::steady_clock::now()) {}

  void acquire() {
    if (rate_ <= 0) return;
    std::unique_lock<std::mutex> lock(mutex_);
    for (;;) {
      refill();
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      const auto wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
      lock.unlock();
      std::this_thread::sleep_for(wait);
      lock.lock();
    }
  }

 private:
  void refill() {
    const auto now = std::chrono::steady_clock::now();
    const double elapsed = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    tokens_ = std::min(rate_, tokens_ + elapsed * rate_);
  }

  double rate_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mutex_;
};

/// Walk a dotted path through a JSON document; numeric segments index arrays.
const json* json_path(const json& doc, const std::string& path) {
  const json* node = &doc;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t dot = path.find('.', start);
    const std::string segment =
        path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!segment.empty()) {
      if (node->is_array()) {
        char* end = nullptr;
        const long idx = std::strtol(segment.c_str(), &end, 10);
        if (end == segment.c_str() || *end != '\0' || idx < 0 ||
            static_cast<std::size_t>(idx) >= node->size()) {
          return nullptr;
        }
        node = &(*node)[static_cast<std::size_t>(idx)];
      } else if (node->is_object()) {
        auto it = node->find(segment);
        if (it == node->end()) return nullptr;
        node = &*it;
      } else {
        return nullptr;
      }
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return node;
}

struct Endpoint {
  std::string host;  // scheme://host[:port]
  std::string request_path;
};

Endpoint split_endpoint(const std::string& endpoint) {
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw std::invalid_argument("endpoint must include a scheme: " + endpoint);
  }
  const auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

class HttpBackend : public LlmBackend {
 public:
  explicit HttpBackend(BackendConfig config)
      : config_(std::move(config)), limiter_(config_.requests_per_second) {
    if (config_.endpoint.empty()) {
      throw std::invalid_argument("http backend needs an endpoint");
    }
  }

  std::string complete(const Prompt& prompt, std::uint64_t) override {
    json body;
    body["model"] = config_.model;
    body["messages"] = json::array(
        {json{{"role", "user"}, {"content", prompt.render()}}});
    if (config_.temperature) body["temperature"] = *config_.temperature;
    const std::string payload = body.dump();

    const Endpoint endpoint = split_endpoint(config_.endpoint);
    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(200LL << (attempt - 1)));
      }
      limiter_.acquire();
      httplib::Client client(endpoint.host);
      client.set_connection_timeout(config_.timeout_ms / 1000,
                                    (config_.timeout_ms % 1000) * 1000);
      client.set_read_timeout(config_.timeout_ms / 1000,
                              (config_.timeout_ms % 1000) * 1000);
      httplib::Headers headers;
      if (!config_.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.api_key_env.c_str())) {
          headers.emplace("Authorization", std::string("Bearer ") + key);
        }
      }
      auto response =
          client.Post(endpoint.request_path, headers, payload, "application/json");
      if (!response) {
        last_error = "transport error: " + httplib::to_string(response.error());
        continue;
      }
      if (response->status < 200 || response->status >= 300) {
        last_error = "http status " + std::to_string(response->status);
        if (response->status >= 400 && response->status < 500 &&
            response->status != 429) {
          break;  // client errors other than rate limiting will not heal
        }
        continue;
      }
      const json doc = json::parse(response->body, nullptr, false);
      if (doc.is_discarded()) {
        last_error = "response is not valid json";
        continue;
      }
      const json* node = json_path(doc, config_.response_path);
      if (!node || !node->is_string()) {
        last_error = "response path '" + config_.response_path + "' not found";
        continue;
      }
      return node->get<std::string>();
    }
    throw std::runtime_error("llm request failed: " + last_error);
  }

  std::string name() const override { return "http"; }

 private:
  BackendConfig config_;
  RateLimiter limiter_;
};

}  // namespace

std::unique_ptr<LlmBackend> http_backend(const BackendConfig& config) {
  return std::make_unique<HttpBackend>(config);
}

}  // namespace ssas
