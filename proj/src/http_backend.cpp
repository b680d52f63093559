#include "promptopt/http_backend.hpp"

#include <cstdlib>
#include <random>
#include <thread>

#include <httplib.h>

#include "promptopt/errors.hpp"
#include "promptopt/jsonio.hpp"

namespace promptopt {
namespace {

// Splits "http://host:port/v1" into (scheme://host:port, /v1).
std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
  const auto scheme_end = base_url.find("://");
  const std::size_t path_start =
      base_url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) return {base_url, ""};
  std::string path = base_url.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {base_url.substr(0, path_start), path};
}

bool retryable_status(int status) { return status >= 500 || status == 0; }

}  // namespace

HttpBackend::HttpBackend(std::string base_url, std::string api_key_env, RetryPolicy retry)
    : base_url_(std::move(base_url)), api_key_env_(std::move(api_key_env)), retry_(retry) {
  // Jitter only spreads retry timing; it must not touch the run's seeded
  // stream, so it gets its own nondeterministic state.
  jitter_state_ = std::random_device{}();
}

BackendReply HttpBackend::complete(const CompletionRequest& request) {
  Json messages = Json::array();
  for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  Json body;
  body["model"] = request.model;
  body["messages"] = std::move(messages);
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_output_tokens;
  const std::string payload = body.dump();

  const auto [host, prefix] = split_base_url(base_url_);
  httplib::Client client(host);
  client.set_connection_timeout(30, 0);
  client.set_read_timeout(120, 0);

  httplib::Headers headers;
  if (!api_key_env_.empty()) {
    const char* key = std::getenv(api_key_env_.c_str());
    if (key == nullptr || *key == '\0')
      throw ConfigError("credential environment variable " + api_key_env_ + " is not set");
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  std::mt19937_64 jitter(jitter_state_);
  std::string last_failure;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    auto res = client.Post(prefix + "/chat/completions", headers, payload, "application/json");
    const int status = res ? res->status : 0;
    if (res && status == 200) {
      Json parsed;
      try {
        parsed = Json::parse(res->body);
        std::string text = parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        jitter_state_ = jitter();
        return {std::move(text), attempt};
      } catch (const nlohmann::json::exception& e) {
        throw BackendError(status, std::string("malformed completion payload: ") + e.what());
      }
    }
    if (res && !retryable_status(status)) throw BackendError(status, res->body);
    last_failure = res ? "status " + std::to_string(status) : "transport: " + httplib::to_string(res.error());
    if (attempt < retry_.max_attempts) {
      // Full jitter: uniform in [0, base * 2^(attempt-1)].
      const auto ceiling = retry_.base_delay.count() << (attempt - 1);
      const auto delay = ceiling > 0 ? static_cast<long long>(jitter() % (ceiling + 1)) : 0;
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }
  }
  jitter_state_ = jitter();
  throw TransportError("gave up after " + std::to_string(retry_.max_attempts) + " attempts (" +
                       last_failure + ")");
}

}  // namespace promptopt
