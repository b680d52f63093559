#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "promptopt/provider.hpp"

namespace promptopt {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{500};  // full-jitter exponential backoff
};

// OpenAI-compatible chat-completions client.
//
// POST {base_url}/chat/completions with {model, messages, temperature,
// max_tokens}; reads choices[0].message.content. 5xx and transport failures
// retry under the policy; 4xx fail immediately as BackendError.
class HttpBackend : public Backend {
 public:
  HttpBackend(std::string base_url, std::string api_key_env, RetryPolicy retry = {});

  BackendReply complete(const CompletionRequest& request) override;
  std::string name() const override { return "http"; }

 private:
  std::string base_url_;
  std::string api_key_env_;
  RetryPolicy retry_;
  std::uint64_t jitter_state_;
};

}  // namespace promptopt
