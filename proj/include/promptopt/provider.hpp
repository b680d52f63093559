#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "promptopt/cache.hpp"
#include "promptopt/ledger.hpp"

namespace promptopt {

// Which pipeline stage issued a request. Carried on every ledger entry;
// excluded from the cache key.
enum class Purpose { Generation, Evaluation, Gradient, Summary, Edit };

const char* to_string(Purpose p);
Purpose purpose_from_string(const std::string& s);

struct Message {
  std::string role;  // "system" or "user"
  std::string content;
};

struct CompletionRequest {
  std::string model;
  double temperature = 0.0;
  int max_output_tokens = 1024;
  std::vector<Message> messages;
  Purpose purpose = Purpose::Generation;
};

struct CompletionResponse {
  std::string text;  // verbatim assistant message
  bool from_cache = false;
  std::int64_t latency_ms = 0;
  int attempt_count = 1;
};

// SHA-256 hex digest over the canonical serialization of (model, temperature,
// max_output_tokens, messages). Every field is length-prefixed so adjacent
// fields can never run together. purpose is deliberately excluded.
std::string cache_key(const CompletionRequest& request);

struct BackendReply {
  std::string text;
  int attempts = 1;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendReply complete(const CompletionRequest& request) = 0;
  virtual std::string name() const = 0;
};

struct CallStats {
  std::uint64_t total = 0;
  std::uint64_t cache_hits = 0;
  std::array<std::uint64_t, 5> by_purpose{};  // indexed by Purpose

  std::uint64_t purpose_count(Purpose p) const { return by_purpose[static_cast<int>(p)]; }
};

// Front door for all model calls: consults the response cache (temperature 0
// only), forwards to the backend, appends every call to the run ledger, and
// enforces the optional call budget. Thread-safe.
class Provider {
 public:
  Provider(std::unique_ptr<Backend> backend, std::unique_ptr<ResponseCache> cache,
           LedgerWriter* ledger, std::optional<std::uint64_t> call_budget = std::nullopt);

  CompletionResponse complete(const CompletionRequest& request);

  CallStats stats() const;

  // Resume support: restores the seq counter and stats derived from the
  // surviving ledger lines.
  void restore_counters(const CallStats& stats);

 private:
  std::unique_ptr<Backend> backend_;
  std::unique_ptr<ResponseCache> cache_;
  LedgerWriter* ledger_;  // not owned; may be null in unit tests
  std::optional<std::uint64_t> call_budget_;
  mutable std::mutex mutex_;
  CallStats stats_;
};

}  // namespace promptopt
