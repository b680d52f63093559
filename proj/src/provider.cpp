#include "promptopt/provider.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <cstring>
#include <stdexcept>

#include "promptopt/errors.hpp"

namespace promptopt {
namespace {

void append_length_prefixed(std::string& buf, std::string_view field) {
  char len[32];
  auto [end, ec] = std::to_chars(len, len + sizeof(len), field.size());
  buf.append(len, end);
  buf += ':';
  buf += field;
  buf += ';';
}

std::string canonical_double(double v) {
  char num[64];
  auto [end, ec] = std::to_chars(num, num + sizeof(num), v);
  return std::string(num, end);
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

Json request_to_json(const CompletionRequest& request) {
  Json messages = Json::array();
  for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  Json j;
  j["model"] = request.model;
  j["temperature"] = request.temperature;
  j["max_output_tokens"] = request.max_output_tokens;
  j["messages"] = std::move(messages);
  return j;
}

}  // namespace

const char* to_string(Purpose p) {
  switch (p) {
    case Purpose::Generation: return "generation";
    case Purpose::Evaluation: return "evaluation";
    case Purpose::Gradient: return "gradient";
    case Purpose::Summary: return "summary";
    case Purpose::Edit: return "edit";
  }
  return "unknown";
}

Purpose purpose_from_string(const std::string& s) {
  if (s == "generation") return Purpose::Generation;
  if (s == "evaluation") return Purpose::Evaluation;
  if (s == "gradient") return Purpose::Gradient;
  if (s == "summary") return Purpose::Summary;
  if (s == "edit") return Purpose::Edit;
  throw std::invalid_argument("unknown purpose '" + s + "'");
}

std::string cache_key(const CompletionRequest& request) {
  std::string canon;
  append_length_prefixed(canon, request.model);
  append_length_prefixed(canon, canonical_double(request.temperature));
  append_length_prefixed(canon, std::to_string(request.max_output_tokens));
  for (const auto& m : request.messages) {
    append_length_prefixed(canon, m.role);
    append_length_prefixed(canon, m.content);
  }
  return sha256_hex(canon);
}

Provider::Provider(std::unique_ptr<Backend> backend, std::unique_ptr<ResponseCache> cache,
                   LedgerWriter* ledger, std::optional<std::uint64_t> call_budget)
    : backend_(std::move(backend)),
      cache_(std::move(cache)),
      ledger_(ledger),
      call_budget_(call_budget) {
  if (!backend_) throw std::invalid_argument("provider needs a backend");
}

CompletionResponse Provider::complete(const CompletionRequest& request) {
  if (request.messages.empty()) throw std::invalid_argument("request has no messages");

  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (call_budget_ && stats_.total >= *call_budget_)
      throw BudgetExceeded("call budget of " + std::to_string(*call_budget_) + " exhausted");
  }

  const std::string key = cache_key(request);
  const bool cacheable = request.temperature == 0.0 && cache_ != nullptr;

  CompletionResponse response;
  const auto start = std::chrono::steady_clock::now();
  if (cacheable) {
    if (auto hit = cache_->get(key)) {
      response.text = std::move(*hit);
      response.from_cache = true;
      response.attempt_count = 1;
    }
  }
  if (!response.from_cache) {
    BackendReply reply = backend_->complete(request);
    response.text = std::move(reply.text);
    response.attempt_count = reply.attempts;
    if (cacheable) cache_->put(key, response.text);
  }
  response.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();

  // Counters move only on success, so a failed call never consumes a seq or
  // budget slot and the ledger line count stays equal to completed calls.
  std::uint64_t seq;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    seq = stats_.total;
    ++stats_.total;
    ++stats_.by_purpose[static_cast<int>(request.purpose)];
    if (response.from_cache) ++stats_.cache_hits;
  }

  if (ledger_) {
    LedgerEntry entry;
    entry.seq = seq;
    entry.purpose = to_string(request.purpose);
    entry.cache_key = key;
    entry.request = request_to_json(request);
    entry.response_text = response.text;
    entry.from_cache = response.from_cache;
    entry.attempts = response.attempt_count;
    ledger_->append(entry);
  }
  return response;
}

CallStats Provider::stats() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return stats_;
}

void Provider::restore_counters(const CallStats& stats) {
  std::lock_guard<std::mutex> lock(mutex_);
  stats_ = stats;
}

}  // namespace promptopt
