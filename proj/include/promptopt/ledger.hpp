#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include "promptopt/jsonio.hpp"

namespace promptopt {

// One provider call. The ledger is the source of truth for call accounting,
// caching state, and replay; it carries no timestamps so two identical runs
// produce byte-identical files.
struct LedgerEntry {
  std::uint64_t seq = 0;
  std::string purpose;
  std::string cache_key;
  Json request;  // {model, temperature, max_output_tokens, messages}
  std::string response_text;
  bool from_cache = false;
  int attempts = 1;

  Json to_json() const;
  static LedgerEntry from_json(const Json& j);
};

// Append-only JSONL writer; each append is one flushed line.
class LedgerWriter {
 public:
  explicit LedgerWriter(std::filesystem::path path);

  void append(const LedgerEntry& entry);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::mutex mutex_;
};

std::vector<LedgerEntry> read_ledger(const std::filesystem::path& path);

}  // namespace promptopt
