#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

namespace promptopt {

// Content-addressed response store: one file per key under a directory,
// filename = hex digest, content = stored response JSON. Writes go through
// tmp + rename; reads are lock-free on the filesystem.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& response_text);
  bool remove(const std::string& key);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::mutex write_mutex_;
};

}  // namespace promptopt
