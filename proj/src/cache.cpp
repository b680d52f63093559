#include "promptopt/cache.hpp"

#include <fstream>
#include <sstream>

#include "promptopt/errors.hpp"
#include "promptopt/jsonio.hpp"

namespace promptopt {

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::optional<std::string> ResponseCache::get(const std::string& key) const {
  const auto path = dir_ / key;
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  Json stored;
  try {
    stored = Json::parse(buf.str());
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;  // corrupt entry reads as a miss
  }
  if (!stored.contains("response_text") || !stored["response_text"].is_string()) return std::nullopt;
  return stored["response_text"].get<std::string>();
}

void ResponseCache::put(const std::string& key, const std::string& response_text) {
  Json stored;
  stored["response_text"] = response_text;
  std::lock_guard<std::mutex> lock(write_mutex_);
  write_text_file_atomic(dir_ / key, stored.dump());
}

bool ResponseCache::remove(const std::string& key) {
  std::lock_guard<std::mutex> lock(write_mutex_);
  std::error_code ec;
  return std::filesystem::remove(dir_ / key, ec);
}

}  // namespace promptopt
