#include "promptopt/ledger.hpp"

#include "promptopt/errors.hpp"

namespace promptopt {

Json LedgerEntry::to_json() const {
  Json j;
  j["seq"] = seq;
  j["purpose_tag"] = purpose;
  j["cache_key"] = cache_key;
  j["request"] = request;
  j["response_text"] = response_text;
  j["from_cache"] = from_cache;
  j["attempts"] = attempts;
  return j;
}

LedgerEntry LedgerEntry::from_json(const Json& j) {
  LedgerEntry e;
  e.seq = j.at("seq").get<std::uint64_t>();
  e.purpose = j.at("purpose_tag").get<std::string>();
  e.cache_key = j.at("cache_key").get<std::string>();
  e.request = j.at("request");
  e.response_text = j.at("response_text").get<std::string>();
  e.from_cache = j.at("from_cache").get<bool>();
  e.attempts = j.at("attempts").get<int>();
  return e;
}

LedgerWriter::LedgerWriter(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw IoError("cannot open ledger " + path_.string());
}

void LedgerWriter::append(const LedgerEntry& entry) {
  const std::string line = entry.to_json().dump();
  std::lock_guard<std::mutex> lock(mutex_);
  out_ << line << '\n';
  out_.flush();
  if (!out_) throw IoError("ledger append failed: " + path_.string());
}

std::vector<LedgerEntry> read_ledger(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open ledger " + path.string());
  std::vector<LedgerEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      entries.push_back(LedgerEntry::from_json(Json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("ledger: ") + e.what());
    }
  }
  return entries;
}

}  // namespace promptopt
