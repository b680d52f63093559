#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace promptopt {

// ordered_json keeps object keys in insertion order, which makes every file
// the engine writes byte-stable for a given input.
using Json = nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path);

// tmp + rename on the same filesystem, so readers never observe a torn file.
void write_text_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace promptopt
