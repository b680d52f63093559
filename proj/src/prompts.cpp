#include "promptopt/prompts.hpp"

namespace promptopt::prompts {

std::optional<std::string> extract_block(std::string_view text, std::string_view open,
                                         std::string_view close) {
  const auto start = text.find(open);
  if (start == std::string_view::npos) return std::nullopt;
  const auto body_start = start + open.size();
  const auto end = text.find(close, body_start);
  if (end == std::string_view::npos) return std::nullopt;
  std::string_view body = text.substr(body_start, end - body_start);
  // Markers sit on their own lines; trim the framing newlines only.
  if (!body.empty() && body.front() == '\n') body.remove_prefix(1);
  if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
  return std::string(body);
}

std::string wrap_block(std::string_view open, std::string_view body, std::string_view close) {
  std::string out;
  out.reserve(open.size() + body.size() + close.size() + 2);
  out += open;
  out += '\n';
  out += body;
  out += '\n';
  out += close;
  return out;
}

}  // namespace promptopt::prompts
