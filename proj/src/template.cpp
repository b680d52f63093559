#include "promptopt/template.hpp"

#include <algorithm>
#include <unordered_set>

#include "promptopt/errors.hpp"

namespace promptopt {
namespace {

bool identifier_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool identifier_char(char c) { return identifier_start(c) || (c >= '0' && c <= '9'); }

// If text[pos] == '{' opens a slot, returns the name length; 0 otherwise.
std::size_t slot_at(std::string_view text, std::size_t pos) {
  std::size_t i = pos + 1;
  if (i >= text.size() || !identifier_start(text[i])) return 0;
  ++i;
  while (i < text.size() && identifier_char(text[i])) ++i;
  if (i >= text.size() || text[i] != '}') return 0;
  return i - pos - 1;
}

}  // namespace

PromptTemplate parse_template(std::string_view text) {
  PromptTemplate tpl;
  tpl.text.assign(text);
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{') continue;
    const std::size_t len = slot_at(text, i);
    if (len == 0) continue;
    std::string_view name = text.substr(i + 1, len);
    if (seen.insert(name).second) tpl.slots.emplace_back(name);
    i += len + 1;  // skip past '}'
  }
  return tpl;
}

std::string render_prompt(const PromptTemplate& tpl, const DatasetRow& row) {
  const std::string_view text = tpl.text;
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '{') {
      const std::size_t len = slot_at(text, i);
      if (len > 0) {
        const std::string name(text.substr(i + 1, len));
        auto it = row.values.find(name);
        if (it == row.values.end()) throw MissingColumn(name);
        out += it->second;
        i += len + 1;
        continue;
      }
    }
    out += text[i];
  }
  return out;
}

bool slots_preserved(const PromptTemplate& parent, const PromptTemplate& child) {
  std::unordered_set<std::string_view> child_slots(child.slots.begin(), child.slots.end());
  return std::all_of(parent.slots.begin(), parent.slots.end(),
                     [&](const std::string& s) { return child_slots.count(s) > 0; });
}

}  // namespace promptopt
