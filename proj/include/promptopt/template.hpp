#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "promptopt/dataset.hpp"

namespace promptopt {

// A prompt template plus its named formatting slots.
//
// Slot grammar is `{identifier}` only, identifier = [A-Za-z_][A-Za-z0-9_]*.
// Brace pairs whose interior does not match the pattern ("{produce the
// answer}") are literal text, and an identifier-form slot is recognized even
// when preceded by '$' (the '$' stays literal). There is no escaping syntax:
// literal `{identifier}` text cannot be expressed.
struct PromptTemplate {
  std::string text;
  std::vector<std::string> slots;  // deduplicated, first-occurrence order
};

PromptTemplate parse_template(std::string_view text);

// Replaces every recognized `{name}` occurrence with the row's value for
// `name`; all other text is copied byte for byte. Substituted values are not
// re-scanned for slots. Throws MissingColumn when a slot has no column.
std::string render_prompt(const PromptTemplate& tpl, const DatasetRow& row);

// true iff set(parent.slots) is a subset of set(child.slots). Order and
// multiplicity are irrelevant.
bool slots_preserved(const PromptTemplate& parent, const PromptTemplate& child);

}  // namespace promptopt
