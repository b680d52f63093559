#include "promptopt/editor.hpp"

#include <unordered_set>

#include "promptopt/prompts.hpp"

namespace promptopt {
namespace {

std::string trim_outer(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> missing_slots(const PromptTemplate& parent, const PromptTemplate& child) {
  std::unordered_set<std::string> child_slots(child.slots.begin(), child.slots.end());
  std::vector<std::string> missing;
  for (const auto& s : parent.slots)
    if (child_slots.count(s) == 0) missing.push_back(s);
  return missing;
}

}  // namespace

std::string clean_edit_response(const std::string& response) {
  std::string text = trim_outer(response);
  if (text.rfind("```", 0) != 0) return text;
  // Drop the opening fence line (which may carry a language tag) and a
  // closing fence line if one exists.
  const auto first_newline = text.find('\n');
  if (first_newline == std::string::npos) return trim_outer(text.substr(3));
  std::string body = text.substr(first_newline + 1);
  const auto closing = body.rfind("```");
  if (closing != std::string::npos && body.find_first_not_of(" \t\r\n", closing + 3) == std::string::npos)
    body.erase(closing);
  return trim_outer(body);
}

std::optional<CandidatePrompt> propose_candidate(PipelineContext& ctx, const BeamEntry& parent,
                                                 const EditFeedback& feedback,
                                                 const std::string& task_description,
                                                 int max_attempts, int born_iteration) {
  using namespace prompts;
  std::string base =
      "Rewrite the prompt below so that it addresses the feedback. Keep every formatting slot "
      "of the form {name} from the current prompt verbatim in the new prompt. Respond with the "
      "full new prompt text and nothing else.\n\n";
  base += wrap_block(kTaskOpen, task_description, kTaskClose);
  base += "\n\n";
  base += wrap_block(kPromptOpen, parent.tpl.text, kPromptClose);
  base += "\n\n";
  base += wrap_block(kFeedbackOpen, feedback.text, kFeedbackClose);

  std::string note;  // appended after a failed attempt
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    std::string msg = base;
    msg += note;
    const std::string raw =
        ctx.provider.complete(ctx.routing.make_request(Purpose::Edit, std::move(msg))).text;
    const std::string text = clean_edit_response(raw);
    if (text.empty()) {
      note = "\n\nYour previous attempt was empty. Respond with the full new prompt text.";
      continue;
    }
    PromptTemplate tpl = parse_template(text);
    const auto missing = missing_slots(parent.tpl, tpl);
    if (missing.empty()) {
      CandidatePrompt cand;
      cand.tpl = std::move(tpl);
      cand.parent_id = parent.id;
      cand.born_iteration = born_iteration;
      cand.summary_used = feedback.summary;
      return cand;
    }
    note = "\n\n";
    note += kMissingSlotNote;
    for (std::size_t i = 0; i < missing.size(); ++i) {
      note += i == 0 ? " " : ", ";
      note += "{" + missing[i] + "}";
    }
    note += ". The new prompt must contain each of them verbatim.";
  }
  return std::nullopt;
}

}  // namespace promptopt
