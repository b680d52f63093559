#include "promptopt/scripted.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "promptopt/errors.hpp"
#include "promptopt/jsonio.hpp"
#include "promptopt/prompts.hpp"

namespace promptopt::scripted {
namespace {

using prompts::extract_block;

std::string pad3(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03d", index);
  return buf;
}

// Rendered prompts carry exactly one "[row qNNN]" marker, injected by the
// row's question value.
int extract_row_index(std::string_view text) {
  const auto pos = text.find("[row q");
  if (pos == std::string_view::npos) return -1;
  int value = 0;
  std::size_t i = pos + 6;
  bool any = false;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
    value = value * 10 + (text[i] - '0');
    ++i;
    any = true;
  }
  return any && i < text.size() && text[i] == ']' ? value : -1;
}

std::vector<std::string> quoted_phrases(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto open = text.find('"', pos);
    if (open == std::string_view::npos) break;
    const auto close = text.find('"', open + 1);
    if (close == std::string_view::npos) break;
    std::string phrase(text.substr(open + 1, close - open - 1));
    if (std::find(out.begin(), out.end(), phrase) == out.end()) out.push_back(std::move(phrase));
    pos = close + 1;
  }
  return out;
}

const std::string& user_content(const CompletionRequest& req) { return req.messages.back().content; }

std::string equality_judge(const CompletionRequest& req) {
  const auto output = extract_block(user_content(req), prompts::kOutputOpen, prompts::kOutputClose);
  const auto expected =
      extract_block(user_content(req), prompts::kExpectedOpen, prompts::kExpectedClose);
  if (output && expected && *output == *expected)
    return "The output matches the expected answer.\nRATING: 1";
  return "The output does not match the expected answer.\nRATING: 0";
}

std::string directive_gradient(const std::string& phrase) {
  return "The response missed required guidance. Add the directive \"" + phrase +
         "\" to the prompt.";
}

std::string phrase_summary(const std::vector<std::string>& phrases) {
  std::string text =
      "Across the failing examples the prompts lacked explicit guidance. The prompt should "
      "instruct the model as follows:";
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    text += i == 0 ? " " : ", ";
    text += '"' + phrases[i] + '"';
  }
  text += '.';
  return text;
}

// Appends every quoted phrase from the feedback that the prompt does not
// already contain, and fences the reply to exercise fence stripping.
std::string appending_editor(const CompletionRequest& req) {
  const std::string current =
      extract_block(user_content(req), prompts::kPromptOpen, prompts::kPromptClose).value_or("");
  const std::string feedback =
      extract_block(user_content(req), prompts::kFeedbackOpen, prompts::kFeedbackClose).value_or("");
  std::string next = current;
  for (const std::string& phrase : quoted_phrases(feedback))
    if (next.find(phrase) == std::string::npos) next += "\nRemember to " + phrase + ".";
  return "```\n" + next + "\n```";
}

std::string keyword_generation(const CompletionRequest& req) {
  const std::string& content = user_content(req);
  const int row = extract_row_index(content);
  if (row < 0) return "the answer is unclear";
  for (std::string_view phrase : kKeywordPhrases)
    if (content.find(phrase) == std::string::npos) return "the answer is unclear";
  return row_expected(row);
}

std::string keyword_gradient(const CompletionRequest& req) {
  const std::string prompt =
      extract_block(user_content(req), prompts::kPromptOpen, prompts::kPromptClose).value_or("");
  for (std::string_view phrase : kKeywordPhrases)
    if (prompt.find(phrase) == std::string::npos) return directive_gradient(std::string(phrase));
  return "The prompt already carries every required directive; restate them more prominently.";
}

std::string concat_summary(const CompletionRequest& req) {
  const std::string gradients =
      extract_block(user_content(req), prompts::kGradientsOpen, prompts::kGradientsClose).value_or("");
  auto phrases = quoted_phrases(gradients);
  if (phrases.empty()) phrases.push_back("follow the instructions carefully");
  return phrase_summary(phrases);
}

std::string ablation_generation(const CompletionRequest& req) {
  const std::string& content = user_content(req);
  const int row = extract_row_index(content);
  if (row < 0) return "the answer is unclear";
  if (content.find(kAblationCommonPhrase) != std::string::npos ||
      content.find(decoy_phrase(row)) != std::string::npos)
    return row_expected(row);
  return "the answer is unclear";
}

std::string ablation_gradient(const CompletionRequest& req) {
  const int row =
      extract_row_index(extract_block(user_content(req), prompts::kInputOpen, prompts::kInputClose)
                            .value_or(""));
  if (row < 0) return directive_gradient("mention the row marker");
  return "The answer for this example lacked its key reference. Add the directive \"" +
         decoy_phrase(row) + "\" to the prompt.";
}

std::string drop_slots_editor(const CompletionRequest& req) {
  std::string current =
      extract_block(user_content(req), prompts::kPromptOpen, prompts::kPromptClose).value_or("");
  for (char& c : current) {
    if (c == '{') c = '[';
    if (c == '}') c = ']';
  }
  return current;
}

}  // namespace

std::string row_question(int index) {
  return "[row q" + pad3(index) + "] What is the value of item " + std::to_string(index) + "?";
}

std::string row_expected(int index) { return "answer a" + pad3(index); }

std::string decoy_phrase(int index) { return "mention code w" + pad3(index); }

void write_scenario_dataset(const std::filesystem::path& path, int count, int start_index) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string());
  for (int i = 0; i < count; ++i) {
    Json row;
    row["question"] = row_question(start_index + i);
    row["expected"] = row_expected(start_index + i);
    out << row.dump() << '\n';
  }
}

ScriptedBackend::Responder scripted_scenario(const std::string& name) {
  if (name == "keyword") {
    return [](const CompletionRequest& req) -> std::string {
      switch (req.purpose) {
        case Purpose::Generation: return keyword_generation(req);
        case Purpose::Evaluation: return equality_judge(req);
        case Purpose::Gradient: return keyword_gradient(req);
        case Purpose::Summary: return concat_summary(req);
        case Purpose::Edit: return appending_editor(req);
      }
      return "";
    };
  }
  if (name == "ablation") {
    return [](const CompletionRequest& req) -> std::string {
      switch (req.purpose) {
        case Purpose::Generation: return ablation_generation(req);
        case Purpose::Evaluation: return equality_judge(req);
        case Purpose::Gradient: return ablation_gradient(req);
        case Purpose::Summary: return phrase_summary({std::string(kAblationCommonPhrase)});
        case Purpose::Edit: return appending_editor(req);
      }
      return "";
    };
  }
  if (name == "accounting") {
    return [](const CompletionRequest& req) -> std::string {
      switch (req.purpose) {
        case Purpose::Generation: return "the answer is unclear";
        case Purpose::Evaluation: return equality_judge(req);
        case Purpose::Gradient: return directive_gradient("be precise");
        case Purpose::Summary: return concat_summary(req);
        case Purpose::Edit: return appending_editor(req);
      }
      return "";
    };
  }
  if (name == "slot_dropper") {
    return [](const CompletionRequest& req) -> std::string {
      switch (req.purpose) {
        case Purpose::Generation: return "the answer is unclear";
        case Purpose::Evaluation: return equality_judge(req);
        case Purpose::Gradient: return directive_gradient("be precise");
        case Purpose::Summary: return concat_summary(req);
        case Purpose::Edit: return drop_slots_editor(req);
      }
      return "";
    };
  }
  if (name == "unparseable_judge") {
    return [](const CompletionRequest& req) -> std::string {
      switch (req.purpose) {
        case Purpose::Evaluation: return "This response seems adequate to me.";
        case Purpose::Generation: return "the answer is unclear";
        case Purpose::Gradient: return directive_gradient("be precise");
        case Purpose::Summary: return concat_summary(req);
        case Purpose::Edit: return appending_editor(req);
      }
      return "";
    };
  }
  if (name == "allpass") {
    return [](const CompletionRequest& req) -> std::string {
      if (req.purpose == Purpose::Evaluation) return "Meets the criteria.\nRATING: 1";
      return req.messages.back().content;
    };
  }
  if (name == "echo") {
    return [](const CompletionRequest& req) { return req.messages.back().content; };
  }
  std::string known;
  for (const auto& n : scripted_scenario_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown scripted scenario '" + name + "' (known: " + known + ")");
}

std::vector<std::string> scripted_scenario_names() {
  return {"keyword", "ablation", "accounting", "slot_dropper", "unparseable_judge", "allpass", "echo"};
}

}  // namespace promptopt::scripted
