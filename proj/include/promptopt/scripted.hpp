#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "promptopt/provider.hpp"

namespace promptopt {

// Deterministic backend: the reply is a pure function of the request, which
// makes a full optimization run an offline, replayable system under test.
class ScriptedBackend : public Backend {
 public:
  using Responder = std::function<std::string(const CompletionRequest&)>;

  explicit ScriptedBackend(Responder responder, std::string scenario = "custom")
      : responder_(std::move(responder)), scenario_(std::move(scenario)) {}

  BackendReply complete(const CompletionRequest& request) override {
    return {responder_(request), 1};
  }
  std::string name() const override { return "scripted:" + scenario_; }

 private:
  Responder responder_;
  std::string scenario_;
};

namespace scripted {

// The three directives the keyword scenario's generator demands before it
// answers a row correctly.
inline constexpr std::array<std::string_view, 3> kKeywordPhrases = {
    "show your steps",
    "state the final answer clearly",
    "verify your arithmetic",
};

// In the ablation scenario each gradient names a row-specific decoy phrase;
// only the summary names this phrase, which fixes every row at once.
inline constexpr std::string_view kAblationCommonPhrase =
    "ground every statement in the provided question context";

std::string row_question(int index);
std::string row_expected(int index);
std::string decoy_phrase(int index);

// Writes a JSONL dataset whose rows follow the scenario conventions:
// columns {question, expected}, row markers "[row qNNN]".
void write_scenario_dataset(const std::filesystem::path& path, int count, int start_index);

// Named scenarios usable from the CLI as --provider scripted:<name>.
//   keyword           generator succeeds once the prompt carries all three
//                     directive phrases; gradients name the first missing one
//   ablation          per-row decoy gradients, generalizing summary
//   accounting        every generation fails forever (stable call counts)
//   slot_dropper      the editor always drops the prompt's slots
//   unparseable_judge the judge never emits a rating line
//   allpass           the judge rates everything 1
//   echo              every stage echoes the request message back
ScriptedBackend::Responder scripted_scenario(const std::string& name);
std::vector<std::string> scripted_scenario_names();

}  // namespace scripted
}  // namespace promptopt
