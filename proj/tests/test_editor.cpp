#include <doctest.h>

#include "promptopt/editor.hpp"
#include "promptopt/prompts.hpp"
#include "promptopt/scripted.hpp"
#include "support/test_helpers.hpp"

using namespace promptopt;
using test_support::ScriptedRig;

namespace {

BeamEntry parent_entry(const std::string& prompt) {
  BeamEntry entry;
  entry.id = 1;
  entry.tpl = parse_template(prompt);
  entry.rating_sum = 3;
  entry.eval_count = 10;
  return entry;
}

EditFeedback feedback_with(const std::string& text) {
  EditFeedback fb;
  fb.text = text;
  fb.summary = GradientSummary{text, 2};
  return fb;
}

}  // namespace

TEST_CASE("clean_edit_response strips fences and whitespace") {
  CHECK(clean_edit_response("plain text") == "plain text");
  CHECK(clean_edit_response("  padded \n") == "padded");
  CHECK(clean_edit_response("```\nfenced {q}\n```") == "fenced {q}");
  CHECK(clean_edit_response("```text\nfenced\nbody\n```\n") == "fenced\nbody");
  CHECK(clean_edit_response("```\nno closing fence") == "no closing fence");
  CHECK(clean_edit_response("") == "");
}

TEST_CASE("propose_candidate accepts a slot-preserving rewrite") {
  ScriptedRig rig(scripted::scripted_scenario("keyword"));
  const auto parent = parent_entry("Answer: {question}");
  const auto feedback = feedback_with("Please add the directive \"show your steps\" here.");

  const auto cand = propose_candidate(rig.ctx, parent, feedback, "task", 3, 4);
  REQUIRE(cand.has_value());
  CHECK(slots_preserved(parent.tpl, cand->tpl));
  CHECK(cand->tpl.text.find("show your steps") != std::string::npos);
  CHECK(cand->parent_id == 1);
  CHECK(cand->born_iteration == 4);
  REQUIRE(cand->summary_used.has_value());
  CHECK(cand->summary_used->source_count == 2);
  CHECK(rig.ledger_entries().size() == 1);
  CHECK(rig.ledger_entries()[0].purpose == "edit");
}

TEST_CASE("slot-dropping editor exhausts retries into NoValidCandidate") {
  ScriptedRig rig(scripted::scripted_scenario("slot_dropper"));
  const auto parent = parent_entry("Keep {question} and {context}.");

  const auto cand = propose_candidate(rig.ctx, parent, feedback_with("f"), "task", 3, 1);
  CHECK_FALSE(cand.has_value());

  const auto entries = rig.ledger_entries();
  REQUIRE(entries.size() == 3);  // max_attempts total calls
  // Retries list the dropped slots.
  const std::string second = entries[1].request.at("messages").at(0).at("content");
  CHECK(second.find(prompts::kMissingSlotNote) != std::string::npos);
  CHECK(second.find("{question}") != std::string::npos);
  CHECK(second.find("{context}") != std::string::npos);
  const std::string first = entries[0].request.at("messages").at(0).at("content");
  CHECK(first.find(prompts::kMissingSlotNote) == std::string::npos);
}

TEST_CASE("editor that heeds the retry note succeeds on attempt two") {
  ScriptedRig rig([](const CompletionRequest& req) -> std::string {
    const std::string& msg = req.messages.back().content;
    if (msg.find(prompts::kMissingSlotNote) != std::string::npos)
      return "A compliant rewrite keeping {question}.";
    return "A sloppy rewrite that lost the slot.";
  });
  const auto parent = parent_entry("Answer: {question}");
  const auto cand = propose_candidate(rig.ctx, parent, feedback_with("f"), "task", 3, 2);
  REQUIRE(cand.has_value());
  CHECK(cand->tpl.text == "A compliant rewrite keeping {question}.");
  CHECK(rig.ledger_entries().size() == 2);
}

TEST_CASE("empty or whitespace responses never become candidates") {
  int calls = 0;
  ScriptedRig rig([&](const CompletionRequest&) {
    ++calls;
    return std::string("   \n  ");
  });
  const auto parent = parent_entry("Zero-slot prompt.");
  const auto cand = propose_candidate(rig.ctx, parent, feedback_with("f"), "task", 3, 1);
  CHECK_FALSE(cand.has_value());
  CHECK(calls == 3);
}

TEST_CASE("zero-slot parent accepts any non-empty response") {
  ScriptedRig rig([](const CompletionRequest&) { return std::string("anything at all"); });
  const auto parent = parent_entry("Zero-slot prompt.");
  const auto cand = propose_candidate(rig.ctx, parent, feedback_with("f"), "task", 3, 1);
  REQUIRE(cand.has_value());
  CHECK(cand->tpl.text == "anything at all");
}

TEST_CASE("fenced editor replies are unfenced before the slot check") {
  ScriptedRig rig([](const CompletionRequest&) {
    return std::string("```\nRewritten with {question} kept.\n```");
  });
  const auto parent = parent_entry("Answer: {question}");
  const auto cand = propose_candidate(rig.ctx, parent, feedback_with("f"), "task", 3, 1);
  REQUIRE(cand.has_value());
  CHECK(cand->tpl.text == "Rewritten with {question} kept.");
}

TEST_CASE("edit requests carry prompt, feedback, task, and slot instruction") {
  ScriptedRig rig(scripted::scripted_scenario("keyword"));
  const auto parent = parent_entry("The current prompt {question}");
  propose_candidate(rig.ctx, parent, feedback_with("the feedback paragraph"), "the task text", 3, 1);

  const std::string msg = rig.ledger_entries()[0].request.at("messages").at(0).at("content");
  CHECK(msg.find("The current prompt {question}") != std::string::npos);
  CHECK(msg.find("the feedback paragraph") != std::string::npos);
  CHECK(msg.find("the task text") != std::string::npos);
  CHECK(msg.find("verbatim") != std::string::npos);
}
