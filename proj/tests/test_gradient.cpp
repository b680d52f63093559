#include <doctest.h>

#include <set>

#include "promptopt/errors.hpp"
#include "promptopt/gradient.hpp"
#include "promptopt/prompts.hpp"
#include "promptopt/scripted.hpp"
#include "support/test_helpers.hpp"

using namespace promptopt;
using test_support::ScriptedRig;

namespace {

EvaluationRecord record(std::int64_t row_id, int rating, bool failed_parse = false) {
  EvaluationRecord rec;
  rec.row_id = row_id;
  rec.rating = rating;
  rec.failed_parse = failed_parse;
  rec.output = "output " + std::to_string(row_id);
  rec.explanation = "explanation " + std::to_string(row_id);
  return rec;
}

}  // namespace

TEST_CASE("select_failures keeps every clean zero up to the cap") {
  Rng rng(3);
  std::vector<EvaluationRecord> records;
  for (int i = 0; i < 10; ++i) records.push_back(record(i, i == 2 || i == 5 || i == 7 ? 0 : 1));

  const auto picked = select_failures(records, 5, rng);
  REQUIRE(picked.size() == 3);
  CHECK(picked[0].row_id == 2);
  CHECK(picked[1].row_id == 5);
  CHECK(picked[2].row_id == 7);
}

TEST_CASE("select_failures subsamples when zeros exceed the cap") {
  std::vector<EvaluationRecord> records;
  for (int i = 0; i < 10; ++i) records.push_back(record(i, i < 8 ? 0 : 1));

  Rng rng(4);
  const auto picked = select_failures(records, 5, rng);
  REQUIRE(picked.size() == 5);
  std::set<std::int64_t> ids;
  for (const auto& r : picked) {
    CHECK(r.rating == 0);
    ids.insert(r.row_id);
  }
  CHECK(ids.size() == 5);

  // Deterministic given the same stream.
  Rng rng2(4);
  const auto again = select_failures(records, 5, rng2);
  for (std::size_t i = 0; i < picked.size(); ++i) CHECK(picked[i].row_id == again[i].row_id);

  // Subsample preserves record order.
  for (std::size_t i = 1; i < picked.size(); ++i) CHECK(picked[i - 1].row_id < picked[i].row_id);
}

TEST_CASE("select_failures excludes ones and failed parses") {
  Rng rng(5);
  std::vector<EvaluationRecord> all_ones;
  for (int i = 0; i < 6; ++i) all_ones.push_back(record(i, 1));
  CHECK(select_failures(all_ones, 5, rng).empty());

  std::vector<EvaluationRecord> with_parse_failures;
  with_parse_failures.push_back(record(0, 0, true));  // unjudgeable, no explanation to critique
  with_parse_failures.push_back(record(1, 0, false));
  const auto picked = select_failures(with_parse_failures, 5, rng);
  REQUIRE(picked.size() == 1);
  CHECK(picked[0].row_id == 1);
}

TEST_CASE("compute_gradient sends all six information elements") {
  ScriptedRig rig([](const CompletionRequest&) { return std::string("a fixed critique"); });
  const auto tpl = parse_template("Current prompt {q}");
  EvaluationRecord failure = record(7, 0);

  const Gradient grad = compute_gradient(rig.ctx, tpl, "the task description", "the criteria",
                                         failure, "the rendered input");
  CHECK(grad.text == "a fixed critique");
  CHECK(grad.source_row_id == 7);

  // Ledger-inspection oracle: the request must contain every element.
  const auto entries = rig.ledger_entries();
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].purpose == "gradient");
  const std::string msg = entries[0].request.at("messages").at(0).at("content");
  CHECK(msg.find("the task description") != std::string::npos);
  CHECK(msg.find("Current prompt {q}") != std::string::npos);
  CHECK(msg.find("the rendered input") != std::string::npos);
  CHECK(msg.find("output 7") != std::string::npos);
  CHECK(msg.find("the criteria") != std::string::npos);
  CHECK(msg.find("explanation 7") != std::string::npos);
}

TEST_CASE("compute_gradient rejects an empty critique") {
  ScriptedRig rig([](const CompletionRequest&) { return std::string("  \n "); });
  const auto tpl = parse_template("p");
  EvaluationRecord failure = record(0, 0);
  CHECK_THROWS_AS(compute_gradient(rig.ctx, tpl, "t", "c", failure, "in"), EmptyGradient);
}

TEST_CASE("summarize_gradients makes one call carrying every gradient") {
  ScriptedRig rig(scripted::scripted_scenario("keyword"));
  std::vector<Gradient> gradients;
  for (int i = 0; i < 5; ++i)
    gradients.push_back({i, "Add the directive \"phrase " + std::to_string(i) + "\" now."});

  const GradientSummary summary = summarize_gradients(rig.ctx, gradients, "the task");
  CHECK(summary.source_count == 5);
  CHECK_FALSE(summary.text.empty());
  for (int i = 0; i < 5; ++i)
    CHECK(summary.text.find("phrase " + std::to_string(i)) != std::string::npos);

  const auto entries = rig.ledger_entries();
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].purpose == "summary");
  const std::string msg = entries[0].request.at("messages").at(0).at("content");
  CHECK(msg.find("the task") != std::string::npos);
  for (const auto& g : gradients) CHECK(msg.find(g.text) != std::string::npos);
}

TEST_CASE("summarize_gradients still calls for a single gradient") {
  ScriptedRig rig(scripted::scripted_scenario("keyword"));
  const GradientSummary summary =
      summarize_gradients(rig.ctx, {{0, "Add the directive \"only one\" today."}}, "task");
  CHECK(summary.source_count == 1);
  CHECK(rig.ledger_entries().size() == 1);
  CHECK(summary.text.find("only one") != std::string::npos);
}

TEST_CASE("scripted summary is deterministic across replays") {
  std::vector<Gradient> gradients = {{0, "Add the directive \"alpha\" please."},
                                     {1, "Add the directive \"beta\" please."},
                                     {2, "Add the directive \"alpha\" please."}};
  std::string first;
  for (int round = 0; round < 2; ++round) {
    ScriptedRig rig(scripted::scripted_scenario("keyword"));
    const auto summary = summarize_gradients(rig.ctx, gradients, "task");
    if (round == 0)
      first = summary.text;
    else
      CHECK(summary.text == first);
  }
  // Distinct phrases only, in first-appearance order.
  CHECK(first.find("\"alpha\", \"beta\"") != std::string::npos);
}
