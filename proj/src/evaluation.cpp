#include "promptopt/evaluation.hpp"

#include <cctype>

#include "promptopt/errors.hpp"
#include "promptopt/prompts.hpp"

namespace promptopt {
namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (is_ws(s.front()) || s.front() == '\n')) s.remove_prefix(1);
  while (!s.empty() && (is_ws(s.back()) || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

// Matches one line against the rating grammar; returns the digit or -1.
int match_rating_line(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && is_ws(line[i])) ++i;
  static constexpr std::string_view word = "rating";
  for (char expected : word) {
    if (i >= line.size() || std::tolower(static_cast<unsigned char>(line[i])) != expected) return -1;
    ++i;
  }
  while (i < line.size() && is_ws(line[i])) ++i;
  if (i >= line.size() || (line[i] != ':' && line[i] != '=')) return -1;
  ++i;
  while (i < line.size() && is_ws(line[i])) ++i;
  if (i >= line.size() || (line[i] != '0' && line[i] != '1')) return -1;
  const int rating = line[i] - '0';
  ++i;
  while (i < line.size() && is_ws(line[i])) ++i;
  return i == line.size() ? rating : -1;
}

std::string annotate_row(const std::exception& e, std::int64_t row_id) {
  return "row " + std::to_string(row_id) + ": " + e.what();
}

}  // namespace

std::vector<GenerationRecord> generate_responses(PipelineContext& ctx, const PromptTemplate& tpl,
                                                 const std::vector<DatasetRow>& rows) {
  std::vector<GenerationRecord> records;
  records.reserve(rows.size());
  for (const DatasetRow& row : rows) {
    GenerationRecord rec;
    rec.row_id = row.row_id;
    rec.rendered_prompt = render_prompt(tpl, row);
    try {
      rec.output = ctx.provider.complete(ctx.routing.make_request(Purpose::Generation, rec.rendered_prompt)).text;
    } catch (const BudgetExceeded&) {
      throw;
    } catch (const TransportError& e) {
      throw TransportError(annotate_row(e, row.row_id));
    } catch (const BackendError& e) {
      throw BackendError(e.status(), annotate_row(e, row.row_id));
    }
    records.push_back(std::move(rec));
  }
  return records;
}

CompletionRequest build_evaluation_request(const Routing& routing, const std::string& criteria,
                                           const GenerationRecord& generation,
                                           const std::optional<std::string>& expected) {
  using namespace prompts;
  std::string msg =
      "You are a strict evaluator. Judge the model output below against the evaluation "
      "criteria.\n\nEvaluation criteria:\n";
  msg += criteria;
  msg += "\n\n";
  msg += wrap_block(kInputOpen, generation.rendered_prompt, kInputClose);
  msg += "\n\n";
  msg += wrap_block(kOutputOpen, generation.output, kOutputClose);
  if (expected) {
    msg += "\n\n";
    msg += wrap_block(kExpectedOpen, *expected, kExpectedClose);
  }
  msg +=
      "\n\nFirst write a short explanation of your judgment. Then end with a final line "
      "containing exactly \"RATING: 1\" if the output satisfies the criteria, or \"RATING: 0\" "
      "if it does not.";
  return routing.make_request(Purpose::Evaluation, std::move(msg));
}

std::optional<ParsedRating> parse_rating(std::string_view judge_text) {
  std::size_t line_start = 0;
  std::size_t best_line_start = std::string_view::npos;
  int best_rating = -1;
  while (line_start <= judge_text.size()) {
    std::size_t line_end = judge_text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = judge_text.size();
    const int rating = match_rating_line(judge_text.substr(line_start, line_end - line_start));
    if (rating >= 0) {
      best_line_start = line_start;
      best_rating = rating;
    }
    if (line_end == judge_text.size()) break;
    line_start = line_end + 1;
  }
  if (best_rating < 0) return std::nullopt;
  ParsedRating parsed;
  parsed.explanation = std::string(trim(judge_text.substr(0, best_line_start)));
  parsed.rating = best_rating;
  return parsed;
}

EvaluationBatch evaluate_generations(PipelineContext& ctx, const std::string& criteria,
                                     const std::vector<GenerationRecord>& generations,
                                     const Dataset& dataset) {
  if (generations.empty()) throw EmptyBatch("evaluate_generations: no generations");
  EvaluationBatch batch;
  batch.records.reserve(generations.size());
  for (const GenerationRecord& gen : generations) {
    std::optional<std::string> expected;
    if (const DatasetRow* row = dataset.find_row(gen.row_id)) expected = dataset.expected_for(*row);

    CompletionRequest req = build_evaluation_request(ctx.routing, criteria, gen, expected);
    std::string judge_text = ctx.provider.complete(req).text;
    std::optional<ParsedRating> parsed = parse_rating(judge_text);
    if (!parsed) {
      CompletionRequest retry = req;
      retry.messages.back().content += "\n\n";
      retry.messages.back().content += prompts::kRatingReminder;
      judge_text = ctx.provider.complete(retry).text;
      parsed = parse_rating(judge_text);
    }

    EvaluationRecord rec;
    rec.row_id = gen.row_id;
    rec.output = gen.output;
    rec.expected = std::move(expected);
    if (parsed) {
      rec.explanation = std::move(parsed->explanation);
      rec.rating = parsed->rating;
    } else {
      rec.explanation = judge_text;  // keep the raw text for the audit trail
      rec.rating = 0;
      rec.failed_parse = true;
    }
    batch.rating_sum += rec.rating;
    batch.records.push_back(std::move(rec));
  }
  batch.mean_rating = static_cast<double>(batch.rating_sum) / static_cast<double>(batch.records.size());
  return batch;
}

}  // namespace promptopt
