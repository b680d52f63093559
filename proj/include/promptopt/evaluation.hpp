#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "promptopt/dataset.hpp"
#include "promptopt/pipeline.hpp"
#include "promptopt/template.hpp"

namespace promptopt {

struct GenerationRecord {
  std::int64_t row_id = 0;
  std::string rendered_prompt;
  std::string output;
};

// One judged generation. failed_parse means the judge never produced a
// rating line even after the retry; such records count as rating 0 and stay
// in the denominator, so mean ratings remain comparable across prompts.
struct EvaluationRecord {
  std::int64_t row_id = 0;
  std::string output;
  std::string explanation;
  int rating = 0;  // 0 or 1
  std::optional<std::string> expected;
  bool failed_parse = false;
};

struct ParsedRating {
  std::string explanation;
  int rating = 0;
};

struct EvaluationBatch {
  std::vector<EvaluationRecord> records;
  int rating_sum = 0;  // exact integer sum; mean_rating = rating_sum / |records|
  double mean_rating = 0.0;
};

// Renders the template against each row and asks the generation model for an
// output. One record per row, order preserving.
std::vector<GenerationRecord> generate_responses(PipelineContext& ctx, const PromptTemplate& tpl,
                                                 const std::vector<DatasetRow>& rows);

// Judge message layout, in this order: the evaluation criteria verbatim, the
// generation input, the model output, the expected answer when present, and
// the format instruction asking for an explanation first and a final
// "RATING: 0|1" line.
CompletionRequest build_evaluation_request(const Routing& routing, const std::string& criteria,
                                           const GenerationRecord& generation,
                                           const std::optional<std::string>& expected);

// Accepted rating grammar, applied per line and case-insensitively:
//   ws* "RATING" ws* (":" | "=") ws* ("0" | "1") ws*
// The last matching line wins; everything before it, trimmed, is the
// explanation. No matching line -> nullopt (a parse failure).
std::optional<ParsedRating> parse_rating(std::string_view judge_text);

// Judges every generation. A parse failure triggers exactly one re-ask with
// an appended format reminder; a second failure yields failed_parse = true.
EvaluationBatch evaluate_generations(PipelineContext& ctx, const std::string& criteria,
                                     const std::vector<GenerationRecord>& generations,
                                     const Dataset& dataset);

}  // namespace promptopt
