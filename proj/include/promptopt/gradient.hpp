#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "promptopt/evaluation.hpp"
#include "promptopt/pipeline.hpp"
#include "promptopt/rng.hpp"
#include "promptopt/template.hpp"

namespace promptopt {

// Natural-language critique of one failed generation.
struct Gradient {
  std::int64_t source_row_id = 0;
  std::string text;
};

// One generalized paragraph summarizing all gradients for a prompt.
struct GradientSummary {
  std::string text;
  int source_count = 0;
};

// All rating-0 records with a clean parse, capped at max_failures by a
// uniform seeded subsample. Rating-1 records are never included, and neither
// are failed parses (there is no explanation to critique).
std::vector<EvaluationRecord> select_failures(const std::vector<EvaluationRecord>& records,
                                              std::size_t max_failures, Rng& rng);

// One gradient call per failure. The request carries the task description,
// the current prompt, the rendered input, the model output, the evaluation
// criteria, and the judge's explanation. Throws EmptyGradient when the
// model returns an empty critique.
Gradient compute_gradient(PipelineContext& ctx, const PromptTemplate& tpl,
                          const std::string& task_description, const std::string& criteria,
                          const EvaluationRecord& failure, const std::string& rendered_input);

// One summary call over all gradients, even when there is only one —
// generalization is still wanted for a single critique.
GradientSummary summarize_gradients(PipelineContext& ctx, const std::vector<Gradient>& gradients,
                                    const std::string& task_description);

}  // namespace promptopt
