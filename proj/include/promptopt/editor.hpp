#pragma once

#include <optional>
#include <string>

#include "promptopt/beam.hpp"
#include "promptopt/gradient.hpp"
#include "promptopt/pipeline.hpp"

namespace promptopt {

struct CandidatePrompt {
  PromptTemplate tpl;
  std::uint64_t parent_id = 0;
  int born_iteration = 0;
  std::optional<GradientSummary> summary_used;  // empty in no-summarization mode
};

// What the editor is asked to address: the gradient summary, or a single raw
// gradient in no-summarization mode.
struct EditFeedback {
  std::string text;
  std::optional<GradientSummary> summary;
};

// Strips a surrounding ``` fence, if any, and trims outer whitespace.
// Editors routinely fence their replies; without stripping, slot checks
// would run against fence text.
std::string clean_edit_response(const std::string& response);

// Asks the edit model for a full replacement prompt. The request carries the
// current prompt, the feedback, the task description, and an instruction to
// keep every {slot} verbatim. A response that drops a parent slot (or is
// empty) triggers a retry with the missing slots listed, up to max_attempts
// total calls; after that the parent forfeits its candidate for this
// iteration and nullopt is returned.
std::optional<CandidatePrompt> propose_candidate(PipelineContext& ctx, const BeamEntry& parent,
                                                 const EditFeedback& feedback,
                                                 const std::string& task_description,
                                                 int max_attempts, int born_iteration);

}  // namespace promptopt
