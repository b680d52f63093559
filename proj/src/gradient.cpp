#include "promptopt/gradient.hpp"

#include <algorithm>

#include "promptopt/errors.hpp"
#include "promptopt/prompts.hpp"

namespace promptopt {

std::vector<EvaluationRecord> select_failures(const std::vector<EvaluationRecord>& records,
                                              std::size_t max_failures, Rng& rng) {
  std::vector<EvaluationRecord> zeros;
  for (const auto& rec : records)
    if (rec.rating == 0 && !rec.failed_parse) zeros.push_back(rec);
  if (zeros.size() <= max_failures) return zeros;
  auto idx = rng.sample_indices(zeros.size(), max_failures);
  std::sort(idx.begin(), idx.end());  // keep record order in the subsample
  std::vector<EvaluationRecord> out;
  out.reserve(max_failures);
  for (std::size_t i : idx) out.push_back(zeros[i]);
  return out;
}

Gradient compute_gradient(PipelineContext& ctx, const PromptTemplate& tpl,
                          const std::string& task_description, const std::string& criteria,
                          const EvaluationRecord& failure, const std::string& rendered_input) {
  using namespace prompts;
  std::string msg =
      "You are improving a prompt. Analyze the failed example below and provide actionable "
      "advice for improving the prompt to address the deficiencies noted in the rating "
      "explanation.\n\n";
  msg += wrap_block(kTaskOpen, task_description, kTaskClose);
  msg += "\n\n";
  msg += wrap_block(kPromptOpen, tpl.text, kPromptClose);
  msg += "\n\n";
  msg += wrap_block(kInputOpen, rendered_input, kInputClose);
  msg += "\n\n";
  msg += wrap_block(kOutputOpen, failure.output, kOutputClose);
  msg += "\n\n";
  msg += wrap_block(kCriteriaOpen, criteria, kCriteriaClose);
  msg += "\n\n";
  msg += wrap_block(kExplanationOpen, failure.explanation, kExplanationClose);
  msg += "\n\nRespond with a concise critique and concrete suggestions for editing the prompt.";

  const std::string text =
      ctx.provider.complete(ctx.routing.make_request(Purpose::Gradient, std::move(msg))).text;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw EmptyGradient("gradient model returned an empty critique for row " +
                        std::to_string(failure.row_id));
  return {failure.row_id, text};
}

GradientSummary summarize_gradients(PipelineContext& ctx, const std::vector<Gradient>& gradients,
                                    const std::string& task_description) {
  using namespace prompts;
  std::string body;
  for (std::size_t i = 0; i < gradients.size(); ++i) {
    body += std::to_string(i + 1);
    body += ". ";
    body += gradients[i].text;
    if (i + 1 < gradients.size()) body += '\n';
  }
  std::string msg =
      "Summarize the prompt critiques below into one general paragraph that could apply to the "
      "dataset as a whole, taking the task into consideration.\n\n";
  msg += wrap_block(kTaskOpen, task_description, kTaskClose);
  msg += "\n\n";
  msg += wrap_block(kGradientsOpen, body, kGradientsClose);
  msg += "\n\nRespond with a single paragraph.";

  const std::string text =
      ctx.provider.complete(ctx.routing.make_request(Purpose::Summary, std::move(msg))).text;
  return {text, static_cast<int>(gradients.size())};
}

}  // namespace promptopt
