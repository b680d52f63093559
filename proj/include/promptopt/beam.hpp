#pragma once

#include <cstdint>
#include <optional>

#include "promptopt/template.hpp"

namespace promptopt {

// A candidate prompt under optimization, with cumulative rating statistics.
// Statistics accumulate across iterations; that is what lets the UCB score
// trade an entry's observed mean against how much evidence backs it.
struct BeamEntry {
  std::uint64_t id = 0;
  PromptTemplate tpl;
  double rating_sum = 0.0;
  std::uint64_t eval_count = 0;
  int born_iteration = 0;
  std::optional<std::uint64_t> parent_id;
  // Mean over the most recent full training batch; drives optional early stop.
  double last_batch_mean = 0.0;

  double mean() const { return eval_count == 0 ? 0.0 : rating_sum / static_cast<double>(eval_count); }
};

// UCB1: mean + c * sqrt(ln(total_evals) / eval_count). total_evals is the
// summed eval_count over the pool the entry is compared within. Throws
// UnevaluatedEntry when eval_count is 0.
double ucb_score(const BeamEntry& entry, std::uint64_t total_evals, double c);

}  // namespace promptopt
