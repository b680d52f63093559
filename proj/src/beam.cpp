#include "promptopt/beam.hpp"

#include <cmath>

#include "promptopt/errors.hpp"

namespace promptopt {

double ucb_score(const BeamEntry& entry, std::uint64_t total_evals, double c) {
  if (entry.eval_count == 0)
    throw UnevaluatedEntry("ucb_score: entry " + std::to_string(entry.id) +
                           " has no evaluations");
  if (total_evals < entry.eval_count)
    throw Error("ucb_score: total_evals below the entry's own eval_count");
  return entry.mean() + c * std::sqrt(std::log(static_cast<double>(total_evals)) /
                                      static_cast<double>(entry.eval_count));
}

}  // namespace promptopt
