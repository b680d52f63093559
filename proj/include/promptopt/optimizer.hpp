#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "promptopt/beam.hpp"
#include "promptopt/dataset.hpp"
#include "promptopt/editor.hpp"
#include "promptopt/jsonio.hpp"
#include "promptopt/pipeline.hpp"
#include "promptopt/rng.hpp"

namespace promptopt {

struct RunConfig {
  int beam_size = 3;
  int iterations = 10;
  int rows_per_prompt_per_iter = 10;
  int candidate_eval_rows = 5;
  int candidates_kept = 2;
  int max_failures = 5;
  int edit_max_attempts = 3;
  double ucb_exploration_constant = 1.4142135623730951;  // sqrt(2)
  std::uint64_t seed = 0;
  bool summarization_enabled = true;
  bool early_stop = false;
  std::optional<std::uint64_t> call_budget;

  void validate() const;  // throws ConfigError
  Json to_json() const;
  static RunConfig from_json(const Json& j);
};

// Provider calls attributed to pipeline stages within one iteration.
struct StageCallCounts {
  std::uint64_t train_generation = 0;
  std::uint64_t train_evaluation = 0;
  std::uint64_t gradient = 0;
  std::uint64_t summary = 0;
  std::uint64_t edit = 0;
  std::uint64_t scoring_generation = 0;
  std::uint64_t scoring_evaluation = 0;

  Json to_json() const;
  static StageCallCounts from_json(const Json& j);
};

struct EntryMetric {
  std::uint64_t id = 0;
  double mean = 0.0;
  std::uint64_t eval_count = 0;
  int born_iteration = 0;
  double batch_mean = -1.0;  // mean over this iteration's training batch; -1 if none
};

struct IterationMetrics {
  int iteration = 0;
  std::vector<EntryMetric> entries;  // beam entries after this iteration's stat update
  std::vector<EntryMetric> pool;     // beam plus admitted candidates, at reduction time
  std::vector<std::uint64_t> beam_ids;  // the beam that leaves this iteration
  StageCallCounts calls;

  Json to_json() const;
  static IterationMetrics from_json(const Json& j);
};

struct LineageNode {
  std::uint64_t id = 0;
  std::optional<std::uint64_t> parent_id;
  int born_iteration = 0;
  std::string prompt;
};

struct OptimizationResult {
  BeamEntry best;
  std::vector<BeamEntry> final_beam;
  std::vector<IterationMetrics> iteration_metrics;
  std::vector<LineageNode> lineage;
  int iterations_completed = 0;
  bool stopped_early = false;
};

// Everything a run needs besides the provider.
struct RunInputs {
  RunConfig config;
  Dataset train;
  PromptTemplate seed_prompt;
  std::string task_description;
  std::string criteria;
};

struct ProposedCandidate {
  std::uint64_t id = 0;
  CandidatePrompt candidate;
};

// Ranking used for incumbent selection and final extraction: higher mean
// first, then more evidence, then older, then smaller id.
bool ranks_before_by_mean(const BeamEntry& a, const BeamEntry& b);

// Scores every candidate on one shared sample of eval_rows rows (shared so
// the means are comparable) and returns fresh BeamEntry statistics sorted by
// mean descending, ties broken by proposal order.
std::vector<BeamEntry> score_candidates(PipelineContext& ctx,
                                        const std::vector<ProposedCandidate>& candidates,
                                        const Dataset& train, const std::string& criteria,
                                        int eval_rows, Rng& rng, StageCallCounts* counts);

// Admits the top keep_top scored candidates into the pool, force-retains the
// pool entry with the highest empirical mean, then fills the remaining seats
// by descending UCB over the pool. Plain UCB alone does not guarantee the
// best-performing prompt survives; the forced retention makes that an
// invariant.
std::vector<BeamEntry> admit_and_reduce(const std::vector<BeamEntry>& beam,
                                        const std::vector<BeamEntry>& scored, int keep_top,
                                        int beam_size, double exploration_c);

// Mean rating of the template over every validation row. No statistics are
// written back. Throws EmptyDataset when validation has no rows.
double validate_prompt(PipelineContext& ctx, const PromptTemplate& tpl, const Dataset& validation,
                       const std::string& criteria);

// The beam-search training loop. Iteration 0 bootstraps the seed prompt's
// statistics; each subsequent iteration evaluates every beam entry on a
// fresh sample, turns failures into gradients, summarizes (or picks one raw
// gradient in no-summarization mode), proposes candidates, and reduces the
// beam. A checkpoint is written after every completed iteration.
class OptimizationRun {
 public:
  OptimizationRun(PipelineContext ctx, RunInputs inputs,
                  std::filesystem::path checkpoint_path = {});

  // Restores state saved by checkpoint_json(); the caller is responsible for
  // rolling the ledger and cache back to the checkpoint's next_seq first.
  void restore(const Json& checkpoint);

  OptimizationResult run();

  Json checkpoint_json() const;

  const std::vector<BeamEntry>& beam() const { return beam_; }
  int iteration_completed() const { return iteration_completed_; }

 private:
  void bootstrap();
  void run_iteration(int iteration);
  void save_checkpoint() const;
  const BeamEntry& incumbent() const;
  OptimizationResult build_result() const;

  PipelineContext ctx_;
  RunInputs in_;
  Rng rng_;
  std::vector<BeamEntry> beam_;
  std::vector<LineageNode> lineage_;
  std::vector<IterationMetrics> metrics_;
  std::uint64_t next_entry_id_ = 0;
  int iteration_completed_ = -1;  // -1 nothing, 0 bootstrap done, k iteration k done
  bool stopped_early_ = false;
  std::filesystem::path checkpoint_path_;
};

}  // namespace promptopt
