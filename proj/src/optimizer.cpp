#include "promptopt/optimizer.hpp"

#include <algorithm>
#include <unordered_map>

#include "promptopt/errors.hpp"
#include "promptopt/evaluation.hpp"
#include "promptopt/gradient.hpp"

namespace promptopt {
namespace {

Json optional_id_to_json(const std::optional<std::uint64_t>& id) {
  return id ? Json(*id) : Json(nullptr);
}

std::optional<std::uint64_t> optional_id_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::uint64_t>();
}

Json entry_to_json(const BeamEntry& e) {
  Json j;
  j["id"] = e.id;
  j["prompt"] = e.tpl.text;
  j["rating_sum"] = e.rating_sum;
  j["eval_count"] = e.eval_count;
  j["born_iteration"] = e.born_iteration;
  j["parent_id"] = optional_id_to_json(e.parent_id);
  j["last_batch_mean"] = e.last_batch_mean;
  return j;
}

BeamEntry entry_from_json(const Json& j) {
  BeamEntry e;
  e.id = j.at("id").get<std::uint64_t>();
  e.tpl = parse_template(j.at("prompt").get<std::string>());
  e.rating_sum = j.at("rating_sum").get<double>();
  e.eval_count = j.at("eval_count").get<std::uint64_t>();
  e.born_iteration = j.at("born_iteration").get<int>();
  e.parent_id = optional_id_from_json(j.at("parent_id"));
  e.last_batch_mean = j.at("last_batch_mean").get<double>();
  return e;
}

Json entry_metric_to_json(const EntryMetric& m) {
  Json j;
  j["id"] = m.id;
  j["mean"] = m.mean;
  j["eval_count"] = m.eval_count;
  j["born_iteration"] = m.born_iteration;
  j["batch_mean"] = m.batch_mean;
  return j;
}

EntryMetric entry_metric_from_json(const Json& j) {
  EntryMetric m;
  m.id = j.at("id").get<std::uint64_t>();
  m.mean = j.at("mean").get<double>();
  m.eval_count = j.at("eval_count").get<std::uint64_t>();
  m.born_iteration = j.at("born_iteration").get<int>();
  m.batch_mean = j.at("batch_mean").get<double>();
  return m;
}

EntryMetric metric_of(const BeamEntry& e, double batch_mean = -1.0) {
  return {e.id, e.mean(), e.eval_count, e.born_iteration, batch_mean};
}

struct PurposeDelta {
  CallStats before;
  const Provider& provider;
  explicit PurposeDelta(const Provider& p) : before(p.stats()), provider(p) {}
  std::uint64_t of(Purpose purpose) const {
    return provider.stats().purpose_count(purpose) - before.purpose_count(purpose);
  }
};

}  // namespace

void RunConfig::validate() const {
  if (beam_size < 1) throw ConfigError("run.beam_size must be >= 1");
  if (iterations < 0) throw ConfigError("run.iterations must be >= 0");
  if (rows_per_prompt_per_iter < 1) throw ConfigError("run.rows_per_prompt_per_iter must be >= 1");
  if (candidate_eval_rows < 1) throw ConfigError("run.candidate_eval_rows must be >= 1");
  if (candidates_kept < 1) throw ConfigError("run.candidates_kept must be >= 1");
  if (candidates_kept > beam_size) throw ConfigError("run.candidates_kept must be <= run.beam_size");
  if (max_failures < 1) throw ConfigError("run.max_failures must be >= 1");
  if (edit_max_attempts < 1) throw ConfigError("run.edit_max_attempts must be >= 1");
  if (ucb_exploration_constant < 0.0)
    throw ConfigError("run.ucb_exploration_constant must be >= 0");
}

Json RunConfig::to_json() const {
  Json j;
  j["beam_size"] = beam_size;
  j["iterations"] = iterations;
  j["rows_per_prompt_per_iter"] = rows_per_prompt_per_iter;
  j["candidate_eval_rows"] = candidate_eval_rows;
  j["candidates_kept"] = candidates_kept;
  j["max_failures"] = max_failures;
  j["edit_max_attempts"] = edit_max_attempts;
  j["ucb_exploration_constant"] = ucb_exploration_constant;
  j["seed"] = seed;
  j["summarization_enabled"] = summarization_enabled;
  j["early_stop"] = early_stop;
  j["call_budget"] = call_budget ? Json(*call_budget) : Json(nullptr);
  return j;
}

RunConfig RunConfig::from_json(const Json& j) {
  RunConfig c;
  c.beam_size = j.value("beam_size", c.beam_size);
  c.iterations = j.value("iterations", c.iterations);
  c.rows_per_prompt_per_iter = j.value("rows_per_prompt_per_iter", c.rows_per_prompt_per_iter);
  c.candidate_eval_rows = j.value("candidate_eval_rows", c.candidate_eval_rows);
  c.candidates_kept = j.value("candidates_kept", c.candidates_kept);
  c.max_failures = j.value("max_failures", c.max_failures);
  c.edit_max_attempts = j.value("edit_max_attempts", c.edit_max_attempts);
  c.ucb_exploration_constant = j.value("ucb_exploration_constant", c.ucb_exploration_constant);
  c.seed = j.value("seed", c.seed);
  c.summarization_enabled = j.value("summarization_enabled", c.summarization_enabled);
  c.early_stop = j.value("early_stop", c.early_stop);
  if (j.contains("call_budget") && !j["call_budget"].is_null())
    c.call_budget = j["call_budget"].get<std::uint64_t>();
  return c;
}

Json StageCallCounts::to_json() const {
  Json j;
  j["train_generation"] = train_generation;
  j["train_evaluation"] = train_evaluation;
  j["gradient"] = gradient;
  j["summary"] = summary;
  j["edit"] = edit;
  j["scoring_generation"] = scoring_generation;
  j["scoring_evaluation"] = scoring_evaluation;
  return j;
}

StageCallCounts StageCallCounts::from_json(const Json& j) {
  StageCallCounts c;
  c.train_generation = j.at("train_generation").get<std::uint64_t>();
  c.train_evaluation = j.at("train_evaluation").get<std::uint64_t>();
  c.gradient = j.at("gradient").get<std::uint64_t>();
  c.summary = j.at("summary").get<std::uint64_t>();
  c.edit = j.at("edit").get<std::uint64_t>();
  c.scoring_generation = j.at("scoring_generation").get<std::uint64_t>();
  c.scoring_evaluation = j.at("scoring_evaluation").get<std::uint64_t>();
  return c;
}

Json IterationMetrics::to_json() const {
  Json j;
  j["iteration"] = iteration;
  j["entries"] = Json::array();
  for (const auto& m : entries) j["entries"].push_back(entry_metric_to_json(m));
  j["pool"] = Json::array();
  for (const auto& m : pool) j["pool"].push_back(entry_metric_to_json(m));
  j["beam"] = beam_ids;
  j["calls"] = calls.to_json();
  return j;
}

IterationMetrics IterationMetrics::from_json(const Json& j) {
  IterationMetrics m;
  m.iteration = j.at("iteration").get<int>();
  for (const auto& e : j.at("entries")) m.entries.push_back(entry_metric_from_json(e));
  for (const auto& e : j.at("pool")) m.pool.push_back(entry_metric_from_json(e));
  m.beam_ids = j.at("beam").get<std::vector<std::uint64_t>>();
  m.calls = StageCallCounts::from_json(j.at("calls"));
  return m;
}

bool ranks_before_by_mean(const BeamEntry& a, const BeamEntry& b) {
  if (a.mean() != b.mean()) return a.mean() > b.mean();
  if (a.eval_count != b.eval_count) return a.eval_count > b.eval_count;
  if (a.born_iteration != b.born_iteration) return a.born_iteration < b.born_iteration;
  return a.id < b.id;
}

std::vector<BeamEntry> score_candidates(PipelineContext& ctx,
                                        const std::vector<ProposedCandidate>& candidates,
                                        const Dataset& train, const std::string& criteria,
                                        int eval_rows, Rng& rng, StageCallCounts* counts) {
  if (candidates.empty()) return {};
  const auto rows = sample_rows(train, static_cast<std::size_t>(eval_rows), rng);
  std::vector<BeamEntry> scored;
  scored.reserve(candidates.size());
  for (const ProposedCandidate& pc : candidates) {
    PurposeDelta delta(ctx.provider);
    const auto gens = generate_responses(ctx, pc.candidate.tpl, rows);
    const auto batch = evaluate_generations(ctx, criteria, gens, train);
    if (counts) {
      counts->scoring_generation += delta.of(Purpose::Generation);
      counts->scoring_evaluation += delta.of(Purpose::Evaluation);
    }
    BeamEntry entry;
    entry.id = pc.id;
    entry.tpl = pc.candidate.tpl;
    entry.rating_sum = batch.rating_sum;
    entry.eval_count = batch.records.size();
    entry.born_iteration = pc.candidate.born_iteration;
    entry.parent_id = pc.candidate.parent_id;
    scored.push_back(std::move(entry));
  }
  // Stable: ties keep proposal (creation) order.
  std::stable_sort(scored.begin(), scored.end(),
                   [](const BeamEntry& a, const BeamEntry& b) { return a.mean() > b.mean(); });
  return scored;
}

std::vector<BeamEntry> admit_and_reduce(const std::vector<BeamEntry>& beam,
                                        const std::vector<BeamEntry>& scored, int keep_top,
                                        int beam_size, double exploration_c) {
  std::vector<BeamEntry> pool = beam;
  for (std::size_t i = 0; i < scored.size() && i < static_cast<std::size_t>(keep_top); ++i)
    pool.push_back(scored[i]);
  if (pool.empty()) return {};

  std::uint64_t total_evals = 0;
  for (const auto& e : pool) total_evals += e.eval_count;

  const auto best_it = std::min_element(pool.begin(), pool.end(), ranks_before_by_mean);
  std::vector<BeamEntry> next;
  next.push_back(*best_it);

  std::vector<BeamEntry> rest;
  for (auto it = pool.begin(); it != pool.end(); ++it)
    if (it != best_it) rest.push_back(*it);
  std::sort(rest.begin(), rest.end(), [&](const BeamEntry& a, const BeamEntry& b) {
    const double ua = ucb_score(a, total_evals, exploration_c);
    const double ub = ucb_score(b, total_evals, exploration_c);
    if (ua != ub) return ua > ub;
    if (a.eval_count != b.eval_count) return a.eval_count > b.eval_count;
    if (a.born_iteration != b.born_iteration) return a.born_iteration < b.born_iteration;
    return a.id < b.id;
  });
  for (const auto& e : rest) {
    if (next.size() >= static_cast<std::size_t>(beam_size)) break;
    next.push_back(e);
  }
  return next;
}

double validate_prompt(PipelineContext& ctx, const PromptTemplate& tpl, const Dataset& validation,
                       const std::string& criteria) {
  if (validation.rows.empty()) throw EmptyDataset("validation dataset has no rows");
  const auto gens = generate_responses(ctx, tpl, validation.rows);
  return evaluate_generations(ctx, criteria, gens, validation).mean_rating;
}

OptimizationRun::OptimizationRun(PipelineContext ctx, RunInputs inputs,
                                 std::filesystem::path checkpoint_path)
    : ctx_(std::move(ctx)),
      in_(std::move(inputs)),
      rng_(in_.config.seed),
      checkpoint_path_(std::move(checkpoint_path)) {
  in_.config.validate();
}

void OptimizationRun::restore(const Json& checkpoint) {
  iteration_completed_ = checkpoint.at("iteration_completed").get<int>();
  next_entry_id_ = checkpoint.at("next_entry_id").get<std::uint64_t>();
  stopped_early_ = checkpoint.at("stopped_early").get<bool>();
  rng_.deserialize(checkpoint.at("rng_state").get<std::string>());
  beam_.clear();
  for (const auto& e : checkpoint.at("beam")) beam_.push_back(entry_from_json(e));
  lineage_.clear();
  for (const auto& n : checkpoint.at("lineage")) {
    LineageNode node;
    node.id = n.at("id").get<std::uint64_t>();
    node.parent_id = optional_id_from_json(n.at("parent_id"));
    node.born_iteration = n.at("born_iteration").get<int>();
    node.prompt = n.at("prompt").get<std::string>();
    lineage_.push_back(std::move(node));
  }
  metrics_.clear();
  for (const auto& m : checkpoint.at("metrics")) metrics_.push_back(IterationMetrics::from_json(m));
}

Json OptimizationRun::checkpoint_json() const {
  Json j;
  j["schema_version"] = 1;
  j["iteration_completed"] = iteration_completed_;
  j["next_seq"] = ctx_.provider.stats().total;
  j["next_entry_id"] = next_entry_id_;
  j["stopped_early"] = stopped_early_;
  j["rng_state"] = rng_.serialize();
  j["beam"] = Json::array();
  for (const auto& e : beam_) j["beam"].push_back(entry_to_json(e));
  j["lineage"] = Json::array();
  for (const auto& n : lineage_) {
    Json node;
    node["id"] = n.id;
    node["parent_id"] = optional_id_to_json(n.parent_id);
    node["born_iteration"] = n.born_iteration;
    node["prompt"] = n.prompt;
    j["lineage"].push_back(std::move(node));
  }
  j["metrics"] = Json::array();
  for (const auto& m : metrics_) j["metrics"].push_back(m.to_json());
  j["config"] = in_.config.to_json();
  return j;
}

void OptimizationRun::save_checkpoint() const {
  if (checkpoint_path_.empty()) return;
  write_text_file_atomic(checkpoint_path_, checkpoint_json().dump(2) + "\n");
}

const BeamEntry& OptimizationRun::incumbent() const {
  return *std::min_element(beam_.begin(), beam_.end(), ranks_before_by_mean);
}

void OptimizationRun::bootstrap() {
  // The seed prompt is evaluated before any editing: gradients need failures
  // and UCB needs eval_count >= 1.
  const auto rows =
      sample_rows(in_.train, static_cast<std::size_t>(in_.config.rows_per_prompt_per_iter), rng_);
  IterationMetrics m;
  m.iteration = 0;
  PurposeDelta delta(ctx_.provider);
  const auto gens = generate_responses(ctx_, in_.seed_prompt, rows);
  const auto batch = evaluate_generations(ctx_, in_.criteria, gens, in_.train);
  m.calls.train_generation = delta.of(Purpose::Generation);
  m.calls.train_evaluation = delta.of(Purpose::Evaluation);

  BeamEntry seed;
  seed.id = next_entry_id_++;
  seed.tpl = in_.seed_prompt;
  seed.rating_sum = batch.rating_sum;
  seed.eval_count = batch.records.size();
  seed.born_iteration = 0;
  seed.last_batch_mean = batch.mean_rating;
  beam_.push_back(seed);
  lineage_.push_back({seed.id, std::nullopt, 0, seed.tpl.text});

  m.entries.push_back(metric_of(seed, batch.mean_rating));
  m.beam_ids = {seed.id};
  metrics_.push_back(std::move(m));
  iteration_completed_ = 0;
}

void OptimizationRun::run_iteration(int iteration) {
  IterationMetrics m;
  m.iteration = iteration;
  std::vector<ProposedCandidate> proposals;
  std::vector<double> batch_means(beam_.size(), -1.0);

  for (std::size_t bi = 0; bi < beam_.size(); ++bi) {
    BeamEntry& entry = beam_[bi];
    const auto rows =
        sample_rows(in_.train, static_cast<std::size_t>(in_.config.rows_per_prompt_per_iter), rng_);

    PurposeDelta train_delta(ctx_.provider);
    const auto gens = generate_responses(ctx_, entry.tpl, rows);
    const auto batch = evaluate_generations(ctx_, in_.criteria, gens, in_.train);
    m.calls.train_generation += train_delta.of(Purpose::Generation);
    m.calls.train_evaluation += train_delta.of(Purpose::Evaluation);

    entry.rating_sum += batch.rating_sum;
    entry.eval_count += batch.records.size();
    entry.last_batch_mean = batch.mean_rating;
    batch_means[bi] = batch.mean_rating;

    const auto failures = select_failures(batch.records, static_cast<std::size_t>(in_.config.max_failures), rng_);
    if (failures.empty()) continue;  // a perfect batch cannot be improved; seat forfeited

    std::unordered_map<std::int64_t, const std::string*> rendered;
    for (const auto& g : gens) rendered.emplace(g.row_id, &g.rendered_prompt);

    PurposeDelta grad_delta(ctx_.provider);
    std::vector<Gradient> gradients;
    gradients.reserve(failures.size());
    for (const auto& failure : failures) {
      const auto it = rendered.find(failure.row_id);
      gradients.push_back(compute_gradient(ctx_, entry.tpl, in_.task_description, in_.criteria,
                                           failure, it != rendered.end() ? *it->second : ""));
    }
    m.calls.gradient += grad_delta.of(Purpose::Gradient);

    EditFeedback feedback;
    if (in_.config.summarization_enabled) {
      PurposeDelta summary_delta(ctx_.provider);
      GradientSummary summary = summarize_gradients(ctx_, gradients, in_.task_description);
      m.calls.summary += summary_delta.of(Purpose::Summary);
      feedback.text = summary.text;
      feedback.summary = std::move(summary);
    } else {
      // Ablation arm: the editor sees one uniformly chosen raw gradient.
      const auto pick = rng_.uniform_below(gradients.size());
      feedback.text = gradients[pick].text;
    }

    PurposeDelta edit_delta(ctx_.provider);
    auto candidate = propose_candidate(ctx_, entry, feedback, in_.task_description,
                                       in_.config.edit_max_attempts, iteration);
    m.calls.edit += edit_delta.of(Purpose::Edit);
    if (candidate) proposals.push_back({next_entry_id_++, std::move(*candidate)});
  }

  for (std::size_t bi = 0; bi < beam_.size(); ++bi)
    m.entries.push_back(metric_of(beam_[bi], batch_means[bi]));

  const auto scored = score_candidates(ctx_, proposals, in_.train, in_.criteria,
                                       in_.config.candidate_eval_rows, rng_, &m.calls);

  for (std::size_t i = 0; i < scored.size() && i < static_cast<std::size_t>(in_.config.candidates_kept); ++i)
    lineage_.push_back({scored[i].id, scored[i].parent_id, scored[i].born_iteration, scored[i].tpl.text});

  m.pool = [&] {
    std::vector<EntryMetric> pool;
    for (const auto& e : beam_) pool.push_back(metric_of(e));
    for (std::size_t i = 0; i < scored.size() && i < static_cast<std::size_t>(in_.config.candidates_kept); ++i)
      pool.push_back(metric_of(scored[i]));
    return pool;
  }();

  beam_ = admit_and_reduce(beam_, scored, in_.config.candidates_kept, in_.config.beam_size,
                           in_.config.ucb_exploration_constant);
  for (const auto& e : beam_) m.beam_ids.push_back(e.id);
  metrics_.push_back(std::move(m));
}

OptimizationResult OptimizationRun::build_result() const {
  OptimizationResult result;
  result.best = incumbent();
  result.final_beam = beam_;
  result.iteration_metrics = metrics_;
  result.lineage = lineage_;
  result.iterations_completed = iteration_completed_;
  result.stopped_early = stopped_early_;
  return result;
}

OptimizationResult OptimizationRun::run() {
  if (iteration_completed_ < 0) {
    save_checkpoint();  // pre-bootstrap marker so even early aborts can resume
    bootstrap();
    save_checkpoint();
  }
  for (int k = iteration_completed_ + 1; k <= in_.config.iterations && !stopped_early_; ++k) {
    run_iteration(k);
    iteration_completed_ = k;
    if (in_.config.early_stop && incumbent().last_batch_mean == 1.0) stopped_early_ = true;
    save_checkpoint();
  }
  return build_result();
}

}  // namespace promptopt
