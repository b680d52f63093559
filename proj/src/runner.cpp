#include "promptopt/runner.hpp"

#include <fstream>
#include <set>

#include "promptopt/errors.hpp"
#include "promptopt/http_backend.hpp"
#include "promptopt/scripted.hpp"

namespace promptopt {
namespace {

void clear_fresh_run_state(const RunPaths& paths) {
  std::error_code ec;
  std::filesystem::remove(paths.ledger, ec);
  std::filesystem::remove(paths.checkpoint, ec);
  std::filesystem::remove(paths.report_json, ec);
  std::filesystem::remove(paths.report_md, ec);
  std::filesystem::remove_all(paths.cache_dir, ec);
}

Json config_compat_view(Json config) {
  // The budget caps one invocation, it is not part of the search state; a
  // resumed run may lift or change it.
  config.erase("call_budget");
  return config;
}

}  // namespace

RunPaths RunPaths::under(const std::filesystem::path& out_dir) {
  RunPaths p;
  p.out_dir = out_dir;
  p.ledger = out_dir / "ledger.jsonl";
  p.checkpoint = out_dir / "checkpoint.json";
  p.cache_dir = out_dir / "cache";
  p.report_json = out_dir / "report.json";
  p.report_md = out_dir / "report.md";
  return p;
}

void apply_overrides(RunManifest& manifest, const RunOverrides& o) {
  if (o.seed) manifest.run.seed = *o.seed;
  if (o.iterations) manifest.run.iterations = *o.iterations;
  if (o.no_summarization) manifest.run.summarization_enabled = false;
  if (o.budget) manifest.run.call_budget = *o.budget;
  if (o.output_dir) manifest.output_dir = *o.output_dir;
  if (o.provider) {
    const std::string& spec = *o.provider;
    if (spec == "http") {
      manifest.provider.backend = "http";
    } else if (spec.rfind("scripted:", 0) == 0) {
      manifest.provider.backend = "scripted";
      manifest.provider.scenario = spec.substr(9);
      scripted::scripted_scenario(manifest.provider.scenario);  // validate
    } else {
      throw ConfigError("--provider must be 'http' or 'scripted:<scenario>', got '" + spec + "'");
    }
  }
  manifest.run.validate();
}

std::unique_ptr<Backend> build_backend(const ProviderSpec& spec) {
  if (spec.backend == "scripted")
    return std::make_unique<ScriptedBackend>(scripted::scripted_scenario(spec.scenario),
                                             spec.scenario);
  RetryPolicy retry;
  retry.max_attempts = spec.retry_max_attempts;
  retry.base_delay = std::chrono::milliseconds(spec.retry_base_delay_ms);
  return std::make_unique<HttpBackend>(spec.base_url, spec.api_key_env, retry);
}

CallStats rollback_run_state(const std::filesystem::path& ledger_path, ResponseCache& cache,
                             std::uint64_t next_seq) {
  CallStats stats;
  if (!std::filesystem::exists(ledger_path)) {
    if (next_seq != 0)
      throw ConfigError("resume: checkpoint expects " + std::to_string(next_seq) +
                        " ledger lines but the ledger is missing");
    return stats;
  }

  std::ifstream in(ledger_path, std::ios::binary);
  std::string line;
  std::string kept_raw;
  std::set<std::string> kept_keys;
  std::set<std::string> dropped_keys;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("resume: malformed ledger line: " + std::string(e.what()));
    }
    const auto seq = j.at("seq").get<std::uint64_t>();
    const auto key = j.at("cache_key").get<std::string>();
    if (seq < next_seq) {
      kept_raw += line;  // original bytes, never reserialized
      kept_raw += '\n';
      kept_keys.insert(key);
      ++stats.total;
      if (j.at("from_cache").get<bool>()) ++stats.cache_hits;
      ++stats.by_purpose[static_cast<int>(purpose_from_string(j.at("purpose_tag").get<std::string>()))];
    } else {
      dropped_keys.insert(key);
    }
  }
  if (stats.total != next_seq)
    throw ConfigError("resume: ledger has " + std::to_string(stats.total) +
                      " lines before seq " + std::to_string(next_seq) + ", expected " +
                      std::to_string(next_seq));
  for (const auto& key : dropped_keys)
    if (kept_keys.count(key) == 0) cache.remove(key);
  write_text_file_atomic(ledger_path, kept_raw);
  return stats;
}

RunOutcome execute_run(RunManifest manifest, const RunOverrides& overrides) {
  apply_overrides(manifest, overrides);
  const PromptTemplate seed = parse_template(manifest.seed_prompt_text);
  LoadedDatasets data = load_datasets(manifest);  // full pre-flight, no provider yet

  const RunPaths paths = RunPaths::under(manifest.output_dir);
  std::filesystem::create_directories(paths.out_dir);

  std::optional<Json> checkpoint;
  if (overrides.resume_checkpoint) {
    try {
      checkpoint = Json::parse(read_text_file(*overrides.resume_checkpoint));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("resume: " + overrides.resume_checkpoint->string() + ": " + e.what());
    }
    const Json saved = config_compat_view(checkpoint->at("config"));
    const Json current = config_compat_view(manifest.run.to_json());
    if (saved != current)
      throw ConfigError("resume: checkpoint config does not match the manifest; diff the "
                        "checkpoint's 'config' block against the manifest run settings");
  } else {
    clear_fresh_run_state(paths);
  }

  auto cache = std::make_unique<ResponseCache>(paths.cache_dir);
  CallStats restored;
  if (checkpoint)
    restored = rollback_run_state(paths.ledger, *cache,
                                  checkpoint->at("next_seq").get<std::uint64_t>());

  LedgerWriter ledger(paths.ledger);
  Provider provider(build_backend(manifest.provider), std::move(cache), &ledger,
                    manifest.run.call_budget);
  if (checkpoint) provider.restore_counters(restored);

  PipelineContext ctx{provider, manifest.provider.routing};
  RunInputs inputs{manifest.run, data.train, seed, manifest.task_description,
                   manifest.evaluation_criteria};
  OptimizationRun run(ctx, std::move(inputs), paths.checkpoint);
  if (checkpoint) run.restore(*checkpoint);

  RunOutcome outcome;
  outcome.paths = paths;
  outcome.result = run.run();

  ValidationCalls validation_calls;
  if (!overrides.skip_validation && data.validation) {
    const CallStats before = provider.stats();
    outcome.initial_validation =
        validate_prompt(ctx, seed, *data.validation, manifest.evaluation_criteria);
    outcome.final_validation = validate_prompt(ctx, outcome.result.best.tpl, *data.validation,
                                               manifest.evaluation_criteria);
    const CallStats after = provider.stats();
    validation_calls.generation =
        after.purpose_count(Purpose::Generation) - before.purpose_count(Purpose::Generation);
    validation_calls.evaluation =
        after.purpose_count(Purpose::Evaluation) - before.purpose_count(Purpose::Evaluation);
  }

  outcome.stats = provider.stats();
  ReportInputs report{outcome.result,          manifest.seed_prompt_text, outcome.initial_validation,
                      outcome.final_validation, outcome.stats,            validation_calls,
                      manifest.echo_json()};
  emit_report(report, paths.report_json, paths.report_md);
  return outcome;
}

double execute_validate(RunManifest manifest, const std::string& prompt_text,
                        const RunOverrides& overrides, Json* record_out) {
  apply_overrides(manifest, overrides);
  const PromptTemplate prompt = parse_template(prompt_text);
  LoadedDatasets data = load_datasets(manifest);
  if (!data.validation) throw ConfigError("manifest provides no validation dataset");
  for (const auto& slot : prompt.slots)
    if (!data.validation->has_column(slot))
      throw SchemaError("prompt slot '{" + slot + "}' is not a dataset column");

  const RunPaths paths = RunPaths::under(manifest.output_dir);
  std::filesystem::create_directories(paths.out_dir);
  const auto ledger_path = paths.out_dir / "validation_ledger.jsonl";
  std::error_code ec;
  std::filesystem::remove(ledger_path, ec);

  LedgerWriter ledger(ledger_path);
  Provider provider(build_backend(manifest.provider), std::make_unique<ResponseCache>(paths.cache_dir),
                    &ledger, manifest.run.call_budget);
  PipelineContext ctx{provider, manifest.provider.routing};
  const double mean =
      validate_prompt(ctx, prompt, *data.validation, manifest.evaluation_criteria);

  Json record;
  record["schema_version"] = 1;
  record["prompt"] = prompt_text;
  record["mean_rating"] = mean;
  record["rows"] = data.validation->rows.size();
  const CallStats stats = provider.stats();
  record["calls"] = {{"generation", stats.purpose_count(Purpose::Generation)},
                     {"evaluation", stats.purpose_count(Purpose::Evaluation)}};
  write_text_file_atomic(paths.out_dir / "validation.json", record.dump(2) + "\n");
  if (record_out) *record_out = std::move(record);
  return mean;
}

}  // namespace promptopt
