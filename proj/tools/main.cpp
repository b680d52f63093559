#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "promptopt/errors.hpp"
#include "promptopt/jsonio.hpp"
#include "promptopt/ledger.hpp"
#include "promptopt/runner.hpp"
#include "promptopt/scripted.hpp"

namespace {

using namespace promptopt;

// Exit codes: 0 success, 2 config error, 3 provider error, 4 budget exceeded.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ProviderError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_run(const std::string& manifest_path, const RunOverrides& overrides) {
  return guarded([&] {
    RunOutcome outcome = execute_run(load_manifest(manifest_path), overrides);
    std::printf("iterations completed: %d%s\n", outcome.result.iterations_completed,
                outcome.result.stopped_early ? " (stopped early)" : "");
    std::printf("best prompt: id %llu, train mean %.3f over %llu evaluations\n",
                static_cast<unsigned long long>(outcome.result.best.id), outcome.result.best.mean(),
                static_cast<unsigned long long>(outcome.result.best.eval_count));
    if (outcome.initial_validation && outcome.final_validation)
      std::printf("validation: seed %.3f -> best %.3f\n", *outcome.initial_validation,
                  *outcome.final_validation);
    std::printf("provider calls: %llu (cache hits %llu)\n",
                static_cast<unsigned long long>(outcome.stats.total),
                static_cast<unsigned long long>(outcome.stats.cache_hits));
    std::printf("report: %s\n", outcome.paths.report_json.string().c_str());
    return 0;
  });
}

int cmd_validate(const std::string& prompt_path, const std::string& manifest_path,
                 const RunOverrides& overrides) {
  return guarded([&] {
    const std::string prompt_text = read_text_file(prompt_path);
    const double mean = execute_validate(load_manifest(manifest_path), prompt_text, overrides);
    std::printf("%.3f\n", mean);
    return 0;
  });
}

int cmd_inspect(const std::string& dir) {
  return guarded([&] {
    const RunPaths paths = RunPaths::under(dir);
    if (!std::filesystem::exists(paths.report_json))
      throw ConfigError("no report.json under " + dir);
    if (!std::filesystem::exists(paths.ledger)) throw ConfigError("no ledger.jsonl under " + dir);
    const Json report = Json::parse(read_text_file(paths.report_json));
    const auto entries = read_ledger(paths.ledger);

    std::uint64_t hits = 0;
    std::map<std::string, std::uint64_t> by_purpose;
    for (const auto& e : entries) {
      if (e.from_cache) ++hits;
      ++by_purpose[e.purpose];
    }
    std::printf("run directory: %s\n", dir.c_str());
    std::printf("iterations completed: %d\n", report.at("iterations_completed").get<int>());
    std::printf("ledger calls: %zu (cache hits %llu)\n", entries.size(),
                static_cast<unsigned long long>(hits));
    for (const auto& [purpose, n] : by_purpose)
      std::printf("  %-10s %llu\n", purpose.c_str(), static_cast<unsigned long long>(n));
    const std::string best = report.at("best_prompt").get<std::string>();
    const std::string preview = best.size() > 400 ? best.substr(0, 400) + "..." : best;
    std::printf("best prompt (%zu chars):\n%s\n", best.size(), preview.c_str());

    const bool ok = report.at("total_calls").get<std::uint64_t>() == entries.size() &&
                    report.at("cache_hits").get<std::uint64_t>() == hits;
    std::printf("report/ledger reconciliation: %s\n", ok ? "OK" : "MISMATCH");
    return ok ? 0 : 1;
  });
}

int cmd_scaffold(const std::string& dir, const std::string& scenario, int train_rows, int val_rows,
                 std::uint64_t seed) {
  return guarded([&] {
    scripted::scripted_scenario(scenario);  // validate the name before writing anything
    const std::filesystem::path base(dir);
    std::filesystem::create_directories(base);
    // Validation indices start at 100 so row-specific phrases never overlap
    // with the train rows.
    scripted::write_scenario_dataset(base / "train.jsonl", train_rows, 0);
    scripted::write_scenario_dataset(base / "val.jsonl", val_rows, 100);

    Json manifest;
    manifest["task_description"] =
        "Answer each question with its expected answer token. The questions are synthetic rows "
        "used for offline engine runs.";
    manifest["evaluation_criteria"] =
        "Does the output exactly match the expected answer? Give it a 1 if it matches, "
        "otherwise give it a 0.";
    manifest["seed_prompt"] = "Answer the question: {question}";
    manifest["dataset"] = {{"train_path", "train.jsonl"},
                           {"validation_path", "val.jsonl"},
                           {"format", "jsonl"},
                           {"expected_column", "expected"}};
    manifest["provider"] = {{"backend", "scripted"}, {"scenario", scenario}};
    manifest["run"] = {{"seed", seed}};
    manifest["output_dir"] = "out";
    write_text_file_atomic(base / "manifest.json", manifest.dump(2) + "\n");
    std::printf("wrote %s\n", (base / "manifest.json").string().c_str());
    std::printf("run it with: promptopt run %s\n", (base / "manifest.json").string().c_str());
    return 0;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automatic prompt optimization: textual gradients, gradient summarization, and "
               "UCB beam search over candidate prompts"};
  app.require_subcommand(1);

  std::string manifest_path;
  std::string prompt_path;
  std::string dir;
  RunOverrides overrides;
  std::uint64_t seed_flag = 0;
  int iterations_flag = 0;
  std::uint64_t budget_flag = 0;
  std::string provider_flag;
  std::string resume_flag;
  std::string out_flag;

  auto* run = app.add_subcommand("run", "Optimize the manifest's seed prompt");
  run->add_option("manifest", manifest_path, "run manifest (JSON)")->required();
  auto* seed_opt = run->add_option("--seed", seed_flag, "override the run seed");
  auto* iter_opt = run->add_option("--iterations", iterations_flag, "override iteration count");
  run->add_flag("--no-summarization", overrides.no_summarization,
                "ablation: feed the editor one raw gradient instead of a summary");
  auto* provider_opt =
      run->add_option("--provider", provider_flag, "override backend: http or scripted:<scenario>");
  auto* budget_opt = run->add_option("--budget", budget_flag, "abort after this many provider calls");
  auto* resume_opt = run->add_option("--resume", resume_flag, "resume from a checkpoint file");
  auto* out_opt = run->add_option("--out", out_flag, "override the output directory");
  run->add_flag("--skip-validation", overrides.skip_validation,
                "skip the final seed/best validation passes");

  auto* validate = app.add_subcommand("validate", "Rate one prompt over the validation set");
  validate->add_option("prompt", prompt_path, "file containing the prompt text")->required();
  validate->add_option("manifest", manifest_path, "run manifest (JSON)")->required();
  auto* vprovider_opt =
      validate->add_option("--provider", provider_flag, "override backend: http or scripted:<scenario>");
  auto* vseed_opt = validate->add_option("--seed", seed_flag, "override the run seed (split only)");
  auto* vout_opt = validate->add_option("--out", out_flag, "override the output directory");

  auto* inspect = app.add_subcommand("inspect", "Summarize a run directory and reconcile it");
  inspect->add_option("dir", dir, "run output directory")->required();

  std::string scenario = "keyword";
  int train_rows = 30;
  int val_rows = 200;
  std::uint64_t scaffold_seed = 7;
  auto* scaffold = app.add_subcommand("scaffold", "Write offline demo datasets and a manifest");
  scaffold->add_option("dir", dir, "target directory")->required();
  scaffold->add_option("--scenario", scenario, "scripted scenario name");
  scaffold->add_option("--train-rows", train_rows, "train row count");
  scaffold->add_option("--val-rows", val_rows, "validation row count");
  scaffold->add_option("--seed", scaffold_seed, "seed written into the manifest");

  CLI11_PARSE(app, argc, argv);

  if (*seed_opt || *vseed_opt) overrides.seed = seed_flag;
  if (*iter_opt) overrides.iterations = iterations_flag;
  if (*provider_opt || *vprovider_opt) overrides.provider = provider_flag;
  if (*budget_opt) overrides.budget = budget_flag;
  if (*resume_opt) overrides.resume_checkpoint = resume_flag;
  if (*out_opt || *vout_opt) overrides.output_dir = out_flag;

  if (run->parsed()) return cmd_run(manifest_path, overrides);
  if (validate->parsed()) return cmd_validate(prompt_path, manifest_path, overrides);
  if (inspect->parsed()) return cmd_inspect(dir);
  if (scaffold->parsed()) return cmd_scaffold(dir, scenario, train_rows, val_rows, scaffold_seed);
  return 1;
}
