#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "promptopt/manifest.hpp"
#include "promptopt/optimizer.hpp"
#include "promptopt/report.hpp"

namespace promptopt {

// CLI flag overrides applied on top of the manifest.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> iterations;
  bool no_summarization = false;
  std::optional<std::string> provider;  // "scripted:<scenario>" or "http"
  std::optional<std::uint64_t> budget;
  std::optional<std::filesystem::path> resume_checkpoint;
  std::optional<std::filesystem::path> output_dir;
  bool skip_validation = false;
};

struct RunPaths {
  std::filesystem::path out_dir;
  std::filesystem::path ledger;
  std::filesystem::path checkpoint;
  std::filesystem::path cache_dir;
  std::filesystem::path report_json;
  std::filesystem::path report_md;

  static RunPaths under(const std::filesystem::path& out_dir);
};

struct RunOutcome {
  OptimizationResult result;
  std::optional<double> initial_validation;
  std::optional<double> final_validation;
  CallStats stats;
  RunPaths paths;
};

void apply_overrides(RunManifest& manifest, const RunOverrides& overrides);

std::unique_ptr<Backend> build_backend(const ProviderSpec& spec);

// Rolls the ledger back to its first next_seq lines and deletes cache
// entries written only by the dropped lines. This is what makes resuming
// from a mid-iteration abort reproduce the uninterrupted run exactly: any
// call the aborted iteration already made is replayed as if it never
// happened. Returns the call stats of the surviving lines.
CallStats rollback_run_state(const std::filesystem::path& ledger_path, ResponseCache& cache,
                             std::uint64_t next_seq);

// The `run` command: optimize, optionally validate seed and best prompt,
// emit report + ledger + checkpoint under the output directory.
RunOutcome execute_run(RunManifest manifest, const RunOverrides& overrides);

// The `validate` command: mean rating of one prompt over the full validation
// set; writes a validation JSON record and returns the mean.
double execute_validate(RunManifest manifest, const std::string& prompt_text,
                        const RunOverrides& overrides, Json* record_out = nullptr);

}  // namespace promptopt
