#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "promptopt/dataset.hpp"
#include "promptopt/optimizer.hpp"
#include "promptopt/pipeline.hpp"

namespace promptopt {

struct DatasetSpec {
  std::optional<std::filesystem::path> path;  // single file, seeded split
  std::optional<std::filesystem::path> train_path;
  std::optional<std::filesystem::path> validation_path;
  DatasetFormat format = DatasetFormat::Jsonl;
  std::optional<std::string> expected_column;
  int split_train = 30;       // single-file split sizes, clamped to availability
  int split_validation = 200;
};

struct ProviderSpec {
  std::string backend = "http";  // "http" or "scripted"
  std::string scenario;          // scripted backend only
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key_env = "OPENAI_API_KEY";
  Routing routing;
  int retry_max_attempts = 3;
  int retry_base_delay_ms = 500;
  int in_flight_limit = 8;
};

// Everything a run needs, loaded from one JSON file. Task descriptions and
// criteria are multi-line prose, which is why this is a file and not flags.
struct RunManifest {
  std::string task_description;
  std::string evaluation_criteria;
  std::string seed_prompt_text;
  DatasetSpec dataset;
  ProviderSpec provider;
  RunConfig run;
  std::filesystem::path output_dir = "out";

  Json echo_json() const;  // config echo for reports (no secrets, names only)
};

// Parses and validates a manifest. Relative paths resolve against the
// manifest file's directory. Validation failures are ConfigError with the
// offending field path in the message.
RunManifest load_manifest(const std::filesystem::path& path);
RunManifest manifest_from_json(const Json& j, const std::filesystem::path& base_dir);

struct LoadedDatasets {
  Dataset train;
  std::optional<Dataset> validation;
};

// Loads (and, for single-file manifests, splits) the datasets, then checks
// the seed prompt's slots against the train columns. All of this happens
// before any provider call.
LoadedDatasets load_datasets(const RunManifest& manifest);

}  // namespace promptopt
