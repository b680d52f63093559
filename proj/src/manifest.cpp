#include "promptopt/manifest.hpp"

#include "promptopt/errors.hpp"
#include "promptopt/scripted.hpp"
#include "promptopt/template.hpp"

namespace promptopt {
namespace {

const Json* find(const Json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::string require_string(const Json& j, const char* key, const std::string& at) {
  const Json* v = find(j, key);
  if (v == nullptr) throw ConfigError("manifest: field '" + at + key + "' is required");
  if (!v->is_string()) throw ConfigError("manifest: field '" + at + key + "' must be a string");
  return v->get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

void parse_stage_map(const Json& j, const char* key, Routing& routing, bool model_field,
                     const std::string& at) {
  const Json* map = find(j, key);
  if (map == nullptr) return;
  if (!map->is_object()) throw ConfigError("manifest: field '" + at + key + "' must be an object");
  for (auto it = map->begin(); it != map->end(); ++it) {
    Purpose purpose;
    try {
      purpose = purpose_from_string(it.key());
    } catch (const std::invalid_argument&) {
      throw ConfigError("manifest: field '" + at + key + "." + it.key() + "': unknown stage");
    }
    if (model_field)
      routing.for_purpose(purpose).model = it->get<std::string>();
    else
      routing.for_purpose(purpose).temperature = it->get<double>();
  }
}

}  // namespace

Json RunManifest::echo_json() const {
  Json j;
  j["task_description"] = task_description;
  j["evaluation_criteria"] = evaluation_criteria;
  Json ds;
  ds["format"] = dataset.format == DatasetFormat::Csv ? "csv" : "jsonl";
  ds["path"] = dataset.path ? Json(dataset.path->string()) : Json(nullptr);
  ds["train_path"] = dataset.train_path ? Json(dataset.train_path->string()) : Json(nullptr);
  ds["validation_path"] =
      dataset.validation_path ? Json(dataset.validation_path->string()) : Json(nullptr);
  ds["expected_column"] = dataset.expected_column ? Json(*dataset.expected_column) : Json(nullptr);
  ds["split_train"] = dataset.split_train;
  ds["split_validation"] = dataset.split_validation;
  j["dataset"] = std::move(ds);
  Json p;
  p["backend"] = provider.backend;
  p["scenario"] = provider.scenario;
  p["base_url"] = provider.base_url;
  p["api_key_env"] = provider.api_key_env;
  p["models"] = {{"generation", provider.routing.generation.model},
                 {"evaluation", provider.routing.evaluation.model},
                 {"gradient", provider.routing.gradient.model},
                 {"summary", provider.routing.summary.model},
                 {"edit", provider.routing.edit.model}};
  p["temperatures"] = {{"generation", provider.routing.generation.temperature},
                       {"evaluation", provider.routing.evaluation.temperature},
                       {"gradient", provider.routing.gradient.temperature},
                       {"summary", provider.routing.summary.temperature},
                       {"edit", provider.routing.edit.temperature}};
  p["max_output_tokens"] = provider.routing.max_output_tokens;
  p["retry"] = {{"max_attempts", provider.retry_max_attempts},
                {"base_delay_ms", provider.retry_base_delay_ms}};
  p["in_flight_limit"] = provider.in_flight_limit;
  j["provider"] = std::move(p);
  j["run"] = run.to_json();
  return j;
}

RunManifest manifest_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("manifest: top level must be a JSON object");
  RunManifest m;
  m.task_description = require_string(j, "task_description", "");
  m.evaluation_criteria = require_string(j, "evaluation_criteria", "");

  const Json* inline_prompt = find(j, "seed_prompt");
  const Json* prompt_path = find(j, "seed_prompt_path");
  if ((inline_prompt != nullptr) == (prompt_path != nullptr))
    throw ConfigError("manifest: exactly one of 'seed_prompt' or 'seed_prompt_path' is required");
  if (inline_prompt != nullptr) {
    m.seed_prompt_text = inline_prompt->get<std::string>();
  } else {
    const auto p = resolve(base_dir, prompt_path->get<std::string>());
    if (!std::filesystem::exists(p))
      throw ConfigError("manifest: field 'seed_prompt_path': no such file: " + p.string());
    m.seed_prompt_text = read_text_file(p);
  }
  if (m.seed_prompt_text.empty()) throw ConfigError("manifest: seed prompt is empty");

  const Json* ds = find(j, "dataset");
  if (ds == nullptr) throw ConfigError("manifest: field 'dataset' is required");
  m.dataset.format = parse_dataset_format(ds->value("format", "jsonl"));
  if (const Json* v = find(*ds, "path")) m.dataset.path = resolve(base_dir, v->get<std::string>());
  if (const Json* v = find(*ds, "train_path"))
    m.dataset.train_path = resolve(base_dir, v->get<std::string>());
  if (const Json* v = find(*ds, "validation_path"))
    m.dataset.validation_path = resolve(base_dir, v->get<std::string>());
  if (const Json* v = find(*ds, "expected_column")) m.dataset.expected_column = v->get<std::string>();
  m.dataset.split_train = ds->value("split_train", m.dataset.split_train);
  m.dataset.split_validation = ds->value("split_validation", m.dataset.split_validation);
  const bool single = m.dataset.path.has_value();
  const bool pair = m.dataset.train_path.has_value();
  if (single == pair)
    throw ConfigError("manifest: field 'dataset': provide either 'path' or 'train_path'");
  if (single && (m.dataset.split_train < 1 || m.dataset.split_validation < 0))
    throw ConfigError("manifest: field 'dataset.split_train'/'split_validation' out of range");

  if (const Json* p = find(j, "provider")) {
    m.provider.backend = p->value("backend", m.provider.backend);
    m.provider.scenario = p->value("scenario", m.provider.scenario);
    m.provider.base_url = p->value("base_url", m.provider.base_url);
    m.provider.api_key_env = p->value("api_key_env", m.provider.api_key_env);
    parse_stage_map(*p, "models", m.provider.routing, true, "provider.");
    parse_stage_map(*p, "temperatures", m.provider.routing, false, "provider.");
    m.provider.routing.max_output_tokens =
        p->value("max_output_tokens", m.provider.routing.max_output_tokens);
    if (const Json* r = find(*p, "retry")) {
      m.provider.retry_max_attempts = r->value("max_attempts", m.provider.retry_max_attempts);
      m.provider.retry_base_delay_ms = r->value("base_delay_ms", m.provider.retry_base_delay_ms);
    }
    m.provider.in_flight_limit = p->value("in_flight_limit", m.provider.in_flight_limit);
  }
  if (m.provider.backend != "http" && m.provider.backend != "scripted")
    throw ConfigError("manifest: field 'provider.backend' must be 'http' or 'scripted'");
  if (m.provider.backend == "scripted")
    scripted::scripted_scenario(m.provider.scenario);  // validates the name
  if (m.provider.retry_max_attempts < 1)
    throw ConfigError("manifest: field 'provider.retry.max_attempts' must be >= 1");

  if (const Json* r = find(j, "run")) m.run = RunConfig::from_json(*r);
  m.run.validate();

  if (const Json* v = find(j, "output_dir")) m.output_dir = resolve(base_dir, v->get<std::string>());

  // Early template sanity: the seed must parse and reparse to the same slots.
  parse_template(m.seed_prompt_text);
  return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("manifest: no such file: " + path.string());
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest: " + path.string() + ": " + e.what());
  }
  return manifest_from_json(j, path.parent_path());
}

LoadedDatasets load_datasets(const RunManifest& m) {
  LoadedDatasets out;
  if (m.dataset.path) {
    const Dataset full = load_dataset(*m.dataset.path, m.dataset.format, m.dataset.expected_column);
    // The split consumes a fresh stream seeded like the run's, so a later
    // validate command reproduces the same held-out rows.
    Rng rng(m.run.seed);
    auto [train, val] = split_dataset(full, static_cast<std::size_t>(m.dataset.split_train),
                                      static_cast<std::size_t>(m.dataset.split_validation), rng);
    out.train = std::move(train);
    if (!val.rows.empty()) out.validation = std::move(val);
  } else {
    out.train = load_dataset(*m.dataset.train_path, m.dataset.format, m.dataset.expected_column);
    if (m.dataset.validation_path)
      out.validation =
          load_dataset(*m.dataset.validation_path, m.dataset.format, m.dataset.expected_column);
  }
  if (out.train.rows.empty()) throw EmptyDataset("train dataset has no rows");

  const PromptTemplate seed = parse_template(m.seed_prompt_text);
  for (const auto& slot : seed.slots)
    if (!out.train.has_column(slot))
      throw SchemaError("seed prompt slot '{" + slot + "}' is not a dataset column");
  return out;
}

}  // namespace promptopt
