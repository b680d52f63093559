#include "promptopt/report.hpp"

#include <cstdio>
#include <map>

namespace promptopt {
namespace {

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

Json optional_real(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

void render_lineage(const Json& lineage, const Json& parent, int depth, std::string& out) {
  for (const auto& node : lineage) {
    if (node.at("parent_id") != parent) continue;
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += "- prompt ";
    out += std::to_string(node.at("id").get<std::uint64_t>());
    out += " (iteration ";
    out += std::to_string(node.at("born_iteration").get<int>());
    out += ")\n";
    render_lineage(lineage, node.at("id"), depth + 1, out);
  }
}

}  // namespace

Json report_json(const ReportInputs& in) {
  Json j;
  j["schema_version"] = 1;
  j["seed_prompt"] = in.seed_prompt_text;
  j["best_prompt"] = in.result.best.tpl.text;
  j["best_entry"] = {{"id", in.result.best.id},
                     {"mean", in.result.best.mean()},
                     {"eval_count", in.result.best.eval_count},
                     {"born_iteration", in.result.best.born_iteration}};
  j["initial_validation"] = optional_real(in.initial_validation);
  j["final_validation"] = optional_real(in.final_validation);
  j["iterations_completed"] = in.result.iterations_completed;
  j["stopped_early"] = in.result.stopped_early;
  j["total_calls"] = in.stats.total;
  j["cache_hits"] = in.stats.cache_hits;
  j["calls_by_purpose"] = {{"generation", in.stats.purpose_count(Purpose::Generation)},
                           {"evaluation", in.stats.purpose_count(Purpose::Evaluation)},
                           {"gradient", in.stats.purpose_count(Purpose::Gradient)},
                           {"summary", in.stats.purpose_count(Purpose::Summary)},
                           {"edit", in.stats.purpose_count(Purpose::Edit)}};
  j["validation_calls"] = {{"generation", in.validation_calls.generation},
                           {"evaluation", in.validation_calls.evaluation}};
  j["iteration_metrics"] = Json::array();
  for (const auto& m : in.result.iteration_metrics) j["iteration_metrics"].push_back(m.to_json());
  j["lineage"] = Json::array();
  for (const auto& n : in.result.lineage) {
    Json node;
    node["id"] = n.id;
    node["parent_id"] = n.parent_id ? Json(*n.parent_id) : Json(nullptr);
    node["born_iteration"] = n.born_iteration;
    node["prompt"] = n.prompt;
    j["lineage"].push_back(std::move(node));
  }
  j["config_echo"] = in.config_echo;
  return j;
}

std::string report_markdown(const Json& report) {
  std::string md;
  md += "# Prompt Optimization Report\n\n";

  md += "## Summary\n\n";
  md += "- iterations completed: " + std::to_string(report.at("iterations_completed").get<int>());
  if (report.at("stopped_early").get<bool>()) md += " (stopped early)";
  md += "\n";
  md += "- total provider calls: " + std::to_string(report.at("total_calls").get<std::uint64_t>()) +
        " (cache hits: " + std::to_string(report.at("cache_hits").get<std::uint64_t>()) + ")\n";
  const auto& best = report.at("best_entry");
  md += "- best prompt: id " + std::to_string(best.at("id").get<std::uint64_t>()) + ", mean rating " +
        fmt3(best.at("mean").get<double>()) + " over " +
        std::to_string(best.at("eval_count").get<std::uint64_t>()) + " evaluations (born iteration " +
        std::to_string(best.at("born_iteration").get<int>()) + ")\n";
  if (!report.at("initial_validation").is_null())
    md += "- seed validation mean: " + fmt3(report.at("initial_validation").get<double>()) + "\n";
  if (!report.at("final_validation").is_null())
    md += "- best validation mean: " + fmt3(report.at("final_validation").get<double>()) + "\n";
  md += "\n";

  md += "## Prompts\n\n### Seed\n\n~~~~text\n";
  md += report.at("seed_prompt").get<std::string>();
  md += "\n~~~~\n\n### Optimized\n\n~~~~text\n";
  md += report.at("best_prompt").get<std::string>();
  md += "\n~~~~\n\n";

  md += "## Metric trajectory\n\n";
  md += "| iteration | beam | entry mean/evals | batch mean |\n";
  md += "|---|---|---|---|\n";
  for (const auto& m : report.at("iteration_metrics")) {
    std::string beam;
    for (const auto& id : m.at("beam")) {
      if (!beam.empty()) beam += ", ";
      beam += std::to_string(id.get<std::uint64_t>());
    }
    std::string means;
    std::string batches;
    for (const auto& e : m.at("entries")) {
      if (!means.empty()) means += ", ";
      means += std::to_string(e.at("id").get<std::uint64_t>()) + ": " +
               fmt3(e.at("mean").get<double>()) + "/" +
               std::to_string(e.at("eval_count").get<std::uint64_t>());
      if (!batches.empty()) batches += ", ";
      const double bm = e.at("batch_mean").get<double>();
      batches += bm < 0 ? "-" : fmt3(bm);
    }
    md += "| " + std::to_string(m.at("iteration").get<int>()) + " | " + beam + " | " + means +
          " | " + batches + " |\n";
  }
  md += "\n";

  md += "## Lineage\n\n";
  render_lineage(report.at("lineage"), Json(nullptr), 0, md);
  return md;
}

void emit_report(const ReportInputs& inputs, const std::filesystem::path& json_path,
                 const std::filesystem::path& md_path) {
  const Json j = report_json(inputs);
  write_text_file_atomic(json_path, j.dump(2) + "\n");
  write_text_file_atomic(md_path, report_markdown(j));
}

}  // namespace promptopt
