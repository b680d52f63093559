#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "promptopt/optimizer.hpp"
#include "promptopt/provider.hpp"

namespace promptopt {

struct ValidationCalls {
  std::uint64_t generation = 0;
  std::uint64_t evaluation = 0;
};

struct ReportInputs {
  const OptimizationResult& result;
  std::string seed_prompt_text;
  std::optional<double> initial_validation;
  std::optional<double> final_validation;
  CallStats stats;  // run totals, validation included
  ValidationCalls validation_calls;
  Json config_echo;
};

// Canonical machine record. Byte-stable for identical inputs: key order is
// fixed and no timestamps are recorded.
Json report_json(const ReportInputs& inputs);

// Before/after prompt comparison, metric trajectory, and lineage tree.
std::string report_markdown(const Json& report);

void emit_report(const ReportInputs& inputs, const std::filesystem::path& json_path,
                 const std::filesystem::path& md_path);

}  // namespace promptopt
