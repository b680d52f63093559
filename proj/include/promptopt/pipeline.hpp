#pragma once

#include <string>

#include "promptopt/provider.hpp"

namespace promptopt {

struct StageSettings {
  std::string model;
  double temperature = 0.0;
};

// Per-stage model routing. Generation, evaluation, gradient, and summary run
// on a worker model at temperature 0 by default; editing runs on a stronger
// model at temperature 0.9 so repeated proposals can differ.
struct Routing {
  StageSettings generation{"gpt-3.5-turbo-0125", 0.0};
  StageSettings evaluation{"gpt-3.5-turbo-0125", 0.0};
  StageSettings gradient{"gpt-3.5-turbo-0125", 0.0};
  StageSettings summary{"gpt-3.5-turbo-0125", 0.0};
  StageSettings edit{"gpt-4o-2024-05-13", 0.9};
  int max_output_tokens = 1024;

  const StageSettings& for_purpose(Purpose p) const;
  StageSettings& for_purpose(Purpose p);

  CompletionRequest make_request(Purpose purpose, std::string user_content) const;
};

// Everything a pipeline stage needs to issue calls.
struct PipelineContext {
  Provider& provider;
  Routing routing;
};

}  // namespace promptopt
