#include "promptopt/pipeline.hpp"

namespace promptopt {

const StageSettings& Routing::for_purpose(Purpose p) const {
  switch (p) {
    case Purpose::Generation: return generation;
    case Purpose::Evaluation: return evaluation;
    case Purpose::Gradient: return gradient;
    case Purpose::Summary: return summary;
    case Purpose::Edit: return edit;
  }
  return generation;
}

StageSettings& Routing::for_purpose(Purpose p) {
  return const_cast<StageSettings&>(static_cast<const Routing*>(this)->for_purpose(p));
}

CompletionRequest Routing::make_request(Purpose purpose, std::string user_content) const {
  const StageSettings& stage = for_purpose(purpose);
  CompletionRequest req;
  req.model = stage.model;
  req.temperature = stage.temperature;
  req.max_output_tokens = max_output_tokens;
  req.purpose = purpose;
  req.messages.push_back({"user", std::move(user_content)});
  return req;
}

}  // namespace promptopt
