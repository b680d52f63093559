#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace promptopt::prompts {

// Section delimiters shared by the stage-message builders. The scripted
// backend parses these markers back out of requests, so builders and
// scenarios must agree on them exactly.
inline constexpr std::string_view kInputOpen = "<INPUT>";
inline constexpr std::string_view kInputClose = "</INPUT>";
inline constexpr std::string_view kOutputOpen = "<MODEL OUTPUT>";
inline constexpr std::string_view kOutputClose = "</MODEL OUTPUT>";
inline constexpr std::string_view kExpectedOpen = "<EXPECTED ANSWER>";
inline constexpr std::string_view kExpectedClose = "</EXPECTED ANSWER>";
inline constexpr std::string_view kTaskOpen = "<TASK DESCRIPTION>";
inline constexpr std::string_view kTaskClose = "</TASK DESCRIPTION>";
inline constexpr std::string_view kPromptOpen = "<CURRENT PROMPT>";
inline constexpr std::string_view kPromptClose = "</CURRENT PROMPT>";
inline constexpr std::string_view kCriteriaOpen = "<EVALUATION CRITERIA>";
inline constexpr std::string_view kCriteriaClose = "</EVALUATION CRITERIA>";
inline constexpr std::string_view kExplanationOpen = "<RATING EXPLANATION>";
inline constexpr std::string_view kExplanationClose = "</RATING EXPLANATION>";
inline constexpr std::string_view kGradientsOpen = "<GRADIENTS>";
inline constexpr std::string_view kGradientsClose = "</GRADIENTS>";
inline constexpr std::string_view kFeedbackOpen = "<FEEDBACK>";
inline constexpr std::string_view kFeedbackClose = "</FEEDBACK>";

inline constexpr std::string_view kRatingReminder =
    "Reminder: end your reply with a final line of exactly \"RATING: 1\" or \"RATING: 0\".";

inline constexpr std::string_view kMissingSlotNote =
    "Your previous attempt dropped these required slots:";

// Returns the text between open/close markers, or nullopt. Used by scripted
// scenarios and by ledger-inspection tests.
std::optional<std::string> extract_block(std::string_view text, std::string_view open,
                                         std::string_view close);

std::string wrap_block(std::string_view open, std::string_view body, std::string_view close);

}  // namespace promptopt::prompts
