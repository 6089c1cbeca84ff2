#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vidctx/types.hpp"

namespace vidctx {

// Consecutive option letters starting at 'A', plus one trailing abstention letter
// ("No Answer"). For 5 options: A..E answers, F abstention.
struct OptionTokenSet {
    std::vector<char> tokens;  // answer letters followed by the abstention letter
    char abstention = 'F';

    int num_options() const { return static_cast<int>(tokens.size()) - 1; }
    bool is_abstention(char c) const { return c == abstention; }
};

OptionTokenSet option_token_set(int num_options);

// Caption-extraction instruction. QuestionAware embeds the question; Static does not.
std::string build_caption_prompt(const std::string& question, CaptionMode mode);

// Question-answering instruction for one frame. When context is present the prompt
// opens with the distant-frame caption tagged "earlier"/"later"; options are listed
// as "Option A:" ... plus the abstention option, and the closing instruction names
// the full letter set.
std::string build_vqa_prompt(
    const std::string& question, const std::vector<std::string>& options,
    const std::optional<std::pair<std::string, TemporalSpecifier>>& context);

// Variant whose context caption describes the same frame that is attached to the
// request, so no temporal specifier applies.
std::string build_vqa_prompt_current_frame(const std::string& question,
                                           const std::vector<std::string>& options,
                                           const std::string& caption);

// Single-call variant: all captions enumerated in temporal order, one per line,
// followed by the same question/options block.
std::string build_concat_prompt(const std::string& question,
                                const std::vector<std::string>& options,
                                const std::vector<std::string>& captions);

}  // namespace vidctx
