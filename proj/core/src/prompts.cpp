#include "vidctx/prompts.hpp"

#include <sstream>

#include "vidctx/errors.hpp"

namespace vidctx {

namespace {

constexpr int kMaxOptions = 5;

void check_option_count(std::size_t count) {
    if (count < 1 || count > kMaxOptions) {
        throw InvalidArgument("option count must be in [1, 5], got " +
                              std::to_string(count));
    }
}

// "Question: <Q> Option A: <A> ... Option <abst>: No Answer."
std::string question_block(const std::string& question,
                           const std::vector<std::string>& options,
                           const OptionTokenSet& letters) {
    std::ostringstream out;
    out << "Question: " << question;
    for (std::size_t i = 0; i < options.size(); ++i) {
        out << " Option " << letters.tokens[i] << ": " << options[i];
    }
    out << " Option " << letters.abstention << ": No Answer.";
    return out.str();
}

// "(A,B,C,D,E,F)" including the abstention letter.
std::string letter_list(const OptionTokenSet& letters) {
    std::string out = "(";
    for (std::size_t i = 0; i < letters.tokens.size(); ++i) {
        if (i) out.push_back(',');
        out.push_back(letters.tokens[i]);
    }
    out.push_back(')');
    return out;
}

std::string closing_instruction(const std::string& considering,
                                const OptionTokenSet& letters) {
    return "Considering the information presented in " + considering +
           ", select the correct answer in one letter from the options " +
           letter_list(letters) + ".";
}

}  // namespace

OptionTokenSet option_token_set(int num_options) {
    if (num_options < 1 || num_options > kMaxOptions) {
        throw InvalidArgument("option_token_set: count must be in [1, 5], got " +
                              std::to_string(num_options));
    }
    OptionTokenSet set;
    for (int i = 0; i <= num_options; ++i) {
        set.tokens.push_back(static_cast<char>('A' + i));
    }
    set.abstention = set.tokens.back();
    return set;
}

std::string build_caption_prompt(const std::string& question, CaptionMode mode) {
    if (mode == CaptionMode::Static) {
        return "Please provide a short description of the image.";
    }
    if (question.empty()) {
        throw InvalidArgument("build_caption_prompt: empty question in question-aware mode");
    }
    return "Please provide a short description of the image, giving information "
           "related to the following question: " +
           question;
}

std::string build_vqa_prompt(
    const std::string& question, const std::vector<std::string>& options,
    const std::optional<std::pair<std::string, TemporalSpecifier>>& context) {
    check_option_count(options.size());
    const OptionTokenSet letters = option_token_set(static_cast<int>(options.size()));
    std::ostringstream out;
    if (context) {
        out << "Here is what happens " << to_word(context->second)
            << " in the video: " << context->first << "\n";
    }
    out << question_block(question, options, letters) << "\n";
    out << closing_instruction(
        context ? "the caption and the video frame" : "the video frame", letters);
    return out.str();
}

std::string build_vqa_prompt_current_frame(const std::string& question,
                                           const std::vector<std::string>& options,
                                           const std::string& caption) {
    check_option_count(options.size());
    const OptionTokenSet letters = option_token_set(static_cast<int>(options.size()));
    std::ostringstream out;
    out << "Here is a description of the video frame: " << caption << "\n";
    out << question_block(question, options, letters) << "\n";
    out << closing_instruction("the caption and the video frame", letters);
    return out.str();
}

std::string build_concat_prompt(const std::string& question,
                                const std::vector<std::string>& options,
                                const std::vector<std::string>& captions) {
    check_option_count(options.size());
    if (captions.empty()) {
        throw InvalidArgument("build_concat_prompt: empty caption list");
    }
    const OptionTokenSet letters = option_token_set(static_cast<int>(options.size()));
    std::ostringstream out;
    for (std::size_t i = 0; i < captions.size(); ++i) {
        out << "Frame " << (i + 1) << ": " << captions[i] << "\n";
    }
    out << question_block(question, options, letters) << "\n";
    out << closing_instruction("the captions", letters);
    return out.str();
}

}  // namespace vidctx
