#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vidctx/errors.hpp"
#include "vidctx/prompts.hpp"

using namespace vidctx;

namespace {

const std::string kQuestion = "What does the brown dog do after it stands up?";
const std::vector<std::string> kOptions = {"runs away", "barks at the cat",
                                           "lies back down", "eats from the bowl",
                                           "looks out the window"};

}  // namespace

TEST_CASE("option letters are consecutive with a trailing abstention letter") {
    auto five = option_token_set(5);
    CHECK(five.tokens == std::vector<char>{'A', 'B', 'C', 'D', 'E', 'F'});
    CHECK(five.abstention == 'F');
    CHECK(five.num_options() == 5);

    auto four = option_token_set(4);
    CHECK(four.tokens == std::vector<char>{'A', 'B', 'C', 'D', 'E'});
    CHECK(four.abstention == 'E');

    auto one = option_token_set(1);
    CHECK(one.tokens == std::vector<char>{'A', 'B'});
    CHECK(one.abstention == 'B');

    CHECK_THROWS_AS(option_token_set(0), InvalidArgument);
    CHECK_THROWS_AS(option_token_set(6), InvalidArgument);
}

TEST_CASE("question-aware caption prompt embeds the question") {
    const auto prompt = build_caption_prompt("What did the dog do?",
                                             CaptionMode::QuestionAware);
    CHECK(prompt ==
          "Please provide a short description of the image, giving information "
          "related to the following question: What did the dog do?");
}

TEST_CASE("static caption prompt ignores the question") {
    CHECK(build_caption_prompt("", CaptionMode::Static) ==
          "Please provide a short description of the image.");
    CHECK(build_caption_prompt("anything", CaptionMode::Static) ==
          "Please provide a short description of the image.");
}

TEST_CASE("question-aware mode rejects an empty question") {
    CHECK_THROWS_AS(build_caption_prompt("", CaptionMode::QuestionAware),
                    InvalidArgument);
}

TEST_CASE("context sentence carries the lowercase specifier word") {
    const auto later = build_vqa_prompt(
        kQuestion, kOptions, std::make_pair(std::string("cap"), TemporalSpecifier::Later));
    CHECK(later.find("Here is what happens later in the video: cap") == 0);
    CHECK(later.find("(A,B,C,D,E,F)") != std::string::npos);
    CHECK(later.find("Option F: No Answer.") != std::string::npos);

    const auto earlier = build_vqa_prompt(
        kQuestion, kOptions,
        std::make_pair(std::string("cap"), TemporalSpecifier::Earlier));
    CHECK(earlier.find("Here is what happens earlier in the video: cap") == 0);
}

TEST_CASE("no-context prompt drops the caption references") {
    const auto prompt = build_vqa_prompt(kQuestion, kOptions, std::nullopt);
    CHECK(prompt.find("Here is what happens") == std::string::npos);
    CHECK(prompt.find("presented in the caption and") == std::string::npos);
    CHECK(prompt.find("Question: " + kQuestion) == 0);
    CHECK(prompt.find("Option F: No Answer.") != std::string::npos);
    CHECK(prompt.find("(A,B,C,D,E,F)") != std::string::npos);
}

TEST_CASE("four options shift the abstention letter to E") {
    const std::vector<std::string> options = {"a cup", "a book", "a towel", "a phone"};
    const auto prompt = build_vqa_prompt(
        "Which object does the person pick up?", options,
        std::make_pair(std::string("cap"), TemporalSpecifier::Earlier));
    CHECK(prompt.find("Option E: No Answer.") != std::string::npos);
    CHECK(prompt.find("Option F:") == std::string::npos);
    CHECK(prompt.find("(A,B,C,D,E)") != std::string::npos);
}

TEST_CASE("vqa prompt rejects bad option counts") {
    CHECK_THROWS_AS(build_vqa_prompt(kQuestion, {}, std::nullopt), InvalidArgument);
    const std::vector<std::string> six(6, "x");
    CHECK_THROWS_AS(build_vqa_prompt(kQuestion, six, std::nullopt), InvalidArgument);
}

TEST_CASE("every answer text appears exactly once, in order") {
    const auto prompt = build_vqa_prompt(kQuestion, kOptions, std::nullopt);
    std::size_t previous = 0;
    for (const auto& option : kOptions) {
        const auto first = prompt.find(option);
        REQUIRE(first != std::string::npos);
        CHECK(prompt.find(option, first + 1) == std::string::npos);
        CHECK(first > previous);
        previous = first;
    }
}

TEST_CASE("current-frame variant uses the same-frame wording") {
    const auto prompt = build_vqa_prompt_current_frame(kQuestion, kOptions, "cap");
    CHECK(prompt.find("Here is a description of the video frame: cap") == 0);
    CHECK(prompt.find("earlier") == std::string::npos);
    CHECK(prompt.find("later") == std::string::npos);
    CHECK(prompt.find("presented in the caption and the video frame") !=
          std::string::npos);
}

TEST_CASE("concat prompt enumerates captions in temporal order") {
    std::vector<std::string> captions;
    for (int i = 1; i <= 16; ++i) captions.push_back("caption number " + std::to_string(i));
    const auto prompt = build_concat_prompt(kQuestion, kOptions, captions);
    std::size_t previous = 0;
    for (int i = 1; i <= 16; ++i) {
        const std::string line =
            "Frame " + std::to_string(i) + ": caption number " + std::to_string(i);
        const auto at = prompt.find(line);
        REQUIRE(at != std::string::npos);
        CHECK(at >= previous);
        previous = at;
    }
    CHECK(prompt.find("presented in the captions") != std::string::npos);
}

TEST_CASE("concat prompt accepts one caption and thirty-two captions") {
    const auto single = build_concat_prompt(kQuestion, kOptions, {"only caption"});
    CHECK(single.find("Frame 1: only caption") == 0);

    std::vector<std::string> many(32, "c");
    const auto prompt = build_concat_prompt(kQuestion, kOptions, many);
    CHECK(prompt.find("Frame 32: c") != std::string::npos);
    CHECK(prompt.find("Frame 33:") == std::string::npos);
}

TEST_CASE("concat prompt rejects an empty caption list") {
    CHECK_THROWS_AS(build_concat_prompt(kQuestion, kOptions, {}), InvalidArgument);
}

TEST_CASE("prompt building is byte-deterministic") {
    const auto context = std::make_pair(std::string("cap"), TemporalSpecifier::Later);
    CHECK(build_vqa_prompt(kQuestion, kOptions, context) ==
          build_vqa_prompt(kQuestion, kOptions, context));
    CHECK(build_caption_prompt(kQuestion, CaptionMode::QuestionAware) ==
          build_caption_prompt(kQuestion, CaptionMode::QuestionAware));
    CHECK(build_concat_prompt(kQuestion, kOptions, {"a", "b"}) ==
          build_concat_prompt(kQuestion, kOptions, {"a", "b"}));
}

TEST_CASE("abstention letter never collides with an answer letter") {
    for (int n = 1; n <= 5; ++n) {
        const auto set = option_token_set(n);
        for (int i = 0; i < set.num_options(); ++i) {
            CHECK(set.tokens[i] != set.abstention);
        }
    }
}
