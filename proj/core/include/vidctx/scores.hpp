#pragma once

#include <map>
#include <string>

#include "vidctx/prompts.hpp"

namespace vidctx {

// What the raw per-letter values are: natural-log probabilities or raw logits.
enum class ScoreSource { LogProb, Logit };

const char* to_string(ScoreSource s);
ScoreSource score_source_from_string(const std::string& s);

// Score assigned to a letter the server's top-k list did not mention.
// -20 nats is a probability of ~2e-9, effectively zero but finite.
inline constexpr double kLogProbFloor = -20.0;
// Logit floor: this far below the lowest observed logit.
inline constexpr double kLogitFloorMargin = 10.0;

// Raw first-token score per option letter.
struct TokenScoreMap {
    std::map<char, double> scores;
    ScoreSource source = ScoreSource::LogProb;
};

// Builds a complete TokenScoreMap from the letters a server actually listed.
// Missing letters get the floor score; non-finite values are floored; LogProb
// values are clamped to <= 0. Relative order of observed entries is preserved.
TokenScoreMap complete_score_map(const std::map<char, double>& observed,
                                 const OptionTokenSet& letters, ScoreSource source);

}  // namespace vidctx
