#include "vidctx/scores.hpp"

#include <algorithm>
#include <cmath>

#include "vidctx/errors.hpp"

namespace vidctx {

const char* to_string(ScoreSource s) {
    return s == ScoreSource::LogProb ? "logprob" : "logit";
}

ScoreSource score_source_from_string(const std::string& s) {
    if (s == "logprob") return ScoreSource::LogProb;
    if (s == "logit") return ScoreSource::Logit;
    throw InvalidArgument("unknown score source '" + s + "' (expected logprob|logit)");
}

TokenScoreMap complete_score_map(const std::map<char, double>& observed,
                                 const OptionTokenSet& letters, ScoreSource source) {
    double floor = kLogProbFloor;
    if (source == ScoreSource::Logit) {
        double lowest = 0.0;
        bool any = false;
        for (const auto& [letter, value] : observed) {
            if (std::isfinite(value) && (!any || value < lowest)) {
                lowest = value;
                any = true;
            }
        }
        floor = any ? lowest - kLogitFloorMargin : -kLogitFloorMargin;
    }

    TokenScoreMap out;
    out.source = source;
    for (char letter : letters.tokens) {
        auto it = observed.find(letter);
        double value = floor;
        if (it != observed.end() && std::isfinite(it->second)) {
            value = it->second;
            if (source == ScoreSource::LogProb) value = std::min(value, 0.0);
        }
        out.scores[letter] = value;
    }
    return out;
}

}  // namespace vidctx
