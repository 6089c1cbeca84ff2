#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vidctx/scores.hpp"
#include "vidctx/types.hpp"

namespace vidctx {

enum class Normalization { None, L1, Softmax };
enum class Pooling { Max, Mean, Vote };

// How per-frame scores become one video-level answer.
struct AggregationSpec {
    Normalization normalization = Normalization::L1;
    Pooling pooling = Pooling::Max;
};

// Short names: "l1max", "softmaxmax", "softmaxmean", "mean", "max", "vote".
AggregationSpec aggregation_from_string(const std::string& s);
std::string to_string(const AggregationSpec& spec);
const char* to_string(Normalization n);
const char* to_string(Pooling p);

// One frame's answer distribution, raw and normalized.
struct FrameDecision {
    int segment_index = 0;
    TokenScoreMap raw;
    std::map<char, double> normalized;
    bool degenerate = false;  // all-zero input under L1, mapped to uniform
};

// L1 divides by the sum of absolute values over ALL letters (abstention included);
// Softmax exponentiates and divides by the sum; None is the identity.
// An all-zero map under L1 yields uniform 1/|T| and sets *degenerate.
std::map<char, double> normalize(const TokenScoreMap& raw, Normalization method,
                                 bool* degenerate = nullptr);

FrameDecision make_frame_decision(int segment_index, TokenScoreMap raw,
                                  Normalization method);

// Video-level answer plus the evidence it was derived from.
struct VideoDecision {
    int answer_index = 0;  // winning letter as an option index ('A' = 0)
    char winning_letter = 'A';
    std::vector<FrameDecision> per_frame;
    AggregationSpec spec;
    std::map<char, double> pooled;       // pooled per-letter value (vote counts for Vote)
    std::vector<CaptionRecord> captions; // context captions used, when any
    std::int64_t caption_calls = 0;      // backend calls actually made (cache misses)
    std::int64_t score_calls = 0;
};

// Pools already-normalized frame decisions. The abstention letter participates in
// normalization but is excluded from the final argmax and can never win. Ties in
// any argmax or plurality break toward the lowest letter.
VideoDecision pool(std::vector<FrameDecision> frames, const AggregationSpec& spec,
                   char abstention_letter);

// normalize + pool composed over raw per-frame score maps.
VideoDecision decide(const std::vector<std::pair<int, TokenScoreMap>>& raw_frames,
                     const AggregationSpec& spec, char abstention_letter);

}  // namespace vidctx
