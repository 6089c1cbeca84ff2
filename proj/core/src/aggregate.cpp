#include "vidctx/aggregate.hpp"

#include <algorithm>
#include <cmath>

#include "vidctx/errors.hpp"

namespace vidctx {

const char* to_string(Normalization n) {
    switch (n) {
        case Normalization::None: return "none";
        case Normalization::L1: return "l1";
        case Normalization::Softmax: return "softmax";
    }
    return "unknown";
}

const char* to_string(Pooling p) {
    switch (p) {
        case Pooling::Max: return "max";
        case Pooling::Mean: return "mean";
        case Pooling::Vote: return "vote";
    }
    return "unknown";
}

AggregationSpec aggregation_from_string(const std::string& s) {
    if (s == "l1max") return {Normalization::L1, Pooling::Max};
    if (s == "softmaxmax") return {Normalization::Softmax, Pooling::Max};
    if (s == "softmaxmean") return {Normalization::Softmax, Pooling::Mean};
    if (s == "max") return {Normalization::None, Pooling::Max};
    if (s == "mean") return {Normalization::None, Pooling::Mean};
    if (s == "vote") return {Normalization::None, Pooling::Vote};
    throw InvalidArgument(
        "unknown aggregation '" + s +
        "' (expected l1max|softmaxmax|softmaxmean|max|mean|vote)");
}

std::string to_string(const AggregationSpec& spec) {
    if (spec.normalization == Normalization::L1 && spec.pooling == Pooling::Max)
        return "l1max";
    if (spec.normalization == Normalization::Softmax && spec.pooling == Pooling::Max)
        return "softmaxmax";
    if (spec.normalization == Normalization::Softmax && spec.pooling == Pooling::Mean)
        return "softmaxmean";
    if (spec.normalization == Normalization::None) {
        if (spec.pooling == Pooling::Max) return "max";
        if (spec.pooling == Pooling::Mean) return "mean";
        if (spec.pooling == Pooling::Vote) return "vote";
    }
    return std::string(to_string(spec.normalization)) + "+" + to_string(spec.pooling);
}

std::map<char, double> normalize(const TokenScoreMap& raw, Normalization method,
                                 bool* degenerate) {
    if (degenerate) *degenerate = false;
    if (raw.scores.empty()) {
        throw InvalidArgument("normalize: empty score map");
    }
    for (const auto& [letter, value] : raw.scores) {
        if (!std::isfinite(value)) {
            throw InvalidArgument(std::string("normalize: non-finite score for letter ") +
                                  letter);
        }
    }

    std::map<char, double> out;
    switch (method) {
        case Normalization::None:
            out = raw.scores;
            break;
        case Normalization::L1: {
            double denom = 0.0;
            for (const auto& [letter, value] : raw.scores) denom += std::fabs(value);
            if (denom == 0.0) {
                // all-zero input: fall back to uniform rather than divide by zero
                if (degenerate) *degenerate = true;
                const double uniform = 1.0 / static_cast<double>(raw.scores.size());
                for (const auto& [letter, value] : raw.scores) out[letter] = uniform;
            } else {
                for (const auto& [letter, value] : raw.scores) out[letter] = value / denom;
            }
            break;
        }
        case Normalization::Softmax: {
            double highest = raw.scores.begin()->second;
            for (const auto& [letter, value] : raw.scores)
                highest = std::max(highest, value);
            double denom = 0.0;
            for (const auto& [letter, value] : raw.scores)
                denom += std::exp(value - highest);
            for (const auto& [letter, value] : raw.scores)
                out[letter] = std::exp(value - highest) / denom;
            break;
        }
    }
    return out;
}

FrameDecision make_frame_decision(int segment_index, TokenScoreMap raw,
                                  Normalization method) {
    FrameDecision decision;
    decision.segment_index = segment_index;
    decision.normalized = normalize(raw, method, &decision.degenerate);
    decision.raw = std::move(raw);
    return decision;
}

namespace {

// Letters iterate in map order (ascending), so keeping the first strict maximum
// breaks ties toward the lowest letter.
char argmax_excluding(const std::map<char, double>& values, char abstention) {
    char best = 0;
    double best_value = 0.0;
    for (const auto& [letter, value] : values) {
        if (letter == abstention) continue;
        if (best == 0 || value > best_value) {
            best = letter;
            best_value = value;
        }
    }
    if (best == 0) {
        throw InvalidArgument("pool: no non-abstention letters to choose from");
    }
    return best;
}

}  // namespace

VideoDecision pool(std::vector<FrameDecision> frames, const AggregationSpec& spec,
                   char abstention_letter) {
    if (frames.empty()) {
        throw InvalidArgument("pool: empty frame list");
    }
    const auto& reference = frames.front().normalized;
    if (reference.find(abstention_letter) == reference.end()) {
        throw InvalidArgument(std::string("pool: abstention letter ") +
                              abstention_letter + " missing from score maps");
    }
    for (const auto& frame : frames) {
        if (frame.normalized.size() != reference.size()) {
            throw InvalidArgument("pool: inconsistent letter sets across frames");
        }
        for (const auto& [letter, value] : frame.normalized) {
            if (reference.find(letter) == reference.end()) {
                throw InvalidArgument("pool: inconsistent letter sets across frames");
            }
        }
    }

    std::map<char, double> pooled;
    switch (spec.pooling) {
        case Pooling::Max:
            for (const auto& [letter, value] : reference) {
                if (letter == abstention_letter) continue;
                double best = frames.front().normalized.at(letter);
                for (const auto& frame : frames)
                    best = std::max(best, frame.normalized.at(letter));
                pooled[letter] = best;
            }
            break;
        case Pooling::Mean:
            for (const auto& [letter, value] : reference) {
                if (letter == abstention_letter) continue;
                double sum = 0.0;
                for (const auto& frame : frames) sum += frame.normalized.at(letter);
                pooled[letter] = sum / static_cast<double>(frames.size());
            }
            break;
        case Pooling::Vote:
            for (const auto& [letter, value] : reference) {
                if (letter == abstention_letter) continue;
                pooled[letter] = 0.0;
            }
            for (const auto& frame : frames) {
                pooled[argmax_excluding(frame.normalized, abstention_letter)] += 1.0;
            }
            break;
    }

    VideoDecision decision;
    decision.winning_letter = argmax_excluding(pooled, abstention_letter);
    decision.answer_index = decision.winning_letter - 'A';
    decision.per_frame = std::move(frames);
    decision.spec = spec;
    decision.pooled = std::move(pooled);
    return decision;
}

VideoDecision decide(const std::vector<std::pair<int, TokenScoreMap>>& raw_frames,
                     const AggregationSpec& spec, char abstention_letter) {
    std::vector<FrameDecision> frames;
    frames.reserve(raw_frames.size());
    for (const auto& [segment_index, raw] : raw_frames) {
        frames.push_back(make_frame_decision(segment_index, raw, spec.normalization));
    }
    return pool(std::move(frames), spec, abstention_letter);
}

}  // namespace vidctx
