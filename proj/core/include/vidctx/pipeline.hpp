#pragma once

#include <atomic>
#include <memory>
#include <string>

#include "vidctx/aggregate.hpp"
#include "vidctx/backend.hpp"
#include "vidctx/cache.hpp"
#include "vidctx/datasets.hpp"
#include "vidctx/types.hpp"

namespace vidctx {

// What caption context, if any, each frame's question prompt carries.
enum class ContextStrategy { NoContext, CurrentCaption, DistantCaption, ConcatCaptions };

// "none" | "current" | "distant" | "concat" | "concat:K"
ContextStrategy context_strategy_from_string(const std::string& s, int* concat_k = nullptr);
std::string to_string(ContextStrategy s, int concat_k = 0);

struct PipelineConfig {
    int n_frames = 64;
    ContextStrategy context_strategy = ContextStrategy::DistantCaption;
    int concat_k = 16;  // ConcatCaptions only: captions kept in the single call
    CaptionMode caption_mode = CaptionMode::QuestionAware;
    bool captions_only = false;
    AggregationSpec aggregation;  // default L1 + Max
    BackendDescriptor backend;
    int concurrency_limit = 4;
    std::string cache_dir;  // empty = caching disabled
    DecoderOptions decoder;
};

// Throws InvalidArgument on violated invariants (n_frames < 1, concat_k out of
// range, captions_only without ConcatCaptions, ...).
void validate(const PipelineConfig& config);

// End-to-end orchestration per (video, question): sampling, captioning, context
// pairing, per-frame scoring, aggregation. Caption and scoring calls are cached
// by content digest and issued with bounded parallelism.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig config);
    // Injected backend (tests, shared instances); the descriptor is still used
    // for model id, token budgets and score source.
    Pipeline(PipelineConfig config, std::shared_ptr<Backend> backend);

    // Runs the full per-frame pipeline and aggregates the frame decisions.
    // Dispatches to run_captions_only when the config says so.
    VideoDecision run_question(const QAItem& item);

    // Captions every frame, concatenates all captions into one text-only scoring
    // call, returns a one-frame decision.
    VideoDecision run_captions_only(const QAItem& item);

    const PipelineConfig& config() const { return config_; }
    Backend& backend() { return *backend_; }
    CacheStore* cache() { return cache_.get(); }

private:
    std::vector<FrameSample> fetch_frames(const QAItem& item) const;
    std::vector<CaptionRecord> caption_frames(const QAItem& item,
                                              const std::vector<FrameSample>& frames,
                                              std::atomic<std::int64_t>* calls_made);
    TokenScoreMap score_prompt(const QAItem& item, const ImagePayload* image,
                               std::int64_t frame_index, const std::string& prompt,
                               const OptionTokenSet& letters,
                               std::atomic<std::int64_t>* calls_made);

    PipelineConfig config_;
    std::shared_ptr<Backend> backend_;
    std::unique_ptr<CacheStore> cache_;
};

}  // namespace vidctx
