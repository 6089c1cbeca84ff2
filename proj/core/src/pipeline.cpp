#include "vidctx/pipeline.hpp"

#include <atomic>

#include "vidctx/concurrency.hpp"
#include "vidctx/digest.hpp"
#include "vidctx/errors.hpp"
#include "vidctx/sampling.hpp"

namespace vidctx {

ContextStrategy context_strategy_from_string(const std::string& s, int* concat_k) {
    if (s == "none") return ContextStrategy::NoContext;
    if (s == "current") return ContextStrategy::CurrentCaption;
    if (s == "distant") return ContextStrategy::DistantCaption;
    if (s == "concat" || s.rfind("concat:", 0) == 0) {
        if (s.size() > 7) {
            int k = 0;
            try {
                std::size_t used = 0;
                k = std::stoi(s.substr(7), &used);
                if (used != s.size() - 7) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw InvalidArgument("bad concat count in context strategy '" + s + "'");
            }
            if (k < 1) {
                throw InvalidArgument("concat count must be >= 1 in '" + s + "'");
            }
            if (concat_k) *concat_k = k;
        }
        return ContextStrategy::ConcatCaptions;
    }
    throw InvalidArgument("unknown context strategy '" + s +
                          "' (expected none|current|distant|concat[:K])");
}

std::string to_string(ContextStrategy s, int concat_k) {
    switch (s) {
        case ContextStrategy::NoContext: return "none";
        case ContextStrategy::CurrentCaption: return "current";
        case ContextStrategy::DistantCaption: return "distant";
        case ContextStrategy::ConcatCaptions:
            return concat_k > 0 ? "concat:" + std::to_string(concat_k) : "concat";
    }
    return "unknown";
}

void validate(const PipelineConfig& config) {
    if (config.n_frames < 1) {
        throw InvalidArgument("n_frames must be >= 1, got " +
                              std::to_string(config.n_frames));
    }
    if (config.captions_only &&
        config.context_strategy != ContextStrategy::ConcatCaptions) {
        throw InvalidArgument("captions_only requires the concat context strategy");
    }
    if (!config.captions_only &&
        config.context_strategy == ContextStrategy::ConcatCaptions) {
        if (config.concat_k < 1 || config.concat_k > config.n_frames) {
            throw InvalidArgument("concat caption count " +
                                  std::to_string(config.concat_k) +
                                  " out of range [1, n_frames=" +
                                  std::to_string(config.n_frames) + "]");
        }
    }
    if (config.concurrency_limit < 1) {
        throw InvalidArgument("concurrency_limit must be >= 1");
    }
    if (config.backend.max_caption_tokens < 1) {
        throw InvalidArgument("max_caption_tokens must be >= 1");
    }
}

Pipeline::Pipeline(PipelineConfig config) : Pipeline(std::move(config), nullptr) {}

Pipeline::Pipeline(PipelineConfig config, std::shared_ptr<Backend> backend)
    : config_(std::move(config)) {
    validate(config_);
    backend_ = backend ? std::move(backend) : make_backend(config_.backend);
    if (!config_.cache_dir.empty()) {
        cache_ = std::make_unique<CacheStore>(config_.cache_dir);
    }
}

namespace {

void validate_item(const QAItem& item) {
    if (item.video.id.empty()) {
        throw InvalidArgument("question has no video id");
    }
    if (item.options.size() < 2 || item.options.size() > 5) {
        throw InvalidArgument("question must offer 2..5 options, got " +
                              std::to_string(item.options.size()));
    }
}

}  // namespace

std::vector<FrameSample> Pipeline::fetch_frames(const QAItem& item) const {
    VideoRef video = item.video;
    if (video.total_frames < 1) {
        video.total_frames = probe_total_frames(video, config_.decoder);
    }
    const auto indices = sample_frame_indices(video.total_frames, config_.n_frames);
    return extract_frames(video, indices, config_.decoder);
}

std::vector<CaptionRecord> Pipeline::caption_frames(
    const QAItem& item, const std::vector<FrameSample>& frames,
    std::atomic<std::int64_t>* calls_made) {
    const std::string prompt = build_caption_prompt(item.question, config_.caption_mode);
    const std::string prompt_hash = sha256_hex(prompt);
    const int max_tokens = config_.backend.max_caption_tokens;

    std::vector<CaptionRecord> records(frames.size());
    parallel_for(frames.size(), config_.concurrency_limit, [&](std::size_t i) {
        const FrameSample& frame = frames[i];
        const std::string key =
            caption_cache_key(item.video.id, frame.frame_index, prompt,
                              backend_->model_id(), max_tokens);
        if (cache_) {
            if (auto hit = cache_->get_caption(key)) {
                records[i] = std::move(*hit);
                return;
            }
        }
        CaptionRecord record;
        record.video_id = item.video.id;
        record.segment_index = frame.segment_index;
        record.frame_index = frame.frame_index;
        record.caption_mode = config_.caption_mode;
        record.prompt_hash = prompt_hash;
        record.model_id = backend_->model_id();
        record.text = backend_->generate_caption(frame.image.get(), prompt, max_tokens);
        calls_made->fetch_add(1);
        if (cache_) cache_->put_caption(key, record);
        records[i] = std::move(record);
    });
    return records;
}

TokenScoreMap Pipeline::score_prompt(const QAItem& item, const ImagePayload* image,
                                     std::int64_t frame_index, const std::string& prompt,
                                     const OptionTokenSet& letters,
                                     std::atomic<std::int64_t>* calls_made) {
    const std::string key = score_cache_key(item.video.id, frame_index, prompt,
                                            backend_->model_id(), letters);
    if (cache_) {
        if (auto hit = cache_->get_scores(key)) return *hit;
    }
    TokenScoreMap scores = backend_->score_first_token(image, prompt, letters);
    calls_made->fetch_add(1);
    if (cache_) cache_->put_scores(key, scores);
    return scores;
}

VideoDecision Pipeline::run_question(const QAItem& item) {
    validate_item(item);
    if (config_.captions_only) {
        return run_captions_only(item);
    }

    const int n = config_.n_frames;
    ContextStrategy strategy = config_.context_strategy;
    if (strategy == ContextStrategy::DistantCaption && n == 1) {
        // a single segment has no distant counterpart
        strategy = ContextStrategy::NoContext;
    }

    const std::vector<FrameSample> frames = fetch_frames(item);
    const OptionTokenSet letters =
        option_token_set(static_cast<int>(item.options.size()));

    std::atomic<std::int64_t> caption_calls{0};
    std::atomic<std::int64_t> score_calls{0};

    std::vector<CaptionRecord> captions;
    if (strategy != ContextStrategy::NoContext) {
        captions = caption_frames(item, frames, &caption_calls);
    }

    std::vector<std::pair<int, TokenScoreMap>> raw;
    if (strategy == ContextStrategy::ConcatCaptions) {
        const int k = config_.concat_k;
        std::vector<std::string> subset;
        subset.reserve(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) {
            subset.push_back(captions[static_cast<std::size_t>(j) *
                                      static_cast<std::size_t>(n) /
                                      static_cast<std::size_t>(k)]
                                 .text);
        }
        const std::string prompt =
            build_concat_prompt(item.question, item.options, subset);
        // the single call carries the central sampled frame as its visual input
        const FrameSample& attach = frames[static_cast<std::size_t>(n / 2)];
        raw.emplace_back(attach.segment_index,
                         score_prompt(item, attach.image.get(), attach.frame_index,
                                      prompt, letters, &score_calls));
    } else {
        raw.resize(frames.size());
        parallel_for(frames.size(), config_.concurrency_limit, [&](std::size_t i) {
            std::string prompt;
            switch (strategy) {
                case ContextStrategy::NoContext:
                    prompt = build_vqa_prompt(item.question, item.options, std::nullopt);
                    break;
                case ContextStrategy::CurrentCaption:
                    prompt = build_vqa_prompt_current_frame(item.question, item.options,
                                                            captions[i].text);
                    break;
                case ContextStrategy::DistantCaption: {
                    const int distant = distant_index(static_cast<int>(i), n);
                    prompt = build_vqa_prompt(
                        item.question, item.options,
                        std::make_pair(captions[static_cast<std::size_t>(distant)].text,
                                       temporal_specifier(static_cast<int>(i), n)));
                    break;
                }
                case ContextStrategy::ConcatCaptions:
                    break;  // handled above
            }
            raw[i] = {frames[i].segment_index,
                      score_prompt(item, frames[i].image.get(), frames[i].frame_index,
                                   prompt, letters, &score_calls)};
        });
    }

    VideoDecision decision = decide(raw, config_.aggregation, letters.abstention);
    decision.captions = std::move(captions);
    decision.caption_calls = caption_calls.load();
    decision.score_calls = score_calls.load();
    return decision;
}

VideoDecision Pipeline::run_captions_only(const QAItem& item) {
    validate_item(item);

    const std::vector<FrameSample> frames = fetch_frames(item);
    const OptionTokenSet letters =
        option_token_set(static_cast<int>(item.options.size()));

    std::atomic<std::int64_t> caption_calls{0};
    std::atomic<std::int64_t> score_calls{0};

    std::vector<CaptionRecord> captions = caption_frames(item, frames, &caption_calls);
    std::vector<std::string> texts;
    texts.reserve(captions.size());
    for (const auto& record : captions) texts.push_back(record.text);

    const std::string prompt = build_concat_prompt(item.question, item.options, texts);
    // one text-only call for the whole video; -1 marks the imageless call
    TokenScoreMap scores = score_prompt(item, nullptr, -1, prompt, letters, &score_calls);

    std::vector<std::pair<int, TokenScoreMap>> raw;
    raw.emplace_back(0, std::move(scores));

    VideoDecision decision = decide(raw, config_.aggregation, letters.abstention);
    decision.captions = std::move(captions);
    decision.caption_calls = caption_calls.load();
    decision.score_calls = score_calls.load();
    return decision;
}

}  // namespace vidctx
