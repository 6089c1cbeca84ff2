#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "vidctx/scores.hpp"
#include "vidctx/types.hpp"

namespace vidctx {

// Content-addressed keys: any differing component yields a distinct digest.
std::string caption_cache_key(const std::string& video_id, std::int64_t frame_index,
                              const std::string& prompt, const std::string& model_id,
                              int max_tokens);
std::string score_cache_key(const std::string& video_id, std::int64_t frame_index,
                            const std::string& prompt, const std::string& model_id,
                            const OptionTokenSet& letters);

// Append-only JSONL store, one file per record type (captions.jsonl, scores.jsonl),
// one JSON object per line keyed by hex digest. Records survive process restarts;
// a corrupt line invalidates only itself. Writes are serialized; reads hit the
// in-memory index.
class CacheStore {
public:
    explicit CacheStore(const std::filesystem::path& dir);

    std::optional<CaptionRecord> get_caption(const std::string& key) const;
    void put_caption(const std::string& key, const CaptionRecord& record);

    std::optional<TokenScoreMap> get_scores(const std::string& key) const;
    void put_scores(const std::string& key, const TokenScoreMap& scores);

    std::size_t caption_count() const;
    std::size_t score_count() const;
    const std::filesystem::path& dir() const { return dir_; }

    static constexpr const char* kCaptionsFile = "captions.jsonl";
    static constexpr const char* kScoresFile = "scores.jsonl";

private:
    void append_line(std::ofstream& out, const std::string& line,
                     const std::filesystem::path& file);

    std::filesystem::path dir_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, CaptionRecord> captions_;
    std::unordered_map<std::string, TokenScoreMap> scores_;
    std::ofstream captions_out_;
    std::ofstream scores_out_;
};

}  // namespace vidctx
