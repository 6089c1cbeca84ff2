#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vidctx/backend.hpp"

namespace vidctx {

// Deterministic scripted stand-in for the remote model.
//
// Lookup order per call: exact (prompt-hash, image-digest) entry, then the first
// substring rule that matches, then the fallback (hash-derived caption, uniform
// scores). Identical inputs always produce identical outputs.
class MockBackend : public Backend {
public:
    struct Entry {
        std::optional<std::string> caption;
        std::optional<std::map<char, double>> scores;
    };

    struct Rule {
        std::string prompt_contains;
        std::string image_digest;  // empty = any image (or none)
        std::optional<std::string> caption;
        std::optional<std::map<char, double>> scores;
    };

    // Every call the backend has served, in order.
    struct Call {
        bool scoring = false;
        std::string prompt;
        std::string image_digest;  // empty when no image was attached
    };

    explicit MockBackend(ScoreSource source = ScoreSource::LogProb,
                         std::string model_id = "mock");

    // Scripts an exact (prompt-hash, image-digest) key.
    void script(const std::string& prompt_hash, const std::string& image_digest,
                Entry entry);
    // Convenience: hashes the prompt text for you.
    void script_prompt(const std::string& prompt_text, const std::string& image_digest,
                       Entry entry);
    void add_rule(Rule rule);

    // Loads entries and rules from a JSON script file (see README for the schema).
    static std::shared_ptr<MockBackend> from_script_file(
        const std::filesystem::path& path, ScoreSource source,
        const std::string& model_id);

    std::string generate_caption(const ImagePayload* image, const std::string& prompt,
                                 int max_tokens) override;
    TokenScoreMap score_first_token(const ImagePayload* image, const std::string& prompt,
                                    const OptionTokenSet& letters) override;
    const std::string& model_id() const override { return model_id_; }

    std::int64_t caption_calls() const { return caption_calls_.load(); }
    std::int64_t score_calls() const { return score_calls_.load(); }
    std::int64_t total_calls() const { return caption_calls() + score_calls(); }
    void reset_counters();

    std::vector<Call> calls() const;

private:
    const Entry* find_entry(const std::string& prompt, const std::string& digest) const;
    const Rule* find_rule(const std::string& prompt, const std::string& digest,
                          bool scoring) const;
    void record(bool scoring, const std::string& prompt, const std::string& digest);

    std::string model_id_;
    ScoreSource source_;
    std::unordered_map<std::string, Entry> entries_;  // key: prompt_hash + '\n' + digest
    std::vector<Rule> rules_;
    std::atomic<std::int64_t> caption_calls_{0};
    std::atomic<std::int64_t> score_calls_{0};
    mutable std::mutex log_mutex_;
    std::vector<Call> log_;
};

}  // namespace vidctx
