#include "vidctx/cache.hpp"

#include <mutex>
#include <system_error>

#include "json_io.hpp"
#include "vidctx/digest.hpp"
#include "vidctx/errors.hpp"

namespace vidctx {

namespace {

// Components are length-prefixed so no two distinct tuples share a byte string.
void append_component(std::string* buffer, std::string_view component) {
    *buffer += std::to_string(component.size());
    *buffer += ':';
    *buffer += component;
}

}  // namespace

std::string caption_cache_key(const std::string& video_id, std::int64_t frame_index,
                              const std::string& prompt, const std::string& model_id,
                              int max_tokens) {
    std::string buffer = "caption/";
    append_component(&buffer, video_id);
    append_component(&buffer, std::to_string(frame_index));
    append_component(&buffer, prompt);
    append_component(&buffer, model_id);
    append_component(&buffer, std::to_string(max_tokens));
    return sha256_hex(buffer);
}

std::string score_cache_key(const std::string& video_id, std::int64_t frame_index,
                            const std::string& prompt, const std::string& model_id,
                            const OptionTokenSet& letters) {
    std::string buffer = "score/";
    append_component(&buffer, video_id);
    append_component(&buffer, std::to_string(frame_index));
    append_component(&buffer, prompt);
    append_component(&buffer, model_id);
    append_component(&buffer, std::string(letters.tokens.begin(), letters.tokens.end()));
    return sha256_hex(buffer);
}

CacheStore::CacheStore(const std::filesystem::path& dir) : dir_(dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) {
        throw StorageError("cache: cannot create directory " + dir_.string() + ": " +
                           ec.message());
    }

    auto load = [&](const char* name, auto&& handle_line) {
        const auto path = dir_ / name;
        if (!std::filesystem::exists(path)) return;
        std::ifstream in(path);
        if (!in) {
            throw StorageError("cache: cannot read " + path.string());
        }
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                handle_line(nlohmann::json::parse(line));
            } catch (const std::exception&) {
                // corrupt line: only that record is lost
            }
        }
    };

    load(kCaptionsFile, [&](const nlohmann::json& j) {
        captions_[j.at("key").get<std::string>()] =
            jsonio::caption_record_from_json(j.at("record"));
    });
    load(kScoresFile, [&](const nlohmann::json& j) {
        scores_[j.at("key").get<std::string>()] =
            jsonio::token_scores_from_json(j.at("record"));
    });

    captions_out_.open(dir_ / kCaptionsFile, std::ios::app);
    scores_out_.open(dir_ / kScoresFile, std::ios::app);
    if (!captions_out_ || !scores_out_) {
        throw StorageError("cache: cannot open cache files for append in " +
                           dir_.string());
    }
}

std::optional<CaptionRecord> CacheStore::get_caption(const std::string& key) const {
    std::shared_lock lock(mutex_);
    auto it = captions_.find(key);
    if (it == captions_.end()) return std::nullopt;
    return it->second;
}

void CacheStore::append_line(std::ofstream& out, const std::string& line,
                             const std::filesystem::path& file) {
    out << line << '\n';
    out.flush();
    if (!out) {
        throw StorageError("cache: write failed for " + file.string());
    }
}

void CacheStore::put_caption(const std::string& key, const CaptionRecord& record) {
    jsonio::ordered_json j;
    j["key"] = key;
    j["record"] = jsonio::caption_record_to_json(record);
    std::unique_lock lock(mutex_);
    append_line(captions_out_, j.dump(), dir_ / kCaptionsFile);
    captions_[key] = record;
}

std::optional<TokenScoreMap> CacheStore::get_scores(const std::string& key) const {
    std::shared_lock lock(mutex_);
    auto it = scores_.find(key);
    if (it == scores_.end()) return std::nullopt;
    return it->second;
}

void CacheStore::put_scores(const std::string& key, const TokenScoreMap& scores) {
    jsonio::ordered_json j;
    j["key"] = key;
    j["record"] = jsonio::token_scores_to_json(scores);
    std::unique_lock lock(mutex_);
    append_line(scores_out_, j.dump(), dir_ / kScoresFile);
    scores_[key] = scores;
}

std::size_t CacheStore::caption_count() const {
    std::shared_lock lock(mutex_);
    return captions_.size();
}

std::size_t CacheStore::score_count() const {
    std::shared_lock lock(mutex_);
    return scores_.size();
}

}  // namespace vidctx
