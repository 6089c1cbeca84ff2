#include "vidctx/mock_backend.hpp"

#include <cmath>
#include <fstream>

#include "json_io.hpp"
#include "vidctx/digest.hpp"
#include "vidctx/errors.hpp"

namespace vidctx {

namespace {

std::string entry_key(const std::string& prompt_hash, const std::string& image_digest) {
    return prompt_hash + '\n' + image_digest;
}

}  // namespace

MockBackend::MockBackend(ScoreSource source, std::string model_id)
    : model_id_(std::move(model_id)), source_(source) {}

void MockBackend::script(const std::string& prompt_hash, const std::string& image_digest,
                         Entry entry) {
    entries_[entry_key(prompt_hash, image_digest)] = std::move(entry);
}

void MockBackend::script_prompt(const std::string& prompt_text,
                                const std::string& image_digest, Entry entry) {
    script(sha256_hex(prompt_text), image_digest, std::move(entry));
}

void MockBackend::add_rule(Rule rule) { rules_.push_back(std::move(rule)); }

const MockBackend::Entry* MockBackend::find_entry(const std::string& prompt,
                                                  const std::string& digest) const {
    auto it = entries_.find(entry_key(sha256_hex(prompt), digest));
    return it == entries_.end() ? nullptr : &it->second;
}

const MockBackend::Rule* MockBackend::find_rule(const std::string& prompt,
                                                const std::string& digest,
                                                bool scoring) const {
    for (const auto& rule : rules_) {
        if (scoring && !rule.scores) continue;
        if (!scoring && !rule.caption) continue;
        if (!rule.image_digest.empty() && rule.image_digest != digest) continue;
        if (prompt.find(rule.prompt_contains) == std::string::npos) continue;
        return &rule;
    }
    return nullptr;
}

void MockBackend::record(bool scoring, const std::string& prompt,
                         const std::string& digest) {
    std::lock_guard lock(log_mutex_);
    log_.push_back(Call{scoring, prompt, digest});
}

std::string MockBackend::generate_caption(const ImagePayload* image,
                                          const std::string& prompt, int max_tokens) {
    (void)max_tokens;
    const std::string digest = image ? image->digest : "";
    caption_calls_.fetch_add(1);
    record(false, prompt, digest);

    if (const Entry* entry = find_entry(prompt, digest); entry && entry->caption) {
        return *entry->caption;
    }
    if (const Rule* rule = find_rule(prompt, digest, /*scoring=*/false)) {
        return *rule->caption;
    }
    // unscripted: deterministic placeholder derived from the call's identity
    return "mock caption " + sha256_hex(digest + '\n' + prompt).substr(0, 12);
}

TokenScoreMap MockBackend::score_first_token(const ImagePayload* image,
                                             const std::string& prompt,
                                             const OptionTokenSet& letters) {
    const std::string digest = image ? image->digest : "";
    score_calls_.fetch_add(1);
    record(true, prompt, digest);

    const std::map<char, double>* planted = nullptr;
    if (const Entry* entry = find_entry(prompt, digest); entry && entry->scores) {
        planted = &*entry->scores;
    } else if (const Rule* rule = find_rule(prompt, digest, /*scoring=*/true)) {
        planted = &*rule->scores;
    }
    if (planted) {
        return complete_score_map(*planted, letters, source_);
    }

    // unscripted: uniform distribution over the letter set
    const double uniform = source_ == ScoreSource::LogProb
                               ? std::log(1.0 / static_cast<double>(letters.tokens.size()))
                               : 0.0;
    TokenScoreMap map;
    map.source = source_;
    for (char letter : letters.tokens) map.scores[letter] = uniform;
    return map;
}

void MockBackend::reset_counters() {
    caption_calls_.store(0);
    score_calls_.store(0);
    std::lock_guard lock(log_mutex_);
    log_.clear();
}

std::vector<MockBackend::Call> MockBackend::calls() const {
    std::lock_guard lock(log_mutex_);
    return log_;
}

std::shared_ptr<MockBackend> MockBackend::from_script_file(
    const std::filesystem::path& path, ScoreSource source, const std::string& model_id) {
    std::ifstream in(path);
    if (!in) {
        throw StorageError("mock script: cannot read " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InvalidArgument("mock script: parse error in " + path.string() + ": " +
                              e.what());
    }

    auto backend = std::make_shared<MockBackend>(source, model_id);
    if (j.contains("entries")) {
        for (const auto& e : j.at("entries")) {
            Entry entry;
            if (e.contains("caption")) entry.caption = e.at("caption").get<std::string>();
            if (e.contains("scores")) {
                entry.scores = jsonio::letter_map_from_json(e.at("scores"));
            }
            backend->script(e.at("prompt_hash").get<std::string>(),
                            e.value("image_digest", std::string()), std::move(entry));
        }
    }
    if (j.contains("rules")) {
        for (const auto& r : j.at("rules")) {
            Rule rule;
            rule.prompt_contains = r.at("prompt_contains").get<std::string>();
            rule.image_digest = r.value("image_digest", std::string());
            if (r.contains("caption")) rule.caption = r.at("caption").get<std::string>();
            if (r.contains("scores")) {
                rule.scores = jsonio::letter_map_from_json(r.at("scores"));
            }
            backend->add_rule(std::move(rule));
        }
    }
    return backend;
}

}  // namespace vidctx
