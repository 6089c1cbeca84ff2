#include "json_io.hpp"

#include "vidctx/errors.hpp"

namespace vidctx::jsonio {

namespace {

char letter_from_key(const std::string& key) {
    if (key.size() != 1 || key[0] < 'A' || key[0] > 'Z') {
        throw InvalidArgument("bad option letter key '" + key + "'");
    }
    return key[0];
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    return it->get<T>();
}

}  // namespace

ordered_json letter_map_to_json(const std::map<char, double>& map) {
    ordered_json out = ordered_json::object();
    for (const auto& [letter, value] : map) {
        out[std::string(1, letter)] = value;
    }
    return out;
}

std::map<char, double> letter_map_from_json(const nlohmann::json& j) {
    std::map<char, double> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        out[letter_from_key(it.key())] = it.value().get<double>();
    }
    return out;
}

ordered_json token_scores_to_json(const TokenScoreMap& map) {
    ordered_json out;
    out["scores"] = letter_map_to_json(map.scores);
    out["score_source"] = to_string(map.source);
    return out;
}

TokenScoreMap token_scores_from_json(const nlohmann::json& j) {
    TokenScoreMap map;
    map.scores = letter_map_from_json(j.at("scores"));
    map.source = score_source_from_string(j.at("score_source").get<std::string>());
    return map;
}

ordered_json caption_record_to_json(const CaptionRecord& record) {
    ordered_json out;
    out["video_id"] = record.video_id;
    out["segment_index"] = record.segment_index;
    out["frame_index"] = record.frame_index;
    out["caption_mode"] = to_string(record.caption_mode);
    out["prompt_hash"] = record.prompt_hash;
    out["model_id"] = record.model_id;
    out["text"] = record.text;
    return out;
}

CaptionRecord caption_record_from_json(const nlohmann::json& j) {
    CaptionRecord record;
    record.video_id = j.at("video_id").get<std::string>();
    record.segment_index = j.at("segment_index").get<int>();
    record.frame_index = j.at("frame_index").get<std::int64_t>();
    record.caption_mode =
        caption_mode_from_string(j.at("caption_mode").get<std::string>());
    record.prompt_hash = j.at("prompt_hash").get<std::string>();
    record.model_id = j.at("model_id").get<std::string>();
    record.text = j.at("text").get<std::string>();
    return record;
}

ordered_json decision_to_json(const VideoDecision& decision) {
    ordered_json out;
    out["answer_index"] = decision.answer_index;
    out["winning_letter"] = std::string(1, decision.winning_letter);
    out["aggregation"] = to_string(decision.spec);
    out["pooled"] = letter_map_to_json(decision.pooled);
    ordered_json frames = ordered_json::array();
    for (const auto& frame : decision.per_frame) {
        ordered_json f;
        f["segment_index"] = frame.segment_index;
        f["raw"] = letter_map_to_json(frame.raw.scores);
        f["score_source"] = to_string(frame.raw.source);
        f["normalized"] = letter_map_to_json(frame.normalized);
        f["degenerate"] = frame.degenerate;
        frames.push_back(std::move(f));
    }
    out["frames"] = std::move(frames);
    ordered_json captions = ordered_json::array();
    for (const auto& record : decision.captions) {
        captions.push_back(caption_record_to_json(record));
    }
    out["captions"] = std::move(captions);
    out["caption_calls"] = decision.caption_calls;
    out["score_calls"] = decision.score_calls;
    return out;
}

ordered_json pipeline_config_to_json(const PipelineConfig& config) {
    ordered_json out;
    out["n_frames"] = config.n_frames;
    out["context_strategy"] = to_string(config.context_strategy, config.concat_k);
    out["caption_mode"] = to_string(config.caption_mode);
    out["captions_only"] = config.captions_only;
    ordered_json agg;
    agg["normalization"] = to_string(config.aggregation.normalization);
    agg["pooling"] = to_string(config.aggregation.pooling);
    out["aggregation"] = std::move(agg);
    ordered_json backend;
    backend["kind"] = to_string(config.backend.kind);
    backend["endpoint"] = config.backend.endpoint;
    backend["model_id"] = config.backend.model_id;
    backend["max_caption_tokens"] = config.backend.max_caption_tokens;
    backend["request_timeout_ms"] = config.backend.request_timeout.count();
    backend["retry_limit"] = config.backend.retry_limit;
    backend["retry_backoff_ms"] = config.backend.retry_backoff.count();
    backend["max_in_flight"] = config.backend.max_in_flight;
    backend["top_logprobs"] = config.backend.top_logprobs;
    backend["score_source"] = to_string(config.backend.score_source);
    backend["api_key_env"] = config.backend.api_key_env;
    if (!config.backend.mock_script_path.empty()) {
        backend["mock_script"] = config.backend.mock_script_path;
    }
    out["backend"] = std::move(backend);
    out["concurrency_limit"] = config.concurrency_limit;
    out["cache_dir"] = config.cache_dir;
    ordered_json decoder;
    decoder["command"] = config.decoder.command;
    decoder["probe_command"] = config.decoder.probe_command;
    decoder["frame_format"] = config.decoder.frame_format;
    out["decoder"] = std::move(decoder);
    return out;
}

void pipeline_config_from_json(const nlohmann::json& j, PipelineConfig* config) {
    config->n_frames = get_or(j, "n_frames", config->n_frames);
    if (j.contains("context_strategy")) {
        config->context_strategy = context_strategy_from_string(
            j.at("context_strategy").get<std::string>(), &config->concat_k);
    }
    if (j.contains("caption_mode")) {
        config->caption_mode =
            caption_mode_from_string(j.at("caption_mode").get<std::string>());
    }
    config->captions_only = get_or(j, "captions_only", config->captions_only);
    if (j.contains("aggregation")) {
        const auto& agg = j.at("aggregation");
        if (agg.is_string()) {
            config->aggregation = aggregation_from_string(agg.get<std::string>());
        } else {
            AggregationSpec spec;
            const std::string norm = agg.at("normalization").get<std::string>();
            if (norm == "none") spec.normalization = Normalization::None;
            else if (norm == "l1") spec.normalization = Normalization::L1;
            else if (norm == "softmax") spec.normalization = Normalization::Softmax;
            else throw InvalidArgument("unknown normalization '" + norm + "'");
            const std::string pool = agg.at("pooling").get<std::string>();
            if (pool == "max") spec.pooling = Pooling::Max;
            else if (pool == "mean") spec.pooling = Pooling::Mean;
            else if (pool == "vote") spec.pooling = Pooling::Vote;
            else throw InvalidArgument("unknown pooling '" + pool + "'");
            config->aggregation = spec;
        }
    }
    if (j.contains("backend")) {
        const auto& b = j.at("backend");
        BackendDescriptor& desc = config->backend;
        if (b.contains("kind")) {
            desc.kind = backend_kind_from_string(b.at("kind").get<std::string>());
        }
        desc.endpoint = get_or<std::string>(b, "endpoint", desc.endpoint);
        desc.model_id = get_or<std::string>(b, "model_id", desc.model_id);
        desc.max_caption_tokens = get_or(b, "max_caption_tokens", desc.max_caption_tokens);
        desc.request_timeout = std::chrono::milliseconds(
            get_or<std::int64_t>(b, "request_timeout_ms", desc.request_timeout.count()));
        desc.retry_limit = get_or(b, "retry_limit", desc.retry_limit);
        desc.retry_backoff = std::chrono::milliseconds(
            get_or<std::int64_t>(b, "retry_backoff_ms", desc.retry_backoff.count()));
        desc.max_in_flight = get_or(b, "max_in_flight", desc.max_in_flight);
        desc.top_logprobs = get_or(b, "top_logprobs", desc.top_logprobs);
        if (b.contains("score_source")) {
            desc.score_source =
                score_source_from_string(b.at("score_source").get<std::string>());
        }
        desc.api_key_env = get_or<std::string>(b, "api_key_env", desc.api_key_env);
        desc.mock_script_path = get_or<std::string>(b, "mock_script", desc.mock_script_path);
    }
    config->concurrency_limit = get_or(j, "concurrency_limit", config->concurrency_limit);
    config->cache_dir = get_or<std::string>(j, "cache_dir", config->cache_dir);
    if (j.contains("decoder")) {
        const auto& d = j.at("decoder");
        config->decoder.command = get_or<std::string>(d, "command", config->decoder.command);
        config->decoder.probe_command =
            get_or<std::string>(d, "probe_command", config->decoder.probe_command);
        config->decoder.frame_format =
            get_or<std::string>(d, "frame_format", config->decoder.frame_format);
    }
}

ordered_json dataset_to_json(const DatasetDescriptor& desc) {
    ordered_json out;
    out["kind"] = to_string(desc.kind);
    out["annotation_path"] = desc.annotation_path;
    out["video_root"] = desc.video_root;
    out["category_field_name"] = desc.category_field_name;
    out["delimiter"] = std::string(1, desc.delimiter);
    ordered_json columns;
    columns["video"] = desc.columns.video;
    columns["question"] = desc.columns.question;
    columns["answers"] = desc.columns.answers;
    columns["gold"] = desc.columns.gold;
    columns["qid"] = desc.columns.qid;
    columns["frame_count"] = desc.columns.frame_count;
    out["columns"] = std::move(columns);
    return out;
}

void dataset_from_json(const nlohmann::json& j, DatasetDescriptor* desc) {
    if (j.contains("kind")) {
        desc->kind = dataset_kind_from_string(j.at("kind").get<std::string>());
    }
    desc->annotation_path = get_or<std::string>(j, "annotation_path", desc->annotation_path);
    desc->video_root = get_or<std::string>(j, "video_root", desc->video_root);
    desc->category_field_name =
        get_or<std::string>(j, "category_field_name", desc->category_field_name);
    if (j.contains("delimiter")) {
        const std::string d = j.at("delimiter").get<std::string>();
        if (d.size() != 1) throw InvalidArgument("delimiter must be one character");
        desc->delimiter = d[0];
    }
    if (j.contains("columns")) {
        const auto& c = j.at("columns");
        desc->columns.video = get_or<std::string>(c, "video", desc->columns.video);
        desc->columns.question = get_or<std::string>(c, "question", desc->columns.question);
        if (c.contains("answers")) {
            desc->columns.answers = c.at("answers").get<std::vector<std::string>>();
        }
        desc->columns.gold = get_or<std::string>(c, "gold", desc->columns.gold);
        desc->columns.qid = get_or<std::string>(c, "qid", desc->columns.qid);
        desc->columns.frame_count =
            get_or<std::string>(c, "frame_count", desc->columns.frame_count);
    }
}

ordered_json report_to_json(const ScoreReport& report) {
    ordered_json out;
    ordered_json categories = ordered_json::array();
    for (const auto& row : report.categories) {
        ordered_json c;
        c["category"] = row.category;
        c["correct"] = row.correct;
        c["total"] = row.total;
        c["accuracy_pct"] = row.accuracy_pct();
        categories.push_back(std::move(c));
    }
    out["categories"] = std::move(categories);
    out["correct"] = report.correct;
    out["total"] = report.total;
    out["accuracy_pct"] = report.accuracy_pct();
    return out;
}

}  // namespace vidctx::jsonio
