#include "vidctx/harness.hpp"

#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json_io.hpp"
#include "vidctx/errors.hpp"

namespace fs = std::filesystem;

namespace vidctx {

namespace {

std::int64_t resolve_timestamp(const EvalOptions& options) {
    if (options.timestamp_epoch) return *options.timestamp_epoch;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env != '\0') {
        try {
            return std::stoll(env);
        } catch (const std::exception&) {
            // fall through to wall clock
        }
    }
    return static_cast<std::int64_t>(std::time(nullptr));
}

std::string iso8601_utc(std::int64_t epoch) {
    std::time_t t = static_cast<std::time_t>(epoch);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw StorageError("cannot write " + path.string());
    }
    out << content;
    out.flush();
    if (!out) {
        throw StorageError("write failed for " + path.string());
    }
}

jsonio::ordered_json question_line(std::size_t index, const QAItem& item,
                                   const VideoDecision& decision, bool correct) {
    jsonio::ordered_json line;
    line["type"] = "question";
    line["index"] = index;
    line["qid"] = item.qid;
    line["video_id"] = item.video.id;
    line["question"] = item.question;
    line["options"] = item.options;
    if (item.answer_index) {
        line["gold_index"] = *item.answer_index;
    } else {
        line["gold_index"] = nullptr;
    }
    line["category"] = item.category;
    line["predicted_index"] = decision.answer_index;
    line["correct"] = correct;
    line["decision"] = jsonio::decision_to_json(decision);
    return line;
}

std::string sanitize_label(const std::string& label) {
    std::string out;
    for (char c : label) {
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '-');
    }
    return out;
}

}  // namespace

EvalOutcome evaluate_dataset(const DatasetDescriptor& desc, const PipelineConfig& config,
                             const EvalOptions& options,
                             std::shared_ptr<Backend> backend) {
    validate(config);
    std::vector<QAItem> items = load_dataset(desc);
    if (options.limit >= 0 &&
        items.size() > static_cast<std::size_t>(options.limit)) {
        items.resize(static_cast<std::size_t>(options.limit));
    }

    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) {
        throw StorageError("cannot create output directory " +
                           options.out_dir.string() + ": " + ec.message());
    }

    Pipeline pipeline = backend ? Pipeline(config, std::move(backend))
                                : Pipeline(config);

    EvalOutcome outcome;
    outcome.manifest_path = options.out_dir / "manifest.jsonl";
    outcome.report_txt_path = options.out_dir / "report.txt";
    outcome.report_json_path = options.out_dir / "report.json";

    std::ofstream manifest(outcome.manifest_path, std::ios::binary | std::ios::trunc);
    if (!manifest) {
        throw StorageError("cannot write " + outcome.manifest_path.string());
    }

    {
        jsonio::ordered_json header;
        header["type"] = "run";
        header["timestamp"] = iso8601_utc(resolve_timestamp(options));
        header["config"] = jsonio::pipeline_config_to_json(config);
        header["dataset"] = jsonio::dataset_to_json(desc);
        header["questions"] = items.size();
        manifest << header.dump() << '\n';
        manifest.flush();
    }

    const std::size_t count = items.size();
    std::vector<std::optional<VideoDecision>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    std::vector<bool> done(count, false);
    std::mutex mutex;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};

    const std::size_t workers = std::min<std::size_t>(
        count, static_cast<std::size_t>(std::max(1, options.question_concurrency)));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                if (stop.load()) return;
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    slots[i] = pipeline.run_question(items[i]);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
                {
                    std::lock_guard lock(mutex);
                    done[i] = true;
                }
                cv.notify_all();
            }
        });
    }

    // flush manifest lines strictly in dataset order
    std::exception_ptr failure;
    for (std::size_t i = 0; i < count; ++i) {
        {
            std::unique_lock lock(mutex);
            cv.wait(lock, [&]() { return done[i]; });
        }
        if (errors[i]) {
            failure = errors[i];
            stop.store(true);
            break;
        }
        const VideoDecision& decision = *slots[i];
        const bool correct =
            items[i].answer_index && *items[i].answer_index == decision.answer_index;
        manifest << question_line(i, items[i], decision, correct).dump() << '\n';
        manifest.flush();
        outcome.caption_calls += decision.caption_calls;
        outcome.score_calls += decision.score_calls;
        outcome.records.push_back(EvalRecord{items[i], decision.answer_index, correct});
        if (options.print_progress) {
            std::cerr << "[" << (i + 1) << "/" << count << "] " << items[i].video.id
                      << " -> " << decision.winning_letter
                      << (correct ? " (correct)" : "") << "\n";
        }
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    outcome.report = score_report(outcome.records);
    {
        jsonio::ordered_json footer;
        footer["type"] = "report";
        footer["report"] = jsonio::report_to_json(outcome.report);
        footer["caption_calls"] = outcome.caption_calls;
        footer["score_calls"] = outcome.score_calls;
        manifest << footer.dump() << '\n';
        manifest.flush();
    }
    if (!manifest) {
        throw StorageError("write failed for " + outcome.manifest_path.string());
    }

    write_text_file(outcome.report_txt_path, format_report(outcome.report));
    write_text_file(outcome.report_json_path,
                    jsonio::report_to_json(outcome.report).dump(2) + "\n");
    return outcome;
}

AnswerOutcome answer_question(const AnswerRequest& request, const PipelineConfig& config,
                              std::shared_ptr<Backend> backend) {
    if (request.video_path.empty()) {
        throw InvalidArgument("answer: no video path given");
    }
    AnswerOutcome outcome;
    outcome.item.video.id = fs::path(request.video_path).stem().string();
    if (outcome.item.video.id.empty()) {
        outcome.item.video.id = request.video_path;
    }
    outcome.item.video.source = request.video_path;
    outcome.item.question = request.question;
    outcome.item.options = request.options;

    Pipeline pipeline = backend ? Pipeline(config, std::move(backend))
                                : Pipeline(config);
    outcome.decision = pipeline.run_question(outcome.item);
    return outcome;
}

std::string format_answer(const AnswerOutcome& outcome) {
    const VideoDecision& decision = outcome.decision;
    std::ostringstream out;
    out << "Answer: " << decision.winning_letter << ") "
        << outcome.item.options[static_cast<std::size_t>(decision.answer_index)] << "\n";
    out << "Aggregation: " << to_string(decision.spec) << "\n";
    out << "Pooled scores:";
    char buffer[64];
    for (const auto& [letter, value] : decision.pooled) {
        std::snprintf(buffer, sizeof(buffer), " %c=%.4f", letter, value);
        out << buffer;
    }
    out << "\n";
    out << "Per-frame evidence:\n";
    for (const auto& frame : decision.per_frame) {
        char top_letter = 0;
        double top_value = 0.0;
        for (const auto& [letter, value] : frame.normalized) {
            if (top_letter == 0 || value > top_value) {
                top_letter = letter;
                top_value = value;
            }
        }
        std::snprintf(buffer, sizeof(buffer), "  segment %3d  top %c=%.4f",
                      frame.segment_index, top_letter, top_value);
        out << buffer;
        if (frame.degenerate) out << "  (degenerate)";
        out << "\n";
    }
    if (!decision.captions.empty()) {
        out << "Captions:\n";
        for (const auto& record : decision.captions) {
            std::snprintf(buffer, sizeof(buffer), "  segment %3d (frame %lld): ",
                          record.segment_index,
                          static_cast<long long>(record.frame_index));
            out << buffer << record.text << "\n";
        }
    }
    std::snprintf(buffer, sizeof(buffer), "Backend calls: %lld captions, %lld scores\n",
                  static_cast<long long>(decision.caption_calls),
                  static_cast<long long>(decision.score_calls));
    out << buffer;
    return out.str();
}

std::string answer_manifest_json(const AnswerOutcome& outcome,
                                 const PipelineConfig& config) {
    jsonio::ordered_json j;
    j["config"] = jsonio::pipeline_config_to_json(config);
    j["video"] = outcome.item.video.source;
    j["question"] = outcome.item.question;
    j["options"] = outcome.item.options;
    j["decision"] = jsonio::decision_to_json(outcome.decision);
    return j.dump(2) + "\n";
}

SweepSpec parse_sweep(const std::string& text) {
    if (text.empty()) {
        throw InvalidArgument("empty sweep spec");
    }
    SweepSpec spec;
    std::string values;
    if (text == "agg") {
        spec.kind = SweepKind::Aggregation;
        spec.values = {"vote", "mean", "max", "softmaxmean", "softmaxmax", "l1max"};
        return spec;
    }
    if (text.rfind("agg:", 0) == 0) {
        spec.kind = SweepKind::Aggregation;
        values = text.substr(4);
    } else if (text.rfind("frames:", 0) == 0) {
        spec.kind = SweepKind::Frames;
        values = text.substr(7);
    } else if (text.rfind("context:", 0) == 0) {
        spec.kind = SweepKind::Context;
        values = text.substr(8);
    } else {
        throw InvalidArgument("unknown sweep spec '" + text +
                              "' (expected agg[:...]|frames:...|context:...)");
    }
    std::stringstream stream(values);
    std::string value;
    while (std::getline(stream, value, ',')) {
        if (!value.empty()) spec.values.push_back(value);
    }
    if (spec.values.empty()) {
        throw InvalidArgument("empty sweep spec '" + text + "'");
    }
    return spec;
}

AblateOutcome ablate(const DatasetDescriptor& desc, const PipelineConfig& base,
                     const SweepSpec& sweep, const EvalOptions& options,
                     std::shared_ptr<Backend> backend) {
    if (sweep.values.empty()) {
        throw InvalidArgument("empty sweep");
    }

    AblateOutcome outcome;
    for (const std::string& value : sweep.values) {
        PipelineConfig config = base;
        std::string label;
        switch (sweep.kind) {
            case SweepKind::Aggregation:
                config.aggregation = aggregation_from_string(value);
                label = value;
                break;
            case SweepKind::Frames: {
                try {
                    config.n_frames = std::stoi(value);
                } catch (const std::exception&) {
                    throw InvalidArgument("bad frame count '" + value + "' in sweep");
                }
                if (config.context_strategy == ContextStrategy::ConcatCaptions) {
                    config.concat_k = std::min(config.concat_k, config.n_frames);
                }
                label = "frames-" + value;
                break;
            }
            case SweepKind::Context:
                config.context_strategy =
                    context_strategy_from_string(value, &config.concat_k);
                if (config.captions_only &&
                    config.context_strategy != ContextStrategy::ConcatCaptions) {
                    throw InvalidArgument(
                        "context sweep value '" + value +
                        "' conflicts with captions_only in the base config");
                }
                label = "context-" + value;
                break;
        }

        EvalOptions variant_options = options;
        variant_options.out_dir = options.out_dir / ("variant-" + sanitize_label(label));
        EvalOutcome eval = evaluate_dataset(desc, config, variant_options, backend);
        outcome.rows.push_back(AblateRow{label, eval.report, eval.caption_calls,
                                         eval.score_calls});
    }

    outcome.report_txt_path = options.out_dir / "ablate_report.txt";
    outcome.report_json_path = options.out_dir / "ablate_report.json";
    write_text_file(outcome.report_txt_path, format_ablate(outcome));

    jsonio::ordered_json rows = jsonio::ordered_json::array();
    for (const auto& row : outcome.rows) {
        jsonio::ordered_json r;
        r["variant"] = row.label;
        r["report"] = jsonio::report_to_json(row.report);
        r["caption_calls"] = row.caption_calls;
        r["score_calls"] = row.score_calls;
        rows.push_back(std::move(r));
    }
    write_text_file(outcome.report_json_path, rows.dump(2) + "\n");
    return outcome;
}

std::string format_ablate(const AblateOutcome& outcome) {
    std::size_t width = std::string("Variant").size();
    for (const auto& row : outcome.rows) width = std::max(width, row.label.size());

    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-*s  %7s  %7s  %8s  %14s  %12s\n",
                  static_cast<int>(width), "Variant", "Correct", "Total", "Top-1 %",
                  "Caption calls", "Score calls");
    out << line;
    for (const auto& row : outcome.rows) {
        std::snprintf(line, sizeof(line), "%-*s  %7lld  %7lld  %8.1f  %14lld  %12lld\n",
                      static_cast<int>(width), row.label.c_str(),
                      static_cast<long long>(row.report.correct),
                      static_cast<long long>(row.report.total),
                      row.report.accuracy_pct(),
                      static_cast<long long>(row.caption_calls),
                      static_cast<long long>(row.score_calls));
        out << line;
    }
    return out.str();
}

}  // namespace vidctx
