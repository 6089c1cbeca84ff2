#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vidctx/aggregate.hpp"
#include "vidctx/backend.hpp"
#include "vidctx/datasets.hpp"
#include "vidctx/pipeline.hpp"

namespace vidctx {

struct EvalOptions {
    std::filesystem::path out_dir;
    std::int64_t limit = -1;          // < 0 = all questions
    int question_concurrency = 1;     // parallel questions; manifest order is kept
    // Manifest timestamp (seconds since epoch). Defaults to SOURCE_DATE_EPOCH when
    // set, else the current time.
    std::optional<std::int64_t> timestamp_epoch;
    bool print_progress = false;
};

struct EvalOutcome {
    ScoreReport report;
    std::vector<EvalRecord> records;
    std::int64_t caption_calls = 0;  // backend calls actually made across the run
    std::int64_t score_calls = 0;
    std::filesystem::path manifest_path;
    std::filesystem::path report_txt_path;
    std::filesystem::path report_json_path;
};

// Evaluates the dataset question by question, flushing one manifest line per
// question (manifest.jsonl) so interrupted runs resume via the cache, then writes
// report.txt and report.json. With a deterministic backend and fixed timestamp
// the manifest is byte-stable across runs.
EvalOutcome evaluate_dataset(const DatasetDescriptor& desc, const PipelineConfig& config,
                             const EvalOptions& options,
                             std::shared_ptr<Backend> backend = nullptr);

// Single ad-hoc question against one video.
struct AnswerRequest {
    std::string video_path;
    std::string question;
    std::vector<std::string> options;
};

struct AnswerOutcome {
    QAItem item;
    VideoDecision decision;
};

AnswerOutcome answer_question(const AnswerRequest& request, const PipelineConfig& config,
                              std::shared_ptr<Backend> backend = nullptr);

// Human-readable evidence dump: winner, per-frame top scores, context captions.
std::string format_answer(const AnswerOutcome& outcome);
// Manifest for a single answered question: config snapshot plus decision evidence.
std::string answer_manifest_json(const AnswerOutcome& outcome, const PipelineConfig& config);

enum class SweepKind { Aggregation, Frames, Context };

struct SweepSpec {
    SweepKind kind = SweepKind::Aggregation;
    std::vector<std::string> values;  // variant labels, parsed per kind
};

// "agg" | "agg:l1max,vote,..." | "frames:1,2,4,8" | "context:none,current,distant,concat:16"
SweepSpec parse_sweep(const std::string& text);

struct AblateRow {
    std::string label;
    ScoreReport report;
    std::int64_t caption_calls = 0;
    std::int64_t score_calls = 0;
};

struct AblateOutcome {
    std::vector<AblateRow> rows;
    std::filesystem::path report_txt_path;
    std::filesystem::path report_json_path;
};

// One evaluation per variant, sharing the cache; writes a comparative table.
AblateOutcome ablate(const DatasetDescriptor& desc, const PipelineConfig& base,
                     const SweepSpec& sweep, const EvalOptions& options,
                     std::shared_ptr<Backend> backend = nullptr);

std::string format_ablate(const AblateOutcome& outcome);

}  // namespace vidctx
