#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vidctx/types.hpp"

namespace vidctx {

enum class DatasetKind { NextQAStyle, STARStyle };

const char* to_string(DatasetKind k);
DatasetKind dataset_kind_from_string(const std::string& s);

// Column names for the delimiter-separated annotation table (NextQA style).
struct NextQAColumns {
    std::string video = "video";
    std::string question = "question";
    std::vector<std::string> answers = {"a0", "a1", "a2", "a3", "a4"};
    std::string gold = "answer";
    std::string qid = "qid";                  // optional
    std::string frame_count = "frame_count";  // optional, fills VideoRef.total_frames
};

struct DatasetDescriptor {
    DatasetKind kind = DatasetKind::NextQAStyle;
    std::string annotation_path;
    std::string video_root;
    // NextQA style: the category column (default "type").
    // STAR style: the field whose prefix before '_' is the category (default
    // "question_id").
    std::string category_field_name;
    NextQAColumns columns;
    char delimiter = ',';
};

// Parses the annotation file into QAItems, order-preserving. Malformed rows are
// rejected with row-numbered diagnostics.
std::vector<QAItem> load_dataset(const DatasetDescriptor& desc);

// External decoder invocation settings. The decoder is only used for video files;
// a directory of pre-extracted numbered frame images bypasses it.
struct DecoderOptions {
    std::string command = "ffmpeg";
    std::string probe_command = "ffprobe";
    std::string frame_format = "jpg";  // extension of decoded frame files
};

// Number of frames in the video: image-file count in pre-extracted mode, decoded
// frame count (via the probe command) for video files.
std::int64_t probe_total_frames(const VideoRef& video, const DecoderOptions& opts = {});

// One image payload per requested index, in order. Pre-extracted mode reads
// video_id/NNNN.jpg style files directly; video files go through the decoder with
// explicit frame-index selection.
std::vector<FrameSample> extract_frames(const VideoRef& video,
                                        const std::vector<std::int64_t>& indices,
                                        const DecoderOptions& opts = {});

struct EvalRecord {
    QAItem item;
    int predicted_index = -1;
    bool correct = false;
};

struct CategoryScore {
    std::string category;
    std::int64_t correct = 0;
    std::int64_t total = 0;
    double accuracy_pct() const;
};

struct ScoreReport {
    std::vector<CategoryScore> categories;  // sorted by category name
    std::int64_t correct = 0;
    std::int64_t total = 0;
    double accuracy_pct() const;
};

// Overall and per-category top-1 accuracy.
ScoreReport score_report(const std::vector<EvalRecord>& records);

// Aligned text table with one row per category plus Overall, percentages to one
// decimal place.
std::string format_report(const ScoreReport& report);

}  // namespace vidctx
