#pragma once

// Shared synthetic fixtures: frame directories, a 12-question annotation table
// with scripted mock outcomes, and a hand-computed expected report.

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vidctx/datasets.hpp"
#include "vidctx/mock_backend.hpp"
#include "vidctx/pipeline.hpp"

namespace testsupport {

namespace fs = std::filesystem;

inline void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw std::runtime_error("fixture write failed: " + path.string());
}

// Frame files are opaque payloads in pre-extracted mode; distinct small texts
// keep digests distinct per frame.
inline void write_frame_dir(const fs::path& dir, int count,
                            const std::string& salt = "") {
    fs::create_directories(dir);
    for (int i = 0; i < count; ++i) {
        char name[16];
        std::snprintf(name, sizeof(name), "%04d.jpg", i);
        write_file(dir / name,
                   "frame-bytes " + salt + " " + dir.filename().string() + " #" +
                       std::to_string(i));
    }
}

// One scripted question: the mock answers `scripted` whenever the question text
// appears in a scoring prompt.
struct ScriptedQuestion {
    std::string qid;
    std::string category;
    int gold = 0;
    char scripted = 'A';
    bool correct() const { return scripted - 'A' == gold; }
};

// 12 questions, 4 per category. Hand-computed outcome:
//   Causal 3/4 = 75.0, Temporal 2/4 = 50.0, Descriptive 3/4 = 75.0,
//   Overall 8/12 = 66.7.
inline const std::vector<ScriptedQuestion>& scripted_questions() {
    static const std::vector<ScriptedQuestion> questions = {
        {"q01", "Causal", 0, 'A'},      {"q02", "Causal", 1, 'B'},
        {"q03", "Causal", 2, 'C'},      {"q04", "Causal", 3, 'A'},
        {"q05", "Temporal", 0, 'B'},    {"q06", "Temporal", 1, 'B'},
        {"q07", "Temporal", 2, 'C'},    {"q08", "Temporal", 4, 'D'},
        {"q09", "Descriptive", 0, 'A'}, {"q10", "Descriptive", 1, 'B'},
        {"q11", "Descriptive", 2, 'C'}, {"q12", "Descriptive", 3, 'B'},
    };
    return questions;
}

inline std::string fixture_question_text(const ScriptedQuestion& q) {
    return "What happens in clip " + q.qid + "?";
}

// Writes annotations.csv plus one 8-frame directory per video under root.
inline vidctx::DatasetDescriptor write_nextqa_fixture(const fs::path& root,
                                                      int frames_per_video = 8) {
    const fs::path videos = root / "videos";
    std::string csv =
        "video,frame_count,width,height,question,answer,qid,type,a0,a1,a2,a3,a4\n";
    for (const auto& q : scripted_questions()) {
        const std::string video_id = "vid_" + q.qid;
        write_frame_dir(videos / video_id, frames_per_video);
        csv += video_id + "," + std::to_string(frames_per_video) + ",320,240,\"" +
               fixture_question_text(q) + "\"," + std::to_string(q.gold) + "," +
               q.qid + "," + q.category;
        for (int opt = 0; opt < 5; ++opt) {
            csv += ",answer " + std::string(1, static_cast<char>('a' + opt)) + " for " +
                   q.qid;
        }
        csv += "\n";
    }
    write_file(root / "annotations.csv", csv);

    vidctx::DatasetDescriptor desc;
    desc.kind = vidctx::DatasetKind::NextQAStyle;
    desc.annotation_path = (root / "annotations.csv").string();
    desc.video_root = videos.string();
    return desc;
}

inline std::map<char, double> planted_scores(char winner) {
    std::map<char, double> scores;
    for (char letter : {'A', 'B', 'C', 'D', 'E'}) scores[letter] = -3.0;
    scores['F'] = -4.0;
    scores[winner] = -0.05;
    return scores;
}

// Mock whose scoring rules key on the unique question text.
inline std::shared_ptr<vidctx::MockBackend> make_scripted_backend() {
    auto backend = std::make_shared<vidctx::MockBackend>();
    for (const auto& q : scripted_questions()) {
        vidctx::MockBackend::Rule rule;
        rule.prompt_contains = fixture_question_text(q);
        rule.scores = planted_scores(q.scripted);
        backend->add_rule(std::move(rule));
    }
    return backend;
}

// Same rules as a JSON script file, for configs loaded by the CLI.
inline void write_mock_script(const fs::path& path) {
    std::string json = "{\n  \"rules\": [\n";
    bool first = true;
    for (const auto& q : scripted_questions()) {
        if (!first) json += ",\n";
        first = false;
        json += "    {\"prompt_contains\": \"" + fixture_question_text(q) +
                "\", \"scores\": {";
        bool first_score = true;
        for (const auto& [letter, value] : planted_scores(q.scripted)) {
            if (!first_score) json += ", ";
            first_score = false;
            json += "\"" + std::string(1, letter) + "\": " + std::to_string(value);
        }
        json += "}}";
    }
    json += "\n  ]\n}\n";
    write_file(path, json);
}

// Baseline config for fixture runs: mock backend, no captions, 4 frames.
inline vidctx::PipelineConfig fixture_config(const std::string& cache_dir) {
    vidctx::PipelineConfig config;
    config.n_frames = 4;
    config.context_strategy = vidctx::ContextStrategy::NoContext;
    config.aggregation = {vidctx::Normalization::L1, vidctx::Pooling::Max};
    config.backend.kind = vidctx::BackendKind::Mock;
    config.backend.model_id = "mock-model";
    config.concurrency_limit = 2;
    config.cache_dir = cache_dir;
    return config;
}

// Valid 8x8 JPEG, for calls that must carry decodable image bytes.
inline std::string tiny_jpeg_bytes() {
    static const unsigned char bytes[] = {
        255, 216, 255, 224, 0,   16,  74,  70,  73,  70,  0,   1,   1,   0,   0,
        1,   0,   1,   0,   0,   255, 219, 0,   67,  0,   10,  7,   7,   8,   7,
        6,   10,  8,   8,   8,   11,  10,  10,  11,  14,  24,  16,  14,  13,  13,
        14,  29,  21,  22,  17,  24,  35,  31,  37,  36,  34,  31,  34,  33,  38,
        43,  55,  47,  38,  41,  52,  41,  33,  34,  48,  65,  49,  52,  57,  59,
        62,  62,  62,  37,  46,  68,  73,  67,  60,  72,  55,  61,  62,  59,  255,
        219, 0,   67,  1,   10,  11,  11,  14,  13,  14,  28,  16,  16,  28,  59,
        40,  34,  40,  59,  59,  59,  59,  59,  59,  59,  59,  59,  59,  59,  59,
        59,  59,  59,  59,  59,  59,  59,  59,  59,  59,  59,  59,  59,  59,  59,
        59,  59,  59,  59,  59,  59,  59,  59,  59,  59,  59,  59,  59,  59,  59,
        59,  59,  59,  59,  59,  59,  59,  255, 192, 0,   17,  8,   0,   8,   0,
        8,   3,   1,   34,  0,   2,   17,  1,   3,   17,  1,   255, 196, 0,   31,
        0,   0,   1,   5,   1,   1,   1,   1,   1,   1,   0,   0,   0,   0,   0,
        0,   0,   0,   1,   2,   3,   4,   5,   6,   7,   8,   9,   10,  11,  255,
        196, 0,   181, 16,  0,   2,   1,   3,   3,   2,   4,   3,   5,   5,   4,
        4,   0,   0,   1,   125, 1,   2,   3,   0,   4,   17,  5,   18,  33,  49,
        65,  6,   19,  81,  97,  7,   34,  113, 20,  50,  129, 145, 161, 8,   35,
        66,  177, 193, 21,  82,  209, 240, 36,  51,  98,  114, 130, 9,   10,  22,
        23,  24,  25,  26,  37,  38,  39,  40,  41,  42,  52,  53,  54,  55,  56,
        57,  58,  67,  68,  69,  70,  71,  72,  73,  74,  83,  84,  85,  86,  87,
        88,  89,  90,  99,  100, 101, 102, 103, 104, 105, 106, 115, 116, 117, 118,
        119, 120, 121, 122, 131, 132, 133, 134, 135, 136, 137, 138, 146, 147, 148,
        149, 150, 151, 152, 153, 154, 162, 163, 164, 165, 166, 167, 168, 169, 170,
        178, 179, 180, 181, 182, 183, 184, 185, 186, 194, 195, 196, 197, 198, 199,
        200, 201, 202, 210, 211, 212, 213, 214, 215, 216, 217, 218, 225, 226, 227,
        228, 229, 230, 231, 232, 233, 234, 241, 242, 243, 244, 245, 246, 247, 248,
        249, 250, 255, 196, 0,   31,  1,   0,   3,   1,   1,   1,   1,   1,   1,
        1,   1,   1,   0,   0,   0,   0,   0,   0,   1,   2,   3,   4,   5,   6,
        7,   8,   9,   10,  11,  255, 196, 0,   181, 17,  0,   2,   1,   2,   4,
        4,   3,   4,   7,   5,   4,   4,   0,   1,   2,   119, 0,   1,   2,   3,
        17,  4,   5,   33,  49,  6,   18,  65,  81,  7,   97,  113, 19,  34,  50,
        129, 8,   20,  66,  145, 161, 177, 193, 9,   35,  51,  82,  240, 21,  98,
        114, 209, 10,  22,  36,  52,  225, 37,  241, 23,  24,  25,  26,  38,  39,
        40,  41,  42,  53,  54,  55,  56,  57,  58,  67,  68,  69,  70,  71,  72,
        73,  74,  83,  84,  85,  86,  87,  88,  89,  90,  99,  100, 101, 102, 103,
        104, 105, 106, 115, 116, 117, 118, 119, 120, 121, 122, 130, 131, 132, 133,
        134, 135, 136, 137, 138, 146, 147, 148, 149, 150, 151, 152, 153, 154, 162,
        163, 164, 165, 166, 167, 168, 169, 170, 178, 179, 180, 181, 182, 183, 184,
        185, 186, 194, 195, 196, 197, 198, 199, 200, 201, 202, 210, 211, 212, 213,
        214, 215, 216, 217, 218, 226, 227, 228, 229, 230, 231, 232, 233, 234, 242,
        243, 244, 245, 246, 247, 248, 249, 250, 255, 218, 0,   12,  3,   1,   0,
        2,   17,  3,   17,  0,   63,  0,   202, 162, 138, 43,  206, 59,  207, 255,
        217};
    return std::string(reinterpret_cast<const char*>(bytes), sizeof(bytes));
}

}  // namespace testsupport
