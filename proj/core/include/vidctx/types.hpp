#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vidctx {

// Raw encoded image bytes plus a content digest used for cache and mock keys.
struct ImagePayload {
    std::string bytes;
    std::string digest;  // hex digest of bytes
};

// Computes the digest and wraps the bytes in a shared immutable payload.
std::shared_ptr<const ImagePayload> make_image_payload(std::string bytes);

struct VideoRef {
    std::string id;
    std::string source;              // video file or directory of numbered frame images
    std::int64_t total_frames = 0;   // 0 = unknown until probed
};

struct FrameSample {
    int segment_index = 0;
    std::int64_t frame_index = 0;
    std::shared_ptr<const ImagePayload> image;
};

// One multiple-choice question about one video.
struct QAItem {
    VideoRef video;
    std::string question;
    std::vector<std::string> options;  // 2..5 candidate answers, in letter order
    std::optional<int> answer_index;   // gold answer when known
    std::string category;
    std::string qid;                   // dataset-provided id, may be empty
};

// Whether a context caption describes a moment before or after the current frame.
enum class TemporalSpecifier { Earlier, Later };

// Lowercase word inserted into the prompt: "earlier" / "later".
const char* to_word(TemporalSpecifier s);

enum class CaptionMode { QuestionAware, Static };

const char* to_string(CaptionMode mode);
CaptionMode caption_mode_from_string(const std::string& s);

// A caption produced for one frame, with provenance.
struct CaptionRecord {
    std::string video_id;
    int segment_index = 0;
    std::int64_t frame_index = 0;
    CaptionMode caption_mode = CaptionMode::QuestionAware;
    std::string prompt_hash;  // digest of the exact prompt bytes
    std::string model_id;
    std::string text;         // unmodified backend output
};

}  // namespace vidctx
