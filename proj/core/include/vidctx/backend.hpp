#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "vidctx/prompts.hpp"
#include "vidctx/scores.hpp"
#include "vidctx/types.hpp"

namespace vidctx {

enum class BackendKind { RemoteCompletion, Mock };

const char* to_string(BackendKind k);
BackendKind backend_kind_from_string(const std::string& s);

struct BackendDescriptor {
    BackendKind kind = BackendKind::Mock;
    std::string endpoint;            // RemoteCompletion: base URL, e.g. http://host:8000/v1
    std::string model_id = "mock";
    int max_caption_tokens = 200;
    std::chrono::milliseconds request_timeout{120000};
    int retry_limit = 2;             // retries after the first attempt
    std::chrono::milliseconds retry_backoff{250};  // initial backoff, doubles per retry
    int max_in_flight = 0;           // remote in-flight request cap, 0 = unlimited
    int top_logprobs = 20;           // top log-probabilities requested per scoring call
    ScoreSource score_source = ScoreSource::LogProb;
    std::string api_key_env = "VIDCTX_API_KEY";  // env var holding the bearer token
    std::string mock_script_path;    // Mock: optional script file
};

// The multimodal model behind the engine: caption generation and first-token
// option scoring. Instances are shareable across concurrent callers.
class Backend {
public:
    virtual ~Backend() = default;

    // Generates a caption for the image under the given instruction, greedy
    // decoding, at most max_tokens tokens. Returned text is whitespace-stripped;
    // an empty string means the model declined.
    virtual std::string generate_caption(const ImagePayload* image,
                                         const std::string& prompt,
                                         int max_tokens) = 0;

    // Scores the first generated token against each option letter. image may be
    // null for text-only calls. Every letter of the set receives a finite score.
    virtual TokenScoreMap score_first_token(const ImagePayload* image,
                                            const std::string& prompt,
                                            const OptionTokenSet& letters) = 0;

    virtual const std::string& model_id() const = 0;
};

std::shared_ptr<Backend> make_backend(const BackendDescriptor& desc);

}  // namespace vidctx
