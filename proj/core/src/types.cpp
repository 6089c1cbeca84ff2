#include "vidctx/types.hpp"

#include "vidctx/digest.hpp"
#include "vidctx/errors.hpp"

namespace vidctx {

std::shared_ptr<const ImagePayload> make_image_payload(std::string bytes) {
    auto payload = std::make_shared<ImagePayload>();
    payload->digest = sha256_hex(bytes);
    payload->bytes = std::move(bytes);
    return payload;
}

const char* to_word(TemporalSpecifier s) {
    return s == TemporalSpecifier::Earlier ? "earlier" : "later";
}

const char* to_string(CaptionMode mode) {
    return mode == CaptionMode::QuestionAware ? "qaware" : "static";
}

CaptionMode caption_mode_from_string(const std::string& s) {
    if (s == "qaware" || s == "question-aware") return CaptionMode::QuestionAware;
    if (s == "static") return CaptionMode::Static;
    throw InvalidArgument("unknown caption mode '" + s + "' (expected qaware|static)");
}

}  // namespace vidctx
