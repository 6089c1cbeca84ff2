#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <optional>
#include <semaphore>
#include <thread>

#include "vidctx/backend.hpp"
#include "vidctx/errors.hpp"

namespace vidctx {

namespace {

struct ParsedUrl {
    std::string base;  // scheme://host[:port]
    std::string path_prefix;
};

ParsedUrl parse_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw InvalidArgument("backend endpoint must start with http:// or https://: " +
                              url);
    }
    const std::string scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") {
        throw InvalidArgument("unsupported endpoint scheme '" + scheme + "'");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    ParsedUrl parsed;
    if (path_start == std::string::npos) {
        parsed.base = url;
    } else {
        parsed.base = url.substr(0, path_start);
        parsed.path_prefix = url.substr(path_start);
        while (!parsed.path_prefix.empty() && parsed.path_prefix.back() == '/') {
            parsed.path_prefix.pop_back();
        }
    }
    return parsed;
}

std::string base64_encode(std::string_view data) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 3 <= data.size()) {
        const unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                           (static_cast<unsigned char>(data[i + 1]) << 8) |
                           static_cast<unsigned char>(data[i + 2]);
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.push_back(alphabet[(v >> 6) & 63]);
        out.push_back(alphabet[v & 63]);
        i += 3;
    }
    const std::size_t rest = data.size() - i;
    if (rest == 1) {
        const unsigned v = static_cast<unsigned char>(data[i]) << 16;
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out += "==";
    } else if (rest == 2) {
        const unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                           (static_cast<unsigned char>(data[i + 1]) << 8);
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.push_back(alphabet[(v >> 6) & 63]);
        out += "=";
    }
    return out;
}

const char* sniff_media_type(const std::string& bytes) {
    if (bytes.size() >= 8 && static_cast<unsigned char>(bytes[0]) == 0x89 &&
        bytes.compare(1, 3, "PNG") == 0) {
        return "image/png";
    }
    if (bytes.size() >= 6 && (bytes.compare(0, 6, "GIF87a") == 0 ||
                              bytes.compare(0, 6, "GIF89a") == 0)) {
        return "image/gif";
    }
    if (bytes.size() >= 12 && bytes.compare(0, 4, "RIFF") == 0 &&
        bytes.compare(8, 4, "WEBP") == 0) {
        return "image/webp";
    }
    return "image/jpeg";
}

std::string strip(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

// OpenAI-compatible chat/completions client for an inference server that exposes
// first-token log probabilities.
class RemoteBackend : public Backend {
public:
    explicit RemoteBackend(BackendDescriptor desc)
        : desc_(std::move(desc)),
          url_(parse_url(desc_.endpoint)),
          in_flight_(desc_.max_in_flight > 0 ? desc_.max_in_flight : 1) {
        if (desc_.max_caption_tokens < 1) {
            throw InvalidArgument("max_caption_tokens must be >= 1");
        }
    }

    std::string generate_caption(const ImagePayload* image, const std::string& prompt,
                                 int max_tokens) override {
        if (prompt.empty()) {
            throw InvalidArgument("generate_caption: empty prompt");
        }
        nlohmann::ordered_json body = request_body(image, prompt);
        body["max_tokens"] = max_tokens;
        body["temperature"] = 0;
        const nlohmann::json response = post(body);
        const nlohmann::json& message = first_choice(response).at("message");
        std::string text;
        if (message.contains("content") && message.at("content").is_string()) {
            text = message.at("content").get<std::string>();
        }
        return strip(text);
    }

    TokenScoreMap score_first_token(const ImagePayload* image, const std::string& prompt,
                                    const OptionTokenSet& letters) override {
        nlohmann::ordered_json body = request_body(image, prompt);
        body["max_tokens"] = 1;
        body["temperature"] = 0;
        body["logprobs"] = true;
        body["top_logprobs"] = desc_.top_logprobs;
        const nlohmann::json response = post(body);
        const nlohmann::json& choice = first_choice(response);

        if (!choice.contains("logprobs") || choice.at("logprobs").is_null()) {
            throw ProtocolError(
                "server response carries no log-probability data; check that the "
                "endpoint supports logprobs");
        }
        const nlohmann::json& content = choice.at("logprobs").at("content");
        if (!content.is_array() || content.empty()) {
            throw ProtocolError("server logprobs.content is empty");
        }
        const nlohmann::json& top = content.at(0).at("top_logprobs");

        // Accept the bare letter or the letter with one leading space, keeping the
        // higher-scored surface form.
        std::map<char, double> observed;
        for (const auto& entry : top) {
            const std::string token = entry.at("token").get<std::string>();
            char letter = 0;
            if (token.size() == 1) {
                letter = token[0];
            } else if (token.size() == 2 && token[0] == ' ') {
                letter = token[1];
            } else {
                continue;
            }
            bool known = false;
            for (char candidate : letters.tokens) known |= (candidate == letter);
            if (!known) continue;
            const double value = entry.at("logprob").get<double>();
            auto it = observed.find(letter);
            if (it == observed.end() || value > it->second) observed[letter] = value;
        }
        return complete_score_map(observed, letters, desc_.score_source);
    }

    const std::string& model_id() const override { return desc_.model_id; }

private:
    nlohmann::ordered_json request_body(const ImagePayload* image,
                                        const std::string& prompt) const {
        nlohmann::ordered_json body;
        body["model"] = desc_.model_id;
        nlohmann::ordered_json message;
        message["role"] = "user";
        if (image) {
            nlohmann::ordered_json image_part;
            image_part["type"] = "image_url";
            image_part["image_url"]["url"] = std::string("data:") +
                                             sniff_media_type(image->bytes) + ";base64," +
                                             base64_encode(image->bytes);
            nlohmann::ordered_json text_part;
            text_part["type"] = "text";
            text_part["text"] = prompt;
            message["content"] = nlohmann::ordered_json::array({image_part, text_part});
        } else {
            message["content"] = prompt;
        }
        body["messages"] = nlohmann::ordered_json::array({message});
        return body;
    }

    static const nlohmann::json& first_choice(const nlohmann::json& response) {
        if (!response.contains("choices") || !response.at("choices").is_array() ||
            response.at("choices").empty()) {
            throw ProtocolError("server response has no choices");
        }
        return response.at("choices").at(0);
    }

    nlohmann::json post(const nlohmann::ordered_json& body) {
        struct Slot {
            explicit Slot(RemoteBackend& b) : backend(b) {
                if (backend.desc_.max_in_flight > 0) backend.in_flight_.acquire();
            }
            ~Slot() {
                if (backend.desc_.max_in_flight > 0) backend.in_flight_.release();
            }
            RemoteBackend& backend;
        } slot(*this);

        const std::string payload = body.dump();
        const std::string path = url_.path_prefix + "/chat/completions";
        std::string last_error;

        for (int attempt = 0; attempt <= desc_.retry_limit; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(desc_.retry_backoff * (1LL << (attempt - 1)));
            }
            httplib::Client client(url_.base);
            const auto timeout =
                std::chrono::duration_cast<std::chrono::milliseconds>(desc_.request_timeout);
            client.set_connection_timeout(timeout);
            client.set_read_timeout(timeout);
            client.set_write_timeout(timeout);
            if (const char* key = std::getenv(desc_.api_key_env.c_str());
                key && *key != '\0') {
                client.set_bearer_token_auth(key);
            }

            httplib::Result result = client.Post(path, payload, "application/json");
            if (!result) {
                last_error = "transport: " + httplib::to_string(result.error());
                continue;
            }
            if (result->status == 429 || result->status >= 500) {
                last_error = "server status " + std::to_string(result->status);
                continue;
            }
            if (result->status != 200) {
                throw ProtocolError("server rejected request with status " +
                                    std::to_string(result->status) + ": " +
                                    result->body.substr(0, 512));
            }
            try {
                return nlohmann::json::parse(result->body);
            } catch (const std::exception& e) {
                throw ProtocolError(std::string("server response is not JSON: ") +
                                    e.what());
            }
        }
        throw TransportError("request to " + desc_.endpoint + " failed after " +
                             std::to_string(desc_.retry_limit + 1) +
                             " attempts: " + last_error);
    }

    BackendDescriptor desc_;
    ParsedUrl url_;
    std::counting_semaphore<> in_flight_;
};

}  // namespace

const char* to_string(BackendKind k) {
    return k == BackendKind::RemoteCompletion ? "remote" : "mock";
}

BackendKind backend_kind_from_string(const std::string& s) {
    if (s == "remote") return BackendKind::RemoteCompletion;
    if (s == "mock") return BackendKind::Mock;
    throw InvalidArgument("unknown backend kind '" + s + "' (expected remote|mock)");
}

std::shared_ptr<Backend> make_remote_backend(const BackendDescriptor& desc) {
    return std::make_shared<RemoteBackend>(desc);
}

}  // namespace vidctx
