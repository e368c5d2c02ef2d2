#pragma once

#include <string>

#include "edsim/backend.hpp"
#include "edsim/types.hpp"

namespace edsim {

// "https://host[:port]/v1" -> origin "https://host[:port]", path_prefix "/v1".
// The dialect endpoint ("/chat/completions", "/messages") is appended to the
// prefix, so base URLs are written the way provider SDKs expect them.
struct ParsedUrl {
    std::string origin;
    std::string path_prefix;
};
ParsedUrl parse_base_url(const std::string& base_url);  // throws ValidationError

// Wire mapping is split from the transport so the request builders and
// response parsers can be exercised against captured bodies without a server.

std::string openai_endpoint_path(const ParsedUrl& url);
std::string anthropic_endpoint_path(const ParsedUrl& url);

// transcript_text + "\n{SPEAKER}:" — the continuation cue both dialects share.
std::string user_message_text(const ChatRequest& request);

std::string build_openai_body(const ModelSpec& model, const ChatRequest& request);
std::string build_anthropic_body(const ModelSpec& model, const ChatRequest& request);

// Parse a 200 body. Unparseable JSON, a missing message, or empty content all
// map to malformed_response.
ChatResult parse_openai_success(const std::string& body);
ChatResult parse_anthropic_success(const std::string& body);

// Non-200 status mapping: 429 -> rate_limited (Retry-After seconds honored),
// 401/403 -> auth, remaining 4xx -> permanent, 5xx -> transient_server.
BackendError classify_http_status(int status, const std::string& body,
                                  const std::string& retry_after_header);

class HttpChatBackend : public ChatBackend {
public:
    // Throws ValidationError when the base URL is malformed or the provider
    // is not an HTTP dialect.
    HttpChatBackend(std::string name, ModelSpec spec);

    ChatResult complete(const ChatRequest& request) override;
    std::string name() const override { return name_; }

private:
    std::string name_;
    ModelSpec spec_;
    ParsedUrl url_;
};

}  // namespace edsim
