#include "edsim/http_backend.hpp"

#include <chrono>
#include <cstdlib>

#include "edsim/errors.hpp"
#include "edsim/prompt.hpp"
#include "httplib.h"
#include "json.hpp"

namespace edsim {

using nlohmann::json;

ParsedUrl parse_base_url(const std::string& base_url) {
    auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) {
        throw ValidationError("base_url must start with http:// or https://: " + base_url);
    }
    std::string scheme = base_url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") {
        throw ValidationError("unsupported scheme in base_url: " + base_url);
    }
    auto path_start = base_url.find('/', scheme_end + 3);
    if (path_start == scheme_end + 3) {
        throw ValidationError("base_url has no host: " + base_url);
    }
    ParsedUrl out;
    if (path_start == std::string::npos) {
        out.origin = base_url;
    } else {
        out.origin = base_url.substr(0, path_start);
        out.path_prefix = base_url.substr(path_start);
        while (!out.path_prefix.empty() && out.path_prefix.back() == '/') {
            out.path_prefix.pop_back();
        }
    }
    return out;
}

std::string openai_endpoint_path(const ParsedUrl& url) {
    return url.path_prefix + "/chat/completions";
}

std::string anthropic_endpoint_path(const ParsedUrl& url) {
    return url.path_prefix + "/messages";
}

std::string user_message_text(const ChatRequest& request) {
    return request.transcript_text + "\n" + speaker_label(request.next_speaker_name) + ":";
}

std::string build_openai_body(const ModelSpec& model, const ChatRequest& request) {
    json messages = json::array();
    if (request.system_text && !request.system_text->empty()) {
        messages.push_back({{"role", "system"}, {"content", *request.system_text}});
    }
    messages.push_back({{"role", "user"}, {"content", user_message_text(request)}});

    json body{
        {"model", model.model_id},
        {"messages", std::move(messages)},
        {"temperature", request.sampling.temperature},
        {"top_p", request.sampling.top_p},
        {"max_tokens", request.sampling.max_tokens_per_turn},
        // Providers without seed support ignore the field.
        {"seed", request.request_seed},
    };
    return body.dump();
}

std::string build_anthropic_body(const ModelSpec& model, const ChatRequest& request) {
    json body{
        {"model", model.model_id},
        {"max_tokens", request.sampling.max_tokens_per_turn},
        {"temperature", request.sampling.temperature},
        {"top_p", request.sampling.top_p},
        {"messages",
         json::array({{{"role", "user"}, {"content", user_message_text(request)}}})},
    };
    if (request.system_text && !request.system_text->empty()) {
        body["system"] = *request.system_text;
    }
    return body.dump();
}

namespace {

BackendError malformed(std::string detail) {
    return BackendError{ErrorClass::malformed_response, std::move(detail), std::nullopt};
}

TokenUsage usage_from(const json& u, const char* prompt_key, const char* completion_key) {
    TokenUsage usage;
    if (u.is_object()) {
        usage.prompt_tokens = u.value(prompt_key, 0LL);
        usage.completion_tokens = u.value(completion_key, 0LL);
    }
    return usage;
}

}  // namespace

ChatResult parse_openai_success(const std::string& body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) return malformed("response body is not JSON");
    const auto choices = doc.find("choices");
    if (choices == doc.end() || !choices->is_array() || choices->empty()) {
        return malformed("response has no choices");
    }
    const json& message = choices->front().value("message", json::object());
    std::string text = message.value("content", std::string());
    if (text.empty()) return malformed("response message content is empty");

    ChatResponse response;
    response.text = std::move(text);
    response.usage = usage_from(doc.value("usage", json()), "prompt_tokens",
                                "completion_tokens");
    return response;
}

ChatResult parse_anthropic_success(const std::string& body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) return malformed("response body is not JSON");
    const auto content = doc.find("content");
    if (content == doc.end() || !content->is_array()) {
        return malformed("response has no content blocks");
    }
    std::string text;
    for (const json& block : *content) {
        if (block.value("type", std::string()) == "text") {
            text += block.value("text", std::string());
        }
    }
    if (text.empty()) return malformed("response has no text content");

    ChatResponse response;
    response.text = std::move(text);
    response.usage =
        usage_from(doc.value("usage", json()), "input_tokens", "output_tokens");
    return response;
}

BackendError classify_http_status(int status, const std::string& body,
                                  const std::string& retry_after_header) {
    std::string detail = "HTTP " + std::to_string(status);
    if (!body.empty()) detail += ": " + body.substr(0, 200);

    if (status == 429) {
        std::optional<std::chrono::milliseconds> retry_after;
        if (!retry_after_header.empty()) {
            char* end = nullptr;
            double seconds = std::strtod(retry_after_header.c_str(), &end);
            if (end != retry_after_header.c_str() && seconds >= 0) {
                retry_after = std::chrono::milliseconds(
                    static_cast<long long>(seconds * 1000.0));
            }
        }
        return BackendError{ErrorClass::rate_limited, std::move(detail), retry_after};
    }
    if (status == 401 || status == 403) {
        return BackendError{ErrorClass::auth, std::move(detail), std::nullopt};
    }
    if (status >= 500) {
        return BackendError{ErrorClass::transient_server, std::move(detail), std::nullopt};
    }
    return BackendError{ErrorClass::permanent, std::move(detail), std::nullopt};
}

HttpChatBackend::HttpChatBackend(std::string name, ModelSpec spec)
    : name_(std::move(name)), spec_(std::move(spec)), url_(parse_base_url(spec_.base_url)) {
    if (spec_.provider == ProviderKind::scripted_mock) {
        throw ValidationError("HTTP backend requires an HTTP provider: " + name_);
    }
}

ChatResult HttpChatBackend::complete(const ChatRequest& request) {
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (url_.origin.rfind("https://", 0) == 0) {
        return BackendError{ErrorClass::permanent,
                            "built without TLS support; https base_url unusable",
                            std::nullopt};
    }
#endif
    const char* key = nullptr;
    if (!spec_.api_key_env.empty()) {
        key = std::getenv(spec_.api_key_env.c_str());
        if (key == nullptr || *key == '\0') {
            return BackendError{ErrorClass::auth,
                                "credential environment variable not set: " +
                                    spec_.api_key_env,
                                std::nullopt};
        }
    }

    httplib::Client client(url_.origin);
    client.set_connection_timeout(std::chrono::milliseconds(spec_.request_timeout_ms));
    client.set_read_timeout(std::chrono::milliseconds(spec_.request_timeout_ms));
    client.set_write_timeout(std::chrono::milliseconds(spec_.request_timeout_ms));

    httplib::Headers headers;
    std::string path;
    std::string body;
    if (spec_.provider == ProviderKind::openai_compatible) {
        path = openai_endpoint_path(url_);
        body = build_openai_body(spec_, request);
        if (key != nullptr) headers.emplace("Authorization", std::string("Bearer ") + key);
    } else {
        path = anthropic_endpoint_path(url_);
        body = build_anthropic_body(spec_, request);
        if (key != nullptr) headers.emplace("x-api-key", key);
        headers.emplace("anthropic-version", "2023-06-01");
    }

    const auto started = std::chrono::steady_clock::now();
    httplib::Result result = client.Post(path, headers, body, "application/json");
    const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);

    if (!result) {
        const auto err = result.error();
        const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                               err == httplib::Error::Read || err == httplib::Error::Write;
        return BackendError{timed_out ? ErrorClass::timeout : ErrorClass::transient_server,
                            "transport error: " + httplib::to_string(err), std::nullopt};
    }
    if (result->status != 200) {
        return classify_http_status(result->status, result->body,
                                    result->get_header_value("Retry-After"));
    }

    ChatResult parsed = spec_.provider == ProviderKind::openai_compatible
                            ? parse_openai_success(result->body)
                            : parse_anthropic_success(result->body);
    if (is_ok(parsed)) {
        std::get<ChatResponse>(parsed).provider_latency = latency;
    }
    return parsed;
}

}  // namespace edsim
