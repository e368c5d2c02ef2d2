#include "edsim/remote_scorer.hpp"

#include <algorithm>

#include "edsim/errors.hpp"
#include "httplib.h"
#include "json.hpp"

namespace edsim {

using nlohmann::json;

const std::vector<std::string>& remote_analytics() {
    static const std::vector<std::string> analytics{
        "sentiment", "empathy_intent", "empathy_emotion", "emotion", "toxicity"};
    return analytics;
}

std::string build_score_request(const std::vector<std::string>& texts,
                                const std::vector<std::string>& analytics) {
    json body{{"texts", texts}, {"analytics", analytics}};
    return body.dump();
}

namespace {

RemoteScoreItem parse_result_item(const json& item) {
    RemoteScoreItem out;
    if (!item.is_object()) {
        out.error = "result entry is not an object";
        return out;
    }
    if (item.contains("error")) {
        out.error = item.value("error", std::string("unspecified scorer error"));
        if (out.error.empty()) out.error = "unspecified scorer error";
        return out;
    }

    ScoreVector score;
    const auto sentiment = item.find("sentiment");
    if (sentiment == item.end() || !sentiment->is_number()) {
        out.error = "missing sentiment";
        return out;
    }
    score.sentiment = sentiment->get<double>();
    if (score.sentiment < -1.0 || score.sentiment > 1.0) {
        out.error = "sentiment out of range";
        return out;
    }
    for (const char* field : {"empathy_intent", "empathy_emotion", "emotion"}) {
        if (!item.contains(field) || !item.at(field).is_string()) {
            out.error = std::string("missing ") + field;
            return out;
        }
    }
    score.empathy_intent = item.at("empathy_intent").get<std::string>();
    score.empathy_emotion = item.at("empathy_emotion").get<std::string>();
    score.emotion = item.at("emotion").get<std::string>();
    if (item.contains("toxicity") && !item.at("toxicity").is_null()) {
        if (!item.at("toxicity").is_number()) {
            out.error = "toxicity is not a number";
            return out;
        }
        double toxicity = item.at("toxicity").get<double>();
        if (toxicity < 0.0 || toxicity > 1.0) {
            out.error = "toxicity out of range";
            return out;
        }
        score.toxicity = toxicity;
    }
    if (item.contains("extras") && item.at("extras").is_object()) {
        for (const auto& [label, value] : item.at("extras").items()) {
            if (value.is_number()) score.extras[label] = value.get<double>();
        }
    }
    out.score = std::move(score);
    return out;
}

}  // namespace

RemoteScoreBatch parse_score_response(const std::string& body, std::size_t expected) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ScorerError("scorer response is not a JSON object");
    }
    const auto results = doc.find("results");
    if (results == doc.end() || !results->is_array()) {
        throw ScorerError("scorer response has no results array");
    }
    if (results->size() != expected) {
        throw ScorerError("scorer returned " + std::to_string(results->size()) +
                          " results for " + std::to_string(expected) + " texts");
    }

    RemoteScoreBatch batch;
    batch.items.reserve(results->size());
    for (const json& item : *results) {
        batch.items.push_back(parse_result_item(item));
    }
    if (doc.contains("model_versions") && doc.at("model_versions").is_object()) {
        for (const auto& [model, version] : doc.at("model_versions").items()) {
            if (version.is_string()) {
                batch.model_versions[model] = version.get<std::string>();
            }
        }
    }
    return batch;
}

RemoteScorer::RemoteScorer(const std::string& base_url, int max_batch, std::string id)
    : url_(parse_base_url(base_url)), max_batch_(std::max(1, max_batch)),
      id_(std::move(id)) {}

std::vector<ScoreVector> RemoteScorer::score_batch(const std::vector<std::string>& texts) {
    std::vector<ScoreVector> scores;
    scores.reserve(texts.size());

    for (std::size_t offset = 0; offset < texts.size();
         offset += static_cast<std::size_t>(max_batch_)) {
        const std::size_t count =
            std::min<std::size_t>(static_cast<std::size_t>(max_batch_),
                                  texts.size() - offset);
        const std::vector<std::string> chunk(texts.begin() + static_cast<long>(offset),
                                             texts.begin() +
                                                 static_cast<long>(offset + count));

        httplib::Client client(url_.origin);
        httplib::Result result =
            client.Post(url_.path_prefix + "/v1/score",
                        build_score_request(chunk, remote_analytics()),
                        "application/json");
        if (!result) {
            throw ScorerError("scorer service unreachable: " +
                              httplib::to_string(result.error()));
        }
        if (result->status != 200) {
            throw ScorerError("scorer service returned HTTP " +
                              std::to_string(result->status));
        }

        RemoteScoreBatch batch = parse_score_response(result->body, chunk.size());
        for (std::size_t i = 0; i < batch.items.size(); ++i) {
            const RemoteScoreItem& item = batch.items[i];
            if (!item.score) {
                throw ScorerError("scorer failed for text " +
                                  std::to_string(offset + i) + ": " + item.error);
            }
            scores.push_back(*item.score);
        }
    }
    return scores;
}

bool RemoteScorer::health_check() {
    httplib::Client client(url_.origin);
    httplib::Result result = client.Get(url_.path_prefix + "/v1/health");
    return result && result->status == 200;
}

}  // namespace edsim
