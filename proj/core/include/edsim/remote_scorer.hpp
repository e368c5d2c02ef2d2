#pragma once

#include <map>
#include <string>
#include <vector>

#include "edsim/http_backend.hpp"
#include "edsim/scoring.hpp"

namespace edsim {

inline constexpr int kDefaultScoreBatchLimit = 64;

// The five analytics requested from the scoring service.
const std::vector<std::string>& remote_analytics();

// One entry per input text: a score, or that item's error marker.
struct RemoteScoreItem {
    std::optional<ScoreVector> score;
    std::string error;  // nonempty iff score is absent
};

struct RemoteScoreBatch {
    std::vector<RemoteScoreItem> items;
    std::map<std::string, std::string> model_versions;
};

// Wire mapping for POST /v1/score, transport-free so contract tests run
// against captured bodies. Request: {"texts":[...], "analytics":[...]};
// response: {"results":[{sentiment, empathy_intent, empathy_emotion, emotion,
// toxicity?, extras?} | {"error": text} ...], "model_versions":{...}}.
std::string build_score_request(const std::vector<std::string>& texts,
                                const std::vector<std::string>& analytics);

// Throws ScorerError when the body is not a valid response or the result
// count differs from `expected`. Out-of-range values become per-item errors.
RemoteScoreBatch parse_score_response(const std::string& body, std::size_t expected);

// Client for the scoring service. Splits batches (order preserved), and
// surfaces transport failures and per-item errors as ScorerError — callers
// decide whether to retry; nothing is partially returned.
class RemoteScorer : public Scorer {
public:
    explicit RemoteScorer(const std::string& base_url,
                          int max_batch = kDefaultScoreBatchLimit,
                          std::string id = "remote");

    std::vector<ScoreVector> score_batch(const std::vector<std::string>& texts) override;
    std::string id() const override { return id_; }

    bool health_check();  // GET /v1/health -> 200

private:
    ParsedUrl url_;
    int max_batch_;
    std::string id_;
};

}  // namespace edsim
