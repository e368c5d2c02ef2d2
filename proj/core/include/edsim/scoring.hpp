#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "edsim/conversation.hpp"

namespace edsim {

struct ScoreVector {
    double sentiment = 0.0;       // signed polarity in [-1, 1]
    std::string empathy_intent;   // open label vocabularies, scorer-defined
    std::string empathy_emotion;
    std::string emotion;
    std::optional<double> toxicity;       // [0, 1] when present
    std::map<std::string, double> extras; // optional analytics, label -> value
};

// Per-conversation aggregate over generated utterances only.
struct ConversationScore {
    std::string cell_key;
    int replicate_index = 0;
    double sentiment_mean = 0.0;
    std::map<std::string, long long> intent_counts;
    std::map<std::string, long long> empathy_emotion_counts;
    std::map<std::string, long long> emotion_counts;
    long long scored_utterance_count = 0;
};

// The categorical analytics a label distribution can be built over.
enum class LabelAnalytic { empathy_intent, empathy_emotion, emotion };
std::string_view label_analytic_slug(LabelAnalytic analytic);

class Scorer {
public:
    virtual ~Scorer() = default;
    // One ScoreVector per text, order-preserving. Stateless per text.
    virtual std::vector<ScoreVector> score_batch(const std::vector<std::string>& texts) = 0;
    // Names the score store file ({output_dir}/scores/{id}.jsonl).
    virtual std::string id() const = 0;
};

struct Lexicon {
    std::set<std::string> positive;
    std::set<std::string> negative;
};

// Small built-in sentiment lexicon; enough coverage for offline runs.
const Lexicon& builtin_lexicon();

// Tokenizes on non-letter boundaries (ASCII letters), lowercases, then
// sentiment = (P - N) / max(1, P + N) over positive/negative hits. Labels are
// "neutral", toxicity absent. Empty text scores 0.
ScoreVector score_utterance_lexicon(std::string_view text, const Lexicon& lexicon);

class LexiconScorer : public Scorer {
public:
    LexiconScorer() : lexicon_(builtin_lexicon()) {}
    explicit LexiconScorer(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}

    std::vector<ScoreVector> score_batch(const std::vector<std::string>& texts) override;
    std::string id() const override { return "lexicon"; }

private:
    Lexicon lexicon_;
};

// Scores only generated utterances — seed and mediator lines never reach the
// scorer. Throws ScorerError for failed conversations (callers skip and
// record the reason) and for conversations with nothing to score.
ConversationScore score_conversation(const Conversation& conversation, Scorer& scorer);

}  // namespace edsim
