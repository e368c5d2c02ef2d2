#include "edsim/scoring.hpp"

#include <algorithm>
#include <cctype>

#include "edsim/errors.hpp"

namespace edsim {

std::string_view label_analytic_slug(LabelAnalytic analytic) {
    switch (analytic) {
        case LabelAnalytic::empathy_intent: return "empathy_intent";
        case LabelAnalytic::empathy_emotion: return "empathy_emotion";
        case LabelAnalytic::emotion: return "emotion";
    }
    return "";
}

const Lexicon& builtin_lexicon() {
    static const Lexicon lexicon{
        {"good", "great", "happy", "love", "helpful", "kind", "healthy", "better",
         "hopeful", "proud", "calm", "support", "wonderful", "glad", "thanks", "nice"},
        {"bad", "awful", "sad", "hate", "worried", "tired", "unhealthy", "worse",
         "afraid", "angry", "hurt", "alone", "terrible", "ashamed", "sick", "ugly"},
    };
    return lexicon;
}

ScoreVector score_utterance_lexicon(std::string_view text, const Lexicon& lexicon) {
    if (lexicon.positive.empty() && lexicon.negative.empty()) {
        throw ValidationError("lexicon is empty");
    }
    long long positive = 0;
    long long negative = 0;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        if (lexicon.positive.count(token) != 0) ++positive;
        if (lexicon.negative.count(token) != 0) ++negative;
        token.clear();
    };
    for (char c : text) {
        if (std::isalpha(static_cast<unsigned char>(c)) != 0) {
            token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else {
            flush();
        }
    }
    flush();

    ScoreVector score;
    score.sentiment = static_cast<double>(positive - negative) /
                      static_cast<double>(std::max(1LL, positive + negative));
    score.empathy_intent = "neutral";
    score.empathy_emotion = "neutral";
    score.emotion = "neutral";
    return score;
}

std::vector<ScoreVector> LexiconScorer::score_batch(const std::vector<std::string>& texts) {
    std::vector<ScoreVector> scores;
    scores.reserve(texts.size());
    for (const std::string& text : texts) {
        scores.push_back(score_utterance_lexicon(text, lexicon_));
    }
    return scores;
}

ConversationScore score_conversation(const Conversation& conversation, Scorer& scorer) {
    if (conversation.status != ConversationStatus::complete) {
        throw ScorerError("conversation failed, nothing to score: " +
                          conversation.failure_reason.value_or("unknown reason"));
    }
    std::vector<std::string> texts;
    for (const Utterance& utterance : conversation.utterances) {
        if (utterance.generated) texts.push_back(utterance.text);
    }
    if (texts.empty()) {
        throw ScorerError("conversation has no generated utterances: " +
                          conversation.cell_key);
    }

    const std::vector<ScoreVector> scores = scorer.score_batch(texts);
    if (scores.size() != texts.size()) {
        throw ScorerError("scorer returned " + std::to_string(scores.size()) +
                          " results for " + std::to_string(texts.size()) + " texts");
    }

    ConversationScore aggregate;
    aggregate.cell_key = conversation.cell_key;
    aggregate.replicate_index = conversation.replicate_index;
    aggregate.scored_utterance_count = static_cast<long long>(scores.size());
    double sum = 0.0;
    for (const ScoreVector& score : scores) {
        sum += score.sentiment;
        ++aggregate.intent_counts[score.empathy_intent];
        ++aggregate.empathy_emotion_counts[score.empathy_emotion];
        ++aggregate.emotion_counts[score.emotion];
    }
    aggregate.sentiment_mean = sum / static_cast<double>(scores.size());
    return aggregate;
}

}  // namespace edsim
