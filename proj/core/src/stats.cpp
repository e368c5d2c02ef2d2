#include "edsim/stats.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "edsim/errors.hpp"
#include "edsim/matrix.hpp"

namespace edsim {

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;  // collapse negative zero
    std::array<char, 64> buffer{};
    auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc()) throw StatsError("number formatting failed");
    return std::string(buffer.data(), ptr);
}

double median(std::vector<double> values) {
    if (values.empty()) throw StatsError("median of empty list");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

double quantile_sorted(const std::vector<double>& sorted_values, double p) {
    if (sorted_values.empty()) throw StatsError("quantile of empty list");
    if (p < 0.0 || p > 1.0) throw StatsError("quantile fraction outside [0, 1]");
    const std::size_t n = sorted_values.size();
    const double h = static_cast<double>(n - 1) * p;  // 0-based rank
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted_values[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

CellSummary cell_summary(const std::vector<ConversationScore>& scores) {
    if (scores.empty()) throw StatsError("cell summary of empty score list");

    CellSummary summary;
    summary.cell_key = scores.front().cell_key;
    std::vector<double> values;
    values.reserve(scores.size());
    for (const ConversationScore& score : scores) {
        if (score.cell_key != summary.cell_key) {
            throw StatsError("cell summary mixes cells: " + summary.cell_key + " vs " +
                             score.cell_key);
        }
        values.push_back(score.sentiment_mean);
    }
    std::sort(values.begin(), values.end());

    summary.n = static_cast<long long>(values.size());
    summary.median = quantile_sorted(values, 0.5);
    summary.q1 = quantile_sorted(values, 0.25);
    summary.q3 = quantile_sorted(values, 0.75);

    const double iqr = summary.q3 - summary.q1;
    const double low_fence = summary.q1 - 1.5 * iqr;
    const double high_fence = summary.q3 + 1.5 * iqr;
    summary.whisker_low = summary.median;
    summary.whisker_high = summary.median;
    bool found_low = false;
    for (double v : values) {
        if (v < low_fence || v > high_fence) {
            summary.outliers.push_back(v);
            continue;
        }
        if (!found_low) {
            summary.whisker_low = v;
            found_low = true;
        }
        summary.whisker_high = v;
    }
    return summary;
}

std::string group_of_cell(const std::string& cell_key) {
    const CellCoords coords = parse_cell_key(cell_key);
    return std::string(platform_slug(coords.platform)) + "/" + coords.community_id +
           "/" + coords.model_key();
}

InterventionEffect intervention_effect(const CellSummary& mediated,
                                       const CellSummary& baseline) {
    const CellCoords mediated_coords = parse_cell_key(mediated.cell_key);
    const CellCoords baseline_coords = parse_cell_key(baseline.cell_key);
    if (baseline_coords.intervention != InterventionKind::none) {
        throw StatsError("baseline summary is not the unmediated cell: " +
                         baseline.cell_key);
    }
    if (mediated_coords.intervention == InterventionKind::none) {
        throw StatsError("mediated summary is the unmediated cell: " + mediated.cell_key);
    }
    const std::string group = group_of_cell(mediated.cell_key);
    if (group != group_of_cell(baseline.cell_key)) {
        throw StatsError("effect across different groups: " + mediated.cell_key +
                         " vs " + baseline.cell_key);
    }
    InterventionEffect effect;
    effect.group_key = group;
    effect.intervention = mediated_coords.intervention;
    effect.med_diff = mediated.median - baseline.median;
    return effect;
}

namespace {

// Position in the declared least-to-most-intensive order; used for
// deterministic tie-breaking (earlier wins).
std::size_t intervention_order(InterventionKind kind) {
    for (std::size_t i = 0; i < kAllInterventions.size(); ++i) {
        if (kAllInterventions[i] == kind) return i;
    }
    return kAllInterventions.size();
}

}  // namespace

EffectSummary effect_summary(const std::vector<InterventionEffect>& effects,
                             const CellSummary& baseline) {
    if (effects.empty()) throw StatsError("effect summary of empty effect list");
    const std::string group = group_of_cell(baseline.cell_key);

    EffectSummary summary;
    summary.group_key = group;
    summary.med_s_none = baseline.median;

    bool seen[8] = {};
    double sum = 0.0;
    bool first = true;
    for (const InterventionEffect& effect : effects) {
        if (effect.group_key != group) {
            throw StatsError("effect summary mixes groups: " + effect.group_key +
                             " vs " + group);
        }
        const std::size_t order = intervention_order(effect.intervention);
        if (seen[order]) {
            throw StatsError("duplicate intervention in effect summary: " +
                             std::string(intervention_slug(effect.intervention)));
        }
        seen[order] = true;
        sum += effect.med_diff;

        if (first || effect.med_diff > summary.max_diff ||
            (effect.med_diff == summary.max_diff &&
             order < intervention_order(summary.max_intervention))) {
            summary.max_diff = effect.med_diff;
            summary.max_intervention = effect.intervention;
        }
        if (first || effect.med_diff < summary.min_diff ||
            (effect.med_diff == summary.min_diff &&
             order < intervention_order(summary.min_intervention))) {
            summary.min_diff = effect.med_diff;
            summary.min_intervention = effect.intervention;
        }
        first = false;
    }
    summary.mean_diff = sum / static_cast<double>(effects.size());
    return summary;
}

LabelDistribution label_distribution(const std::vector<ConversationScore>& scores,
                                     LabelAnalytic analytic) {
    if (scores.empty()) throw StatsError("label distribution of empty score list");

    LabelDistribution distribution;
    distribution.group_key = group_of_cell(scores.front().cell_key);
    distribution.analytic = analytic;

    std::map<std::string, long long> pooled;
    long long total = 0;
    for (const ConversationScore& score : scores) {
        const std::map<std::string, long long>* counts = nullptr;
        switch (analytic) {
            case LabelAnalytic::empathy_intent: counts = &score.intent_counts; break;
            case LabelAnalytic::empathy_emotion:
                counts = &score.empathy_emotion_counts;
                break;
            case LabelAnalytic::emotion: counts = &score.emotion_counts; break;
        }
        for (const auto& [label, count] : *counts) {
            pooled[label] += count;
            total += count;
        }
    }
    if (total == 0) {
        throw StatsError(std::string("no counts recorded for analytic ") +
                         std::string(label_analytic_slug(analytic)));
    }
    for (const auto& [label, count] : pooled) {
        distribution.proportions[label] =
            static_cast<double>(count) / static_cast<double>(total);
    }
    return distribution;
}

}  // namespace edsim
