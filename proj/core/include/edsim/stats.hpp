#pragma once

#include <map>
#include <string>
#include <vector>

#include "edsim/scoring.hpp"
#include "edsim/types.hpp"

namespace edsim {

// Shortest decimal form that round-trips (std::to_chars); stable across runs,
// used everywhere numbers land in report files.
std::string format_number(double value);

// Middle element of the sorted values, or the mean of the two middle
// elements for even length. Throws StatsError on an empty list.
double median(std::vector<double> values);

// Quantile by linear interpolation between closest ranks on an ascending
// list: with n values and 1-based rank h = (n - 1) * p + 1, the result
// interpolates between the values at floor(h) and floor(h) + 1. p in [0, 1].
double quantile_sorted(const std::vector<double>& sorted_values, double p);

// Five-number box summary of a cell's per-conversation sentiment means.
// Whiskers sit on the most extreme data points within 1.5 * IQR of the
// quartiles; points beyond are listed (ascending) as outliers.
struct CellSummary {
    std::string cell_key;
    long long n = 0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::vector<double> outliers;
};

CellSummary cell_summary(const std::vector<ConversationScore>& scores);

// "platform/community/model_key" — the cell key with its intervention
// dimension removed; the unit effects are compared within.
std::string group_of_cell(const std::string& cell_key);

struct InterventionEffect {
    std::string group_key;
    InterventionKind intervention = InterventionKind::none;
    double med_diff = 0.0;  // mediated median minus baseline median
};

// Both summaries must share a group; baseline must be the `none` cell.
InterventionEffect intervention_effect(const CellSummary& mediated,
                                       const CellSummary& baseline);

struct EffectSummary {
    std::string group_key;
    double med_s_none = 0.0;
    double mean_diff = 0.0;
    double max_diff = 0.0;
    InterventionKind max_intervention = InterventionKind::none;
    double min_diff = 0.0;
    InterventionKind min_intervention = InterventionKind::none;
};

// Mean/extremes of one group's effects. At most one effect per intervention
// kind; value ties on the extremes break toward the earlier intervention in
// the declared order.
EffectSummary effect_summary(const std::vector<InterventionEffect>& effects,
                             const CellSummary& baseline);

struct LabelDistribution {
    std::string group_key;
    LabelAnalytic analytic = LabelAnalytic::empathy_intent;
    std::map<std::string, double> proportions;  // nonnegative, sum to 1
};

// Pools the per-conversation count maps for the analytic and normalizes.
// Throws StatsError when the pooled counts are empty.
LabelDistribution label_distribution(const std::vector<ConversationScore>& scores,
                                     LabelAnalytic analytic);

}  // namespace edsim
