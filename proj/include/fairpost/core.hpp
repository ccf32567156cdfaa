#pragma once

#include <cstdint>
#include <vector>

#include "fairpost/types.hpp"

namespace fairpost {

/// Exact per-group confusion counts. Rates are computed in floating point
/// only at the accessor boundary and raise UndefinedRateError on a zero
/// denominator.
struct GroupCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const { return tp + fp + tn + fn; }
    std::int64_t positives() const { return tp + fn; }
    std::int64_t negatives() const { return fp + tn; }

    double tpr() const;
    double fpr() const;
    double selection_rate() const;
};

struct ConfusionStats {
    std::vector<GroupCounts> groups;

    int n_groups() const { return static_cast<int>(groups.size()); }
};

ConfusionStats confusion_stats(const LabeledPredictions& data);

/// Max over group pairs of |selection_rate(a) - selection_rate(a')|.
/// Zero iff demographic parity holds exactly.
double demographic_parity_difference(const ConfusionStats& stats);

/// Max over group pairs and over {tpr, fpr} of the absolute gap.
/// Zero iff equalized odds holds exactly.
double equalized_odds_difference(const ConfusionStats& stats);

/// Empirical P(Y=1 | A=a) per group.
std::vector<double> base_rate(const std::vector<int>& labels,
                              const std::vector<int>& groups, int n_groups);

}  // namespace fairpost
