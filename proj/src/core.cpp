#include "fairpost/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fairpost {

namespace detail {

void check_group_vector(const std::vector<int>& groups, int n_groups) {
    if (n_groups < 1) {
        throw ValidationError("n_groups must be >= 1");
    }
    for (int g : groups) {
        if (g < 0 || g >= n_groups) {
            throw ValidationError("group id " + std::to_string(g) +
                                  " outside 0.." + std::to_string(n_groups - 1));
        }
    }
}

void check_binary(const std::vector<int>& values, const char* name) {
    for (int v : values) {
        if (v != 0 && v != 1) {
            throw ValidationError(std::string(name) + " must be in {0,1}, got " +
                                  std::to_string(v));
        }
    }
}

}  // namespace detail

void LabeledPredictions::validate() const {
    if (groups.empty()) {
        throw ValidationError("LabeledPredictions requires n >= 1");
    }
    if (labels.size() != groups.size() || predictions.size() != groups.size()) {
        throw ValidationError("groups, labels, predictions must have equal length");
    }
    detail::check_group_vector(groups, n_groups);
    detail::check_binary(labels, "labels");
    detail::check_binary(predictions, "predictions");
}

void ScoreSet::validate() const {
    if (scores.empty()) {
        throw ValidationError("ScoreSet requires n >= 1");
    }
    if (labels.size() != scores.size() || groups.size() != scores.size()) {
        throw ValidationError("scores, labels, groups must have equal length");
    }
    detail::check_group_vector(groups, n_groups);
    detail::check_binary(labels, "labels");
    for (double s : scores) {
        if (!std::isfinite(s)) {
            throw ValidationError("scores must be finite");
        }
    }
}

double GroupCounts::tpr() const {
    if (positives() == 0) {
        throw UndefinedRateError("tpr undefined: no positive samples");
    }
    return static_cast<double>(tp) / static_cast<double>(positives());
}

double GroupCounts::fpr() const {
    if (negatives() == 0) {
        throw UndefinedRateError("fpr undefined: no negative samples");
    }
    return static_cast<double>(fp) / static_cast<double>(negatives());
}

double GroupCounts::selection_rate() const {
    if (total() == 0) {
        throw UndefinedRateError("selection rate undefined: empty group");
    }
    return static_cast<double>(tp + fp) / static_cast<double>(total());
}

ConfusionStats confusion_stats(const LabeledPredictions& data) {
    data.validate();
    ConfusionStats stats;
    stats.groups.resize(data.n_groups);
    for (std::size_t i = 0; i < data.size(); ++i) {
        GroupCounts& c = stats.groups[data.groups[i]];
        if (data.labels[i] == 1) {
            data.predictions[i] == 1 ? ++c.tp : ++c.fn;
        } else {
            data.predictions[i] == 1 ? ++c.fp : ++c.tn;
        }
    }
    return stats;
}

double demographic_parity_difference(const ConfusionStats& stats) {
    if (stats.n_groups() < 2) {
        throw ValidationError("fairness metrics require at least 2 groups");
    }
    double lo = 1.0;
    double hi = 0.0;
    for (int g = 0; g < stats.n_groups(); ++g) {
        if (stats.groups[g].total() == 0) {
            throw UndefinedRateError("selection rate undefined: group " +
                                     std::to_string(g) + " is empty");
        }
        double s = stats.groups[g].selection_rate();
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    return hi - lo;
}

double equalized_odds_difference(const ConfusionStats& stats) {
    if (stats.n_groups() < 2) {
        throw ValidationError("fairness metrics require at least 2 groups");
    }
    double tpr_lo = 1.0, tpr_hi = 0.0, fpr_lo = 1.0, fpr_hi = 0.0;
    for (int g = 0; g < stats.n_groups(); ++g) {
        const GroupCounts& c = stats.groups[g];
        if (c.positives() == 0) {
            throw UndefinedRateError("tpr undefined: group " + std::to_string(g) +
                                     " has no positive samples");
        }
        if (c.negatives() == 0) {
            throw UndefinedRateError("fpr undefined: group " + std::to_string(g) +
                                     " has no negative samples");
        }
        tpr_lo = std::min(tpr_lo, c.tpr());
        tpr_hi = std::max(tpr_hi, c.tpr());
        fpr_lo = std::min(fpr_lo, c.fpr());
        fpr_hi = std::max(fpr_hi, c.fpr());
    }
    return std::max(tpr_hi - tpr_lo, fpr_hi - fpr_lo);
}

std::vector<double> base_rate(const std::vector<int>& labels,
                              const std::vector<int>& groups, int n_groups) {
    if (labels.size() != groups.size()) {
        throw ValidationError("labels and groups must have equal length");
    }
    detail::check_group_vector(groups, n_groups);
    detail::check_binary(labels, "labels");
    std::vector<std::int64_t> pos(n_groups, 0), count(n_groups, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        ++count[groups[i]];
        pos[groups[i]] += labels[i];
    }
    std::vector<double> rates(n_groups, 0.0);
    for (int g = 0; g < n_groups; ++g) {
        if (count[g] == 0) {
            throw UndefinedRateError("base rate undefined: group " +
                                     std::to_string(g) + " is empty");
        }
        rates[g] = static_cast<double>(pos[g]) / static_cast<double>(count[g]);
    }
    return rates;
}

}  // namespace fairpost
