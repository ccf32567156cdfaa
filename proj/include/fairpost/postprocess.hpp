#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairpost/core.hpp"
#include "fairpost/roc.hpp"
#include "fairpost/types.hpp"

namespace fairpost {

enum class Constraint { None, DemographicParity, EqualizedOdds };

const char* constraint_name(Constraint c);
Constraint constraint_from_name(const std::string& name);

/// Per-group misclassification costs and population weights.
struct CostModel {
    std::vector<double> cost_fp;
    std::vector<double> cost_fn;
    std::vector<double> group_weights;

    /// Equal unit costs, weights proportional to group sizes in `scores`.
    static CostModel uniform(const ScoreSet& scores);

    void validate(int n_groups) const;
};

struct GroupOperating {
    double selection_rate = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

/// A fitted per-group randomized threshold policy together with the
/// analytically achieved operating points and the objective value.
struct FairPolicy {
    std::vector<MixturePolicy> thresholds;
    Constraint constraint = Constraint::None;
    std::vector<GroupOperating> achieved;
    double objective_value = 0.0;
    /// Set when the equalized-odds feasible region collapsed to the chance
    /// diagonal and the policy is a random guess.
    bool degenerate = false;

    int n_groups() const { return static_cast<int>(thresholds.size()); }

    /// Versioned plain-text key-value serialization for audit reproducibility.
    std::string to_text() const;
    static FairPolicy from_text(const std::string& text);
};

/// Analytic tolerance at which a fitted policy's achieved rates satisfy the
/// constraint.
inline constexpr double kConstraintTol = 1e-9;

/// Cost-optimal policy under equal selection rates across groups. When
/// `budget` is given the shared selection rate is fixed instead of optimized.
FairPolicy fit_demographic_parity(const ScoreSet& scores, const CostModel& cost,
                                  std::optional<double> budget = std::nullopt);

/// Cost-optimal common (fpr, tpr) point over the intersection of the
/// per-group ROC hull regions, realized per group as a randomized mixture.
FairPolicy fit_equalized_odds(const ScoreSet& scores, const CostModel& cost);

/// Unconstrained baseline: per-group deterministic cost-minimizing thresholds
/// (without a constraint the problem decomposes by group).
FairPolicy fit_unconstrained(const ScoreSet& scores, const CostModel& cost);

/// Deterministic single-threshold policy applied to every group.
FairPolicy single_threshold_policy(const ScoreSet& scores, double threshold);

/// Apply a policy; the threshold draw for sample i is keyed by (seed, i).
LabeledPredictions apply_policy(const FairPolicy& policy, const ScoreSet& scores,
                                std::uint64_t seed);

/// Fraction of each group whose outcome is decided by the random draw:
/// samples with score in (t_low, t_high], or the whole group when the policy
/// carries a nondegenerate coin component.
std::vector<double> randomization_width(const FairPolicy& policy,
                                        const ScoreSet& scores);

/// Expected misclassification cost of operating each group at `points`.
double expected_cost(const ScoreSet& scores, const CostModel& cost,
                     const std::vector<GroupOperating>& points);

}  // namespace fairpost
