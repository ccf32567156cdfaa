#pragma once

#include <vector>

#include "fairpost/types.hpp"

namespace fairpost {

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = 0.0;
};

struct OperatingPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

/// Empirical ROC curve of one group. Points run from the highest threshold
/// (0,0) down to -inf (1,1); thresholds are strictly decreasing. The decision
/// rule is strict: predict positive iff score > threshold.
struct RocCurve {
    std::vector<RocPoint> points;
};

/// Upper-left convex frontier of a RocCurve. Always contains (0,0) and (1,1).
struct RocHull {
    std::vector<RocPoint> vertices;
};

/// Randomized threshold policy for one group. With probability
/// frontier_weight the threshold is drawn from the two-point mixture
/// (t_low with probability p, t_high otherwise); with the complementary
/// probability the prediction is a score-independent coin with
/// P(positive) = fallback_rate. frontier_weight < 1 marks the three-way
/// mixtures used to realize strictly interior targets.
struct MixturePolicy {
    double t_low = 0.0;
    double t_high = 0.0;
    double p = 1.0;
    double frontier_weight = 1.0;
    double fallback_rate = 0.0;

    bool three_way() const { return frontier_weight < 1.0; }
    bool deterministic() const;
};

/// Convex polygon in (fpr, tpr) space, vertices in counterclockwise order.
struct ConvexPolygon {
    std::vector<OperatingPoint> vertices;

    double area() const;
    bool contains(const OperatingPoint& pt, double tol) const;
};

/// Geometric comparison tolerance used throughout the hull code.
inline constexpr double kGeomTol = 1e-12;

RocCurve build_roc(const ScoreSet& scores, int group);

RocHull upper_hull(const RocCurve& curve);

/// Achievable region of a hull: weakly below the upper frontier and weakly
/// above the chance diagonal, as a CCW convex polygon.
ConvexPolygon hull_region(const RocHull& hull);

/// Expected (fpr, tpr) of a policy over the hull it was realized from.
OperatingPoint policy_operating_point(const MixturePolicy& policy,
                                      const RocHull& hull);

/// Signed distance of a target to the hull region (positive = outside).
double region_signed_distance(const RocHull& hull, const OperatingPoint& target);

/// Realize a target operating point as a randomized threshold mixture.
/// Frontier targets use the two adjacent vertices of the covering segment;
/// strictly interior targets additionally mix in a score-independent coin
/// (the point is projected vertically onto the frontier at its own fpr).
MixturePolicy realize_point(const RocHull& hull, const OperatingPoint& target);

/// Intersection of the achievable regions of all hulls. Non-empty by
/// construction: the chance diagonal belongs to every region.
ConvexPolygon hull_intersection(const std::vector<RocHull>& hulls);

}  // namespace fairpost
