#include "fairpost/roc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fairpost {

namespace {

double cross(const OperatingPoint& o, const OperatingPoint& a,
             const OperatingPoint& b) {
    return (a.fpr - o.fpr) * (b.tpr - o.tpr) - (a.tpr - o.tpr) * (b.fpr - o.fpr);
}

OperatingPoint as_point(const RocPoint& p) { return {p.fpr, p.tpr}; }

double point_segment_distance(const OperatingPoint& p, const OperatingPoint& a,
                              const OperatingPoint& b) {
    double dx = b.fpr - a.fpr;
    double dy = b.tpr - a.tpr;
    double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) {
        return std::hypot(p.fpr - a.fpr, p.tpr - a.tpr);
    }
    double u = ((p.fpr - a.fpr) * dx + (p.tpr - a.tpr) * dy) / len2;
    u = std::clamp(u, 0.0, 1.0);
    return std::hypot(p.fpr - (a.fpr + u * dx), p.tpr - (a.tpr + u * dy));
}

}  // namespace

bool MixturePolicy::deterministic() const {
    return frontier_weight >= 1.0 && (t_low == t_high || p >= 1.0 || p <= 0.0);
}

double ConvexPolygon::area() const {
    if (vertices.size() < 3) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const OperatingPoint& a = vertices[i];
        const OperatingPoint& b = vertices[(i + 1) % vertices.size()];
        s += a.fpr * b.tpr - b.fpr * a.tpr;
    }
    return 0.5 * s;
}

bool ConvexPolygon::contains(const OperatingPoint& pt, double tol) const {
    if (vertices.empty()) return false;
    if (vertices.size() == 1) {
        return std::hypot(pt.fpr - vertices[0].fpr, pt.tpr - vertices[0].tpr) <= tol;
    }
    if (vertices.size() == 2) {
        return point_segment_distance(pt, vertices[0], vertices[1]) <= tol;
    }
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const OperatingPoint& a = vertices[i];
        const OperatingPoint& b = vertices[(i + 1) % vertices.size()];
        if (cross(a, b, pt) < -tol) return false;
    }
    return true;
}

RocCurve build_roc(const ScoreSet& scores, int group) {
    scores.validate();
    if (group < 0 || group >= scores.n_groups) {
        throw ValidationError("unknown group id " + std::to_string(group));
    }
    // (score, label) pairs of the group, sorted by score descending
    std::vector<std::pair<double, int>> samples;
    std::int64_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores.groups[i] != group) continue;
        samples.emplace_back(scores.scores[i], scores.labels[i]);
        scores.labels[i] == 1 ? ++pos : ++neg;
    }
    if (pos == 0 || neg == 0) {
        throw ValidationError("ROC construction requires both classes in group " +
                              std::to_string(group) + " (positives=" +
                              std::to_string(pos) + ", negatives=" +
                              std::to_string(neg) + ")");
    }
    std::sort(samples.begin(), samples.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    RocCurve curve;
    // Predict positive iff score > t. Walking thresholds down through the
    // distinct scores adds each score class to the positive side; the first
    // threshold (the max score) selects nobody and the final -inf threshold
    // selects everyone.
    std::int64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < samples.size()) {
        double t = samples[i].first;
        curve.points.push_back({static_cast<double>(fp) / neg,
                                static_cast<double>(tp) / pos, t});
        while (i < samples.size() && samples[i].first == t) {
            samples[i].second == 1 ? ++tp : ++fp;
            ++i;
        }
    }
    curve.points.push_back({1.0, 1.0, -std::numeric_limits<double>::infinity()});
    return curve;
}

RocHull upper_hull(const RocCurve& curve) {
    if (curve.points.size() < 2) {
        throw ValidationError("ROC curve needs at least 2 points");
    }
    RocHull hull;
    for (const RocPoint& p : curve.points) {
        while (hull.vertices.size() >= 2 &&
               cross(as_point(hull.vertices[hull.vertices.size() - 2]),
                     as_point(hull.vertices.back()), as_point(p)) >= 0.0) {
            hull.vertices.pop_back();
        }
        hull.vertices.push_back(p);
    }
    return hull;
}

ConvexPolygon hull_region(const RocHull& hull) {
    ConvexPolygon poly;
    const auto& v = hull.vertices;
    if (v.size() < 2) {
        throw ValidationError("hull needs at least 2 vertices");
    }
    // Diagonal edge (0,0)->(1,1), then the frontier walked back.
    poly.vertices.push_back({0.0, 0.0});
    poly.vertices.push_back({1.0, 1.0});
    for (std::size_t i = v.size() - 1; i-- > 1;) {
        poly.vertices.push_back(as_point(v[i]));
    }
    // A frontier equal to the diagonal leaves a degenerate 2-vertex polygon.
    if (poly.vertices.size() == 2) return poly;
    // Drop frontier vertices that sit on the diagonal next to the endpoints.
    std::vector<OperatingPoint> cleaned;
    for (const OperatingPoint& p : poly.vertices) {
        bool dup = false;
        for (const OperatingPoint& q : cleaned) {
            if (std::hypot(p.fpr - q.fpr, p.tpr - q.tpr) <= kGeomTol) {
                dup = true;
                break;
            }
        }
        if (!dup) cleaned.push_back(p);
    }
    poly.vertices = std::move(cleaned);
    return poly;
}

double region_signed_distance(const RocHull& hull, const OperatingPoint& target) {
    ConvexPolygon poly = hull_region(hull);
    if (poly.vertices.size() == 2) {
        return point_segment_distance(target, poly.vertices[0], poly.vertices[1]);
    }
    double d = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
        const OperatingPoint& a = poly.vertices[i];
        const OperatingPoint& b = poly.vertices[(i + 1) % poly.vertices.size()];
        double len = std::hypot(b.fpr - a.fpr, b.tpr - a.tpr);
        if (len == 0.0) continue;
        // positive outside the CCW edge
        d = std::max(d, -cross(a, b, target) / len);
    }
    return d;
}

namespace {

// Two-threshold mixture realizing a point on the frontier segment chain.
MixturePolicy frontier_policy(const RocHull& hull, const OperatingPoint& target) {
    const auto& v = hull.vertices;
    // vertex hit
    for (const RocPoint& p : v) {
        if (std::hypot(target.fpr - p.fpr, target.tpr - p.tpr) <= kGeomTol) {
            MixturePolicy m;
            m.t_low = m.t_high = p.threshold;
            m.p = 1.0;
            return m;
        }
    }
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const RocPoint& hi = v[i];      // higher threshold, lower fpr
        const RocPoint& lo = v[i + 1];  // lower threshold, higher fpr
        double df = lo.fpr - hi.fpr;
        double dt = lo.tpr - hi.tpr;
        double p;
        if (std::abs(df) >= std::abs(dt)) {
            if (target.fpr < hi.fpr - kGeomTol || target.fpr > lo.fpr + kGeomTol) {
                continue;
            }
            p = (target.fpr - hi.fpr) / df;
        } else {
            if (target.tpr < hi.tpr - kGeomTol || target.tpr > lo.tpr + kGeomTol) {
                continue;
            }
            p = (target.tpr - hi.tpr) / dt;
        }
        p = std::clamp(p, 0.0, 1.0);
        // segment membership check
        OperatingPoint mix{hi.fpr + p * df, hi.tpr + p * dt};
        if (std::hypot(mix.fpr - target.fpr, mix.tpr - target.tpr) > 1e-9) {
            continue;
        }
        MixturePolicy m;
        m.t_low = lo.threshold;
        m.t_high = hi.threshold;
        m.p = p;
        return m;
    }
    throw InfeasiblePointError("target not on hull frontier", 0.0);
}

// Frontier height at a given fpr (max tpr of the frontier at that abscissa).
double frontier_height(const RocHull& hull, double fpr) {
    const auto& v = hull.vertices;
    double h = fpr;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const RocPoint& a = v[i];
        const RocPoint& b = v[i + 1];
        if (fpr < a.fpr - kGeomTol || fpr > b.fpr + kGeomTol) continue;
        if (b.fpr - a.fpr <= kGeomTol) {
            h = std::max(h, std::max(a.tpr, b.tpr));
        } else {
            double u = (fpr - a.fpr) / (b.fpr - a.fpr);
            h = std::max(h, a.tpr + u * (b.tpr - a.tpr));
        }
    }
    return h;
}

}  // namespace

OperatingPoint policy_operating_point(const MixturePolicy& policy,
                                      const RocHull& hull) {
    if (policy.frontier_weight <= 0.0) {
        // pure coin: thresholds are never consulted
        return {policy.fallback_rate, policy.fallback_rate};
    }
    auto vertex_point = [&](double t) -> OperatingPoint {
        for (const RocPoint& p : hull.vertices) {
            if (p.threshold == t) return as_point(p);
        }
        throw ValidationError("threshold does not match any hull vertex");
    };
    OperatingPoint lo = vertex_point(policy.t_low);
    OperatingPoint hi = vertex_point(policy.t_high);
    double f = policy.p * lo.fpr + (1.0 - policy.p) * hi.fpr;
    double t = policy.p * lo.tpr + (1.0 - policy.p) * hi.tpr;
    double w = policy.frontier_weight;
    return {w * f + (1.0 - w) * policy.fallback_rate,
            w * t + (1.0 - w) * policy.fallback_rate};
}

MixturePolicy realize_point(const RocHull& hull, const OperatingPoint& target) {
    if (!std::isfinite(target.fpr) || !std::isfinite(target.tpr)) {
        throw ValidationError("target operating point must be finite");
    }
    double sd = region_signed_distance(hull, target);
    if (sd > kGeomTol) {
        throw InfeasiblePointError(
            "target (" + std::to_string(target.fpr) + ", " +
                std::to_string(target.tpr) +
                ") outside hull region, signed distance " + std::to_string(sd),
            sd);
    }
    double h = frontier_height(hull, target.fpr);
    if (target.tpr >= h - kGeomTol) {
        return frontier_policy(hull, {target.fpr, h});
    }
    if (h - target.fpr <= kGeomTol || target.tpr <= target.fpr + kGeomTol) {
        // on (or vertically under a degenerate piece of) the chance diagonal
        MixturePolicy m;
        m.t_low = m.t_high = std::numeric_limits<double>::infinity();
        m.p = 1.0;
        m.frontier_weight = 0.0;
        m.fallback_rate = target.fpr;
        return m;
    }
    // interior: mix the frontier point at the same fpr with a coin of the
    // same rate, which pins the expected point exactly
    MixturePolicy m = frontier_policy(hull, {target.fpr, h});
    m.frontier_weight = (target.tpr - target.fpr) / (h - target.fpr);
    m.fallback_rate = target.fpr;
    return m;
}

namespace {

std::vector<OperatingPoint> clip_halfplane(const std::vector<OperatingPoint>& poly,
                                           const OperatingPoint& a,
                                           const OperatingPoint& b) {
    std::vector<OperatingPoint> out;
    if (poly.empty()) return out;
    std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const OperatingPoint& cur = poly[i];
        const OperatingPoint& nxt = poly[(i + 1) % n];
        double dc = cross(a, b, cur);
        double dn = cross(a, b, nxt);
        bool cur_in = dc >= -kGeomTol;
        bool nxt_in = dn >= -kGeomTol;
        if (cur_in) out.push_back(cur);
        if (cur_in != nxt_in) {
            double denom = dc - dn;
            if (std::abs(denom) > 0.0) {
                double u = dc / denom;
                out.push_back({cur.fpr + u * (nxt.fpr - cur.fpr),
                               cur.tpr + u * (nxt.tpr - cur.tpr)});
            }
        }
    }
    // drop near-duplicate consecutive vertices
    std::vector<OperatingPoint> cleaned;
    for (const OperatingPoint& p : out) {
        if (cleaned.empty() ||
            std::hypot(p.fpr - cleaned.back().fpr, p.tpr - cleaned.back().tpr) >
                kGeomTol) {
            cleaned.push_back(p);
        }
    }
    while (cleaned.size() > 1 &&
           std::hypot(cleaned.front().fpr - cleaned.back().fpr,
                      cleaned.front().tpr - cleaned.back().tpr) <= kGeomTol) {
        cleaned.pop_back();
    }
    return cleaned;
}

}  // namespace

ConvexPolygon hull_intersection(const std::vector<RocHull>& hulls) {
    if (hulls.size() < 2) {
        throw ValidationError("hull_intersection requires at least 2 hulls");
    }
    std::vector<OperatingPoint> result = hull_region(hulls[0]).vertices;
    for (std::size_t h = 1; h < hulls.size(); ++h) {
        ConvexPolygon clip = hull_region(hulls[h]);
        std::size_t n = clip.vertices.size();
        if (n == 2) {
            // degenerate clip region: intersect with the line from both sides
            result = clip_halfplane(result, clip.vertices[0], clip.vertices[1]);
            result = clip_halfplane(result, clip.vertices[1], clip.vertices[0]);
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                result = clip_halfplane(result, clip.vertices[i],
                                        clip.vertices[(i + 1) % n]);
                if (result.empty()) break;
            }
        }
    }
    // The diagonal belongs to every region; an empty result can only come
    // from accumulated tolerance on a degenerate instance.
    if (result.empty()) {
        result = {{0.0, 0.0}, {1.0, 1.0}};
    }
    ConvexPolygon poly;
    poly.vertices = std::move(result);
    return poly;
}

}  // namespace fairpost
