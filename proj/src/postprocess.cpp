#include "fairpost/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "fairpost/rng.hpp"
#include "fairpost/text.hpp"

namespace fairpost {

const char* constraint_name(Constraint c) {
    switch (c) {
        case Constraint::None: return "none";
        case Constraint::DemographicParity: return "demographic_parity";
        case Constraint::EqualizedOdds: return "equalized_odds";
    }
    return "none";
}

Constraint constraint_from_name(const std::string& name) {
    if (name == "none") return Constraint::None;
    if (name == "demographic_parity") return Constraint::DemographicParity;
    if (name == "equalized_odds") return Constraint::EqualizedOdds;
    throw ValidationError("unknown constraint '" + name + "'");
}

CostModel CostModel::uniform(const ScoreSet& scores) {
    scores.validate();
    CostModel m;
    m.cost_fp.assign(scores.n_groups, 1.0);
    m.cost_fn.assign(scores.n_groups, 1.0);
    std::vector<std::int64_t> counts(scores.n_groups, 0);
    for (int g : scores.groups) ++counts[g];
    m.group_weights.resize(scores.n_groups);
    for (int g = 0; g < scores.n_groups; ++g) {
        m.group_weights[g] =
            static_cast<double>(counts[g]) / static_cast<double>(scores.size());
    }
    return m;
}

void CostModel::validate(int n_groups) const {
    auto check_size = [&](const std::vector<double>& v, const char* name) {
        if (static_cast<int>(v.size()) != n_groups) {
            throw ValidationError(std::string(name) + " must have one entry per group");
        }
    };
    check_size(cost_fp, "cost_fp");
    check_size(cost_fn, "cost_fn");
    check_size(group_weights, "group_weights");
    double total_cost = 0.0, total_weight = 0.0;
    for (int g = 0; g < n_groups; ++g) {
        if (cost_fp[g] < 0.0 || cost_fn[g] < 0.0) {
            throw ValidationError("costs must be non-negative");
        }
        if (group_weights[g] < 0.0) {
            throw ValidationError("group_weights must be non-negative");
        }
        total_cost += cost_fp[g] + cost_fn[g];
        total_weight += group_weights[g];
    }
    if (total_cost == 0.0) {
        throw ValidationError("at least one cost must be positive");
    }
    if (std::abs(total_weight - 1.0) > 1e-6) {
        throw ValidationError("group_weights must sum to 1");
    }
}

namespace {

// One achievable deterministic operating point of a group: predict positive
// iff score > threshold.
struct ThresholdEntry {
    double threshold = 0.0;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    double selection = 0.0;
    double fpr = 0.0;  // 0 when the group has no negatives
    double tpr = 0.0;  // 0 when the group has no positives
    double cost = 0.0; // per-capita within the group
};

struct GroupTable {
    std::vector<ThresholdEntry> entries;  // thresholds strictly decreasing
    std::int64_t n = 0;
    std::int64_t positives = 0;
    std::int64_t negatives = 0;

    double pos_frac() const { return static_cast<double>(positives) / n; }
    double neg_frac() const { return static_cast<double>(negatives) / n; }
};

std::vector<GroupTable> build_tables(const ScoreSet& scores, const CostModel& cost) {
    std::vector<std::vector<std::pair<double, int>>> per_group(scores.n_groups);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        per_group[scores.groups[i]].emplace_back(scores.scores[i], scores.labels[i]);
    }
    std::vector<GroupTable> tables(scores.n_groups);
    for (int g = 0; g < scores.n_groups; ++g) {
        auto& samples = per_group[g];
        if (samples.empty()) {
            throw ValidationError("group " + std::to_string(g) + " is empty");
        }
        std::sort(samples.begin(), samples.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        GroupTable& tab = tables[g];
        tab.n = static_cast<std::int64_t>(samples.size());
        for (const auto& [s, y] : samples) y == 1 ? ++tab.positives : ++tab.negatives;
        std::int64_t tp = 0, fp = 0;
        std::size_t i = 0;
        auto push = [&](double t) {
            ThresholdEntry e;
            e.threshold = t;
            e.tp = tp;
            e.fp = fp;
            e.selection = static_cast<double>(tp + fp) / tab.n;
            e.tpr = tab.positives > 0
                        ? static_cast<double>(tp) / tab.positives
                        : 0.0;
            e.fpr = tab.negatives > 0
                        ? static_cast<double>(fp) / tab.negatives
                        : 0.0;
            std::int64_t fn = tab.positives - tp;
            e.cost = (cost.cost_fp[g] * fp + cost.cost_fn[g] * fn) / tab.n;
            tab.entries.push_back(e);
        };
        while (i < samples.size()) {
            double t = samples[i].first;
            push(t);
            while (i < samples.size() && samples[i].first == t) {
                samples[i].second == 1 ? ++tp : ++fp;
                ++i;
            }
        }
        push(-std::numeric_limits<double>::infinity());
    }
    return tables;
}

// Mixture of the two adjacent entries bracketing a target selection rate.
struct RateMix {
    MixturePolicy policy;
    GroupOperating achieved;
    double cost = 0.0;
    double width = 0.0;  // fraction of the group inside (t_low, t_high]
};

RateMix mix_at_selection(const GroupTable& tab, double s) {
    const auto& e = tab.entries;
    // entries have selection 0 = e.front() up to 1 = e.back()
    std::size_t k = 0;
    while (k + 1 < e.size() && e[k + 1].selection <= s) ++k;
    RateMix out;
    if (std::abs(e[k].selection - s) <= 1e-15 || k + 1 == e.size()) {
        out.policy.t_low = out.policy.t_high = e[k].threshold;
        out.policy.p = 1.0;
        out.achieved = {e[k].selection, e[k].fpr, e[k].tpr};
        out.cost = e[k].cost;
        return out;
    }
    const ThresholdEntry& lo = e[k];      // selects less, higher threshold
    const ThresholdEntry& hi = e[k + 1];  // selects more, lower threshold
    double p = (s - lo.selection) / (hi.selection - lo.selection);
    out.policy.t_low = hi.threshold;
    out.policy.t_high = lo.threshold;
    out.policy.p = p;
    out.achieved = {s, p * hi.fpr + (1.0 - p) * lo.fpr,
                    p * hi.tpr + (1.0 - p) * lo.tpr};
    out.cost = p * hi.cost + (1.0 - p) * lo.cost;
    out.width = hi.selection - lo.selection;
    return out;
}

struct DpCandidate {
    double cost = std::numeric_limits<double>::infinity();
    double width = 0.0;
    double fpr = 0.0;
    std::vector<RateMix> mixes;
};

DpCandidate dp_candidate(const std::vector<GroupTable>& tables,
                         const CostModel& cost, double s) {
    DpCandidate c;
    c.cost = 0.0;
    for (std::size_t g = 0; g < tables.size(); ++g) {
        RateMix mix = mix_at_selection(tables[g], s);
        c.cost += cost.group_weights[g] * mix.cost;
        c.width += mix.width;
        c.fpr += cost.group_weights[g] * mix.achieved.fpr;
        c.mixes.push_back(std::move(mix));
    }
    return c;
}

bool better_candidate(double cost_a, double width_a, double fpr_a, double cost_b,
                      double width_b, double fpr_b) {
    if (cost_a < cost_b - kGeomTol) return true;
    if (cost_a > cost_b + kGeomTol) return false;
    if (width_a < width_b - kGeomTol) return true;
    if (width_a > width_b + kGeomTol) return false;
    return fpr_a < fpr_b - kGeomTol;
}

}  // namespace

FairPolicy fit_demographic_parity(const ScoreSet& scores, const CostModel& cost,
                                  std::optional<double> budget) {
    scores.validate();
    cost.validate(scores.n_groups);
    if (budget && (*budget < 0.0 || *budget > 1.0)) {
        throw ValidationError("budget must be in [0,1]");
    }
    std::vector<GroupTable> tables = build_tables(scores, cost);

    std::vector<double> candidates;
    if (budget) {
        candidates.push_back(*budget);
    } else {
        // piecewise-linear objective: the optimum sits on a breakpoint,
        // i.e. some group's achievable selection rate
        for (const GroupTable& tab : tables) {
            for (const ThresholdEntry& e : tab.entries) {
                candidates.push_back(e.selection);
            }
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()),
                         candidates.end());
    }

    DpCandidate best;
    bool have = false;
    for (double s : candidates) {
        DpCandidate c = dp_candidate(tables, cost, s);
        if (!have || better_candidate(c.cost, c.width, c.fpr, best.cost,
                                      best.width, best.fpr)) {
            best = std::move(c);
            have = true;
        }
    }

    FairPolicy policy;
    policy.constraint = Constraint::DemographicParity;
    policy.objective_value = best.cost;
    for (RateMix& mix : best.mixes) {
        policy.thresholds.push_back(mix.policy);
        policy.achieved.push_back(mix.achieved);
    }
    return policy;
}

FairPolicy fit_unconstrained(const ScoreSet& scores, const CostModel& cost) {
    scores.validate();
    cost.validate(scores.n_groups);
    std::vector<GroupTable> tables = build_tables(scores, cost);

    // the unconstrained problem decomposes by group: each group takes its own
    // cost-minimizing deterministic threshold
    FairPolicy policy;
    policy.constraint = Constraint::None;
    policy.objective_value = 0.0;
    for (std::size_t g = 0; g < tables.size(); ++g) {
        const ThresholdEntry* best = nullptr;
        for (const ThresholdEntry& e : tables[g].entries) {
            if (!best ||
                better_candidate(e.cost, 0.0, e.fpr, best->cost, 0.0, best->fpr)) {
                best = &e;
            }
        }
        MixturePolicy m;
        m.t_low = m.t_high = best->threshold;
        m.p = 1.0;
        policy.thresholds.push_back(m);
        policy.achieved.push_back({best->selection, best->fpr, best->tpr});
        policy.objective_value += cost.group_weights[g] * best->cost;
    }
    return policy;
}

FairPolicy single_threshold_policy(const ScoreSet& scores, double threshold) {
    scores.validate();
    FairPolicy policy;
    policy.constraint = Constraint::None;
    std::vector<std::int64_t> n(scores.n_groups, 0), pos(scores.n_groups, 0),
        sel(scores.n_groups, 0), tp(scores.n_groups, 0), fp(scores.n_groups, 0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        int g = scores.groups[i];
        ++n[g];
        pos[g] += scores.labels[i];
        if (scores.scores[i] > threshold) {
            ++sel[g];
            scores.labels[i] == 1 ? ++tp[g] : ++fp[g];
        }
    }
    for (int g = 0; g < scores.n_groups; ++g) {
        MixturePolicy m;
        m.t_low = m.t_high = threshold;
        policy.thresholds.push_back(m);
        std::int64_t neg = n[g] - pos[g];
        policy.achieved.push_back(
            {n[g] > 0 ? static_cast<double>(sel[g]) / n[g] : 0.0,
             neg > 0 ? static_cast<double>(fp[g]) / neg : 0.0,
             pos[g] > 0 ? static_cast<double>(tp[g]) / pos[g] : 0.0});
    }
    return policy;
}

FairPolicy fit_equalized_odds(const ScoreSet& scores, const CostModel& cost) {
    scores.validate();
    cost.validate(scores.n_groups);
    std::vector<GroupTable> tables = build_tables(scores, cost);

    std::vector<RocHull> hulls;
    hulls.reserve(scores.n_groups);
    for (int g = 0; g < scores.n_groups; ++g) {
        hulls.push_back(upper_hull(build_roc(scores, g)));
    }
    ConvexPolygon feasible = scores.n_groups >= 2 ? hull_intersection(hulls)
                                                  : hull_region(hulls[0]);

    auto point_cost = [&](const OperatingPoint& pt) {
        double c = 0.0;
        for (std::size_t g = 0; g < tables.size(); ++g) {
            c += cost.group_weights[g] *
                 (cost.cost_fp[g] * tables[g].neg_frac() * pt.fpr +
                  cost.cost_fn[g] * tables[g].pos_frac() * (1.0 - pt.tpr));
        }
        return c;
    };
    auto point_width = [&](const OperatingPoint& pt) {
        double w = 0.0;
        for (int g = 0; g < scores.n_groups; ++g) {
            MixturePolicy m = realize_point(hulls[g], pt);
            if (m.frontier_weight < 1.0) {
                w += 1.0;
            } else if (!(m.t_low == m.t_high)) {
                // fraction of the group inside the random band
                double lo_sel = 0.0, hi_sel = 0.0;
                for (const ThresholdEntry& e : tables[g].entries) {
                    if (e.threshold == m.t_high) lo_sel = e.selection;
                    if (e.threshold == m.t_low) hi_sel = e.selection;
                }
                w += hi_sel - lo_sel;
            }
        }
        return w;
    };

    FairPolicy policy;
    policy.constraint = Constraint::EqualizedOdds;

    bool degenerate = feasible.vertices.size() < 3 || feasible.area() <= 1e-9;
    OperatingPoint best{0.0, 0.0};
    if (degenerate) {
        // feasible set collapsed onto the chance diagonal: random-guess policy
        policy.degenerate = true;
        double best_cost = std::numeric_limits<double>::infinity();
        for (const OperatingPoint& v : feasible.vertices) {
            double d = 0.5 * (v.fpr + v.tpr);
            double c = point_cost({d, d});
            if (c < best_cost - kGeomTol) {
                best_cost = c;
                best = {d, d};
            }
        }
    } else {
        // linear objective over a convex polygon: optimum at a vertex;
        // ties resolved by total randomization width, then smaller fpr
        double best_cost = std::numeric_limits<double>::infinity();
        for (const OperatingPoint& v : feasible.vertices) {
            best_cost = std::min(best_cost, point_cost(v));
        }
        bool have = false;
        double best_width = 0.0;
        for (const OperatingPoint& v : feasible.vertices) {
            if (point_cost(v) > best_cost + kGeomTol) continue;
            double w = point_width(v);
            if (!have || better_candidate(0.0, w, v.fpr, 0.0, best_width, best.fpr)) {
                best = v;
                best_width = w;
                have = true;
            }
        }
    }

    policy.objective_value = point_cost(best);
    for (int g = 0; g < scores.n_groups; ++g) {
        MixturePolicy m = realize_point(hulls[g], best);
        policy.thresholds.push_back(m);
        double sel = tables[g].pos_frac() * best.tpr +
                     tables[g].neg_frac() * best.fpr;
        policy.achieved.push_back({sel, best.fpr, best.tpr});
    }
    return policy;
}

LabeledPredictions apply_policy(const FairPolicy& policy, const ScoreSet& scores,
                                std::uint64_t seed) {
    scores.validate();
    if (policy.n_groups() < scores.n_groups) {
        throw ValidationError("policy has no entry for group " +
                              std::to_string(policy.n_groups()));
    }
    LabeledPredictions out;
    out.n_groups = scores.n_groups;
    out.groups = scores.groups;
    out.labels = scores.labels;
    out.predictions.resize(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const MixturePolicy& m = policy.thresholds[scores.groups[i]];
        SampleRng rng(seed, i);
        int pred;
        if (rng.uniform() < m.frontier_weight) {
            double t = rng.uniform() < m.p ? m.t_low : m.t_high;
            pred = scores.scores[i] > t ? 1 : 0;
        } else {
            pred = rng.uniform() < m.fallback_rate ? 1 : 0;
        }
        out.predictions[i] = pred;
    }
    return out;
}

std::vector<double> randomization_width(const FairPolicy& policy,
                                        const ScoreSet& scores) {
    scores.validate();
    if (policy.n_groups() < scores.n_groups) {
        throw ValidationError("policy has no entry for every group");
    }
    std::vector<std::int64_t> in_band(scores.n_groups, 0), n(scores.n_groups, 0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        int g = scores.groups[i];
        const MixturePolicy& m = policy.thresholds[g];
        ++n[g];
        if (scores.scores[i] > m.t_low && scores.scores[i] <= m.t_high) {
            ++in_band[g];
        }
    }
    std::vector<double> widths(scores.n_groups, 0.0);
    for (int g = 0; g < scores.n_groups; ++g) {
        const MixturePolicy& m = policy.thresholds[g];
        if (n[g] == 0) continue;
        if (m.frontier_weight >= 1.0) {
            if (!m.deterministic() || m.t_low != m.t_high) {
                widths[g] = static_cast<double>(in_band[g]) / n[g];
            }
        } else if (m.fallback_rate > 0.0 && m.fallback_rate < 1.0) {
            widths[g] = 1.0;  // the coin can touch every member
        } else {
            widths[g] = static_cast<double>(in_band[g]) / n[g];
        }
    }
    return widths;
}

double expected_cost(const ScoreSet& scores, const CostModel& cost,
                     const std::vector<GroupOperating>& points) {
    scores.validate();
    cost.validate(scores.n_groups);
    if (static_cast<int>(points.size()) != scores.n_groups) {
        throw ValidationError("one operating point per group required");
    }
    std::vector<std::int64_t> n(scores.n_groups, 0), pos(scores.n_groups, 0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        ++n[scores.groups[i]];
        pos[scores.groups[i]] += scores.labels[i];
    }
    double c = 0.0;
    for (int g = 0; g < scores.n_groups; ++g) {
        if (n[g] == 0) continue;
        double pos_frac = static_cast<double>(pos[g]) / n[g];
        double neg_frac = 1.0 - pos_frac;
        c += cost.group_weights[g] *
             (cost.cost_fp[g] * neg_frac * points[g].fpr +
              cost.cost_fn[g] * pos_frac * (1.0 - points[g].tpr));
    }
    return c;
}

std::string FairPolicy::to_text() const {
    std::ostringstream out;
    out << "fairpost_policy 1\n";
    out << "constraint " << constraint_name(constraint) << "\n";
    out << "objective " << format_double(objective_value) << "\n";
    out << "degenerate " << (degenerate ? 1 : 0) << "\n";
    out << "groups " << n_groups() << "\n";
    for (int g = 0; g < n_groups(); ++g) {
        const MixturePolicy& m = thresholds[g];
        const GroupOperating& a = achieved[g];
        out << "group " << g << " t_low " << format_double(m.t_low) << " t_high "
            << format_double(m.t_high) << " p " << format_double(m.p)
            << " frontier_weight " << format_double(m.frontier_weight)
            << " fallback_rate " << format_double(m.fallback_rate) << " selection "
            << format_double(a.selection_rate) << " fpr " << format_double(a.fpr)
            << " tpr " << format_double(a.tpr) << "\n";
    }
    return out.str();
}

FairPolicy FairPolicy::from_text(const std::string& text) {
    std::istringstream in(text);
    std::string key;
    int version = 0;
    if (!(in >> key >> version) || key != "fairpost_policy" || version != 1) {
        throw ValidationError("not a fairpost_policy version 1 document");
    }
    FairPolicy policy;
    std::string name;
    in >> key >> name;
    if (key != "constraint") throw ValidationError("expected 'constraint'");
    policy.constraint = constraint_from_name(name);
    std::string tok;
    in >> key >> tok;
    if (key != "objective") throw ValidationError("expected 'objective'");
    policy.objective_value = parse_double(tok);
    int flag = 0;
    in >> key >> flag;
    if (key != "degenerate") throw ValidationError("expected 'degenerate'");
    policy.degenerate = flag != 0;
    int groups = 0;
    in >> key >> groups;
    if (key != "groups" || groups < 1) throw ValidationError("expected 'groups'");
    for (int g = 0; g < groups; ++g) {
        int id = -1;
        in >> key >> id;
        if (key != "group" || id != g) {
            throw ValidationError("expected 'group " + std::to_string(g) + "'");
        }
        MixturePolicy m;
        GroupOperating a;
        auto field = [&](const char* expect) {
            in >> key >> tok;
            if (key != expect) {
                throw ValidationError(std::string("expected '") + expect + "'");
            }
            return parse_double(tok);
        };
        m.t_low = field("t_low");
        m.t_high = field("t_high");
        m.p = field("p");
        m.frontier_weight = field("frontier_weight");
        m.fallback_rate = field("fallback_rate");
        a.selection_rate = field("selection");
        a.fpr = field("fpr");
        a.tpr = field("tpr");
        policy.thresholds.push_back(m);
        policy.achieved.push_back(a);
    }
    return policy;
}

}  // namespace fairpost
