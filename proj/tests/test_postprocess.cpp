#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fairpost/core.hpp"
#include "fairpost/postprocess.hpp"

using namespace fairpost;

namespace {

ScoreSet informative_scores(std::mt19937_64& rng, int per_group, int n_groups,
                            double informativeness = 1.5) {
    ScoreSet s;
    s.n_groups = n_groups;
    std::bernoulli_distribution coin(0.5);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int g = 0; g < n_groups; ++g) {
        // staggered base rates so groups differ
        std::bernoulli_distribution label(0.3 + 0.15 * g);
        for (int i = 0; i < per_group; ++i) {
            int y = label(rng) ? 1 : 0;
            s.groups.push_back(g);
            s.labels.push_back(y);
            s.scores.push_back((y ? 0.5 : -0.5) * informativeness + noise(rng));
        }
    }
    // both classes guaranteed
    for (int g = 0; g < n_groups; ++g) {
        s.groups.insert(s.groups.end(), {g, g});
        s.labels.insert(s.labels.end(), {1, 0});
        s.scores.insert(s.scores.end(), {0.0, 0.0});
    }
    return s;
}

// oracle: pooled per-capita cost when every group selects its top fraction s,
// computed by sorting copies of the raw data (interpolating between the two
// bracketing head counts)
double pooled_cost_at_rate(const ScoreSet& s, const CostModel& cost, double rate) {
    double total = 0.0;
    for (int g = 0; g < s.n_groups; ++g) {
        std::vector<std::pair<double, int>> rows;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s.groups[i] == g) rows.emplace_back(s.scores[i], s.labels[i]);
        }
        std::sort(rows.begin(), rows.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        std::int64_t n = static_cast<std::int64_t>(rows.size());
        std::int64_t pos = 0;
        for (const auto& [sc, y] : rows) pos += y;

        // cost when exactly the top k are selected; ties share a threshold, so
        // only tie-respecting head counts are achievable
        auto cost_at_k = [&](std::int64_t k) {
            std::int64_t tp = 0;
            for (std::int64_t i = 0; i < k; ++i) tp += rows[i].second;
            std::int64_t fp = k - tp;
            std::int64_t fn = pos - tp;
            return (cost.cost_fp[g] * fp + cost.cost_fn[g] * fn) / n;
        };
        auto achievable = [&](std::int64_t k) {
            return k == 0 || k == n || rows[k - 1].first != rows[k].first;
        };
        double want = rate * n;
        std::int64_t lo = static_cast<std::int64_t>(std::floor(want));
        while (lo > 0 && !achievable(lo)) --lo;
        std::int64_t hi = static_cast<std::int64_t>(std::ceil(want));
        if (hi == lo && want > lo) hi = lo + 1;
        while (hi < n && !achievable(hi)) ++hi;
        double c;
        if (hi == lo) {
            c = cost_at_k(lo);
        } else {
            double u = (want - lo) / static_cast<double>(hi - lo);
            c = (1.0 - u) * cost_at_k(lo) + u * cost_at_k(hi);
        }
        total += cost.group_weights[g] * c;
    }
    return total;
}

std::vector<double> breakpoints(const ScoreSet& s) {
    std::vector<double> out{0.0, 1.0};
    for (int g = 0; g < s.n_groups; ++g) {
        std::vector<double> scores;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s.groups[i] == g) scores.push_back(s.scores[i]);
        }
        std::sort(scores.begin(), scores.end(), std::greater<>());
        std::int64_t n = static_cast<std::int64_t>(scores.size());
        for (std::int64_t k = 1; k < n; ++k) {
            if (scores[k - 1] != scores[k]) {
                out.push_back(static_cast<double>(k) / n);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

TEST_CASE("CostModel::uniform and validate") {
    ScoreSet s;
    s.scores = {0.1, 0.9, 0.5, 0.4};
    s.labels = {0, 1, 1, 0};
    s.groups = {0, 0, 0, 1};
    s.n_groups = 2;
    CostModel m = CostModel::uniform(s);
    CHECK(m.group_weights[0] == doctest::Approx(0.75));
    CHECK(m.group_weights[1] == doctest::Approx(0.25));
    m.validate(2);

    CostModel bad = m;
    bad.group_weights = {0.9, 0.9};
    CHECK_THROWS_AS(bad.validate(2), ValidationError);
    bad = m;
    bad.cost_fp = {1.0};
    CHECK_THROWS_AS(bad.validate(2), ValidationError);
    bad = m;
    bad.cost_fp = {0.0, 0.0};
    bad.cost_fn = {0.0, 0.0};
    CHECK_THROWS_AS(bad.validate(2), ValidationError);
}

TEST_CASE("fit_unconstrained picks each group's cost-minimal threshold") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        ScoreSet s = informative_scores(rng, 150, 2);
        CostModel cost = CostModel::uniform(s);
        cost.cost_fn = {2.0, 2.0};
        FairPolicy p = fit_unconstrained(s, cost);
        REQUIRE(p.n_groups() == 2);
        CHECK(p.thresholds[0].deterministic());
        CHECK(p.thresholds[1].deterministic());

        // oracle: per group, scan every observed score as threshold plus -inf
        double best_total = 0.0;
        for (int g = 0; g < 2; ++g) {
            double best = std::numeric_limits<double>::infinity();
            std::vector<double> cand = s.scores;
            cand.push_back(-std::numeric_limits<double>::infinity());
            for (double t : cand) {
                double gc = 0.0;
                std::int64_t n = 0;
                for (std::size_t i = 0; i < s.size(); ++i) {
                    if (s.groups[i] != g) continue;
                    ++n;
                    bool sel = s.scores[i] > t;
                    if (sel && s.labels[i] == 0) gc += cost.cost_fp[g];
                    if (!sel && s.labels[i] == 1) gc += cost.cost_fn[g];
                }
                best = std::min(best, gc / n);
            }
            best_total += cost.group_weights[g] * best;
        }
        CHECK(p.objective_value == doctest::Approx(best_total).epsilon(1e-12));
    }
}

TEST_CASE("fit_demographic_parity") {
    std::mt19937_64 rng(42);

    SUBCASE("achieved selection rates are exactly equal") {
        for (int trial = 0; trial < 10; ++trial) {
            ScoreSet s = informative_scores(rng, 120, 3);
            CostModel cost = CostModel::uniform(s);
            FairPolicy p = fit_demographic_parity(s, cost);
            for (int g = 1; g < 3; ++g) {
                CHECK(std::abs(p.achieved[g].selection_rate -
                               p.achieved[0].selection_rate) <= kConstraintTol);
            }
        }
    }
    SUBCASE("objective matches the sorted-head-count oracle") {
        for (int trial = 0; trial < 8; ++trial) {
            ScoreSet s = informative_scores(rng, 90, 2);
            CostModel cost = CostModel::uniform(s);
            cost.cost_fp = {1.0, 1.5};
            cost.cost_fn = {2.0, 1.0};
            FairPolicy p = fit_demographic_parity(s, cost);
            double best = std::numeric_limits<double>::infinity();
            for (double r : breakpoints(s)) {
                best = std::min(best, pooled_cost_at_rate(s, cost, r));
            }
            CHECK(p.objective_value == doctest::Approx(best).epsilon(1e-9));
        }
    }
    SUBCASE("small discrete example, exhaustively checkable by hand") {
        // group 0: scores 3,2,1 labels 1,1,0; group 1: scores 3,2,1 labels 1,0,0
        ScoreSet s;
        s.scores = {3, 2, 1, 3, 2, 1};
        s.labels = {1, 1, 0, 1, 0, 0};
        s.groups = {0, 0, 0, 1, 1, 1};
        s.n_groups = 2;
        CostModel cost;
        cost.cost_fp = {1.0, 1.0};
        cost.cost_fn = {1.0, 1.0};
        cost.group_weights = {0.5, 0.5};
        FairPolicy p = fit_demographic_parity(s, cost);
        // shared rate 1/3 and 2/3 both cost 1/6 pooled; 2/3 has fpr mean 1/4,
        // 1/3 has fpr 0 -> tie broken toward smaller fpr: rate 1/3
        CHECK(p.achieved[0].selection_rate == doctest::Approx(1.0 / 3));
        CHECK(p.objective_value == doctest::Approx(1.0 / 6));
    }
    SUBCASE("budget pins the shared rate") {
        ScoreSet s = informative_scores(rng, 200, 2);
        CostModel cost = CostModel::uniform(s);
        FairPolicy p = fit_demographic_parity(s, cost, 0.37);
        for (int g = 0; g < 2; ++g) {
            CHECK(p.achieved[g].selection_rate == doctest::Approx(0.37).epsilon(1e-12));
        }
        CHECK(p.objective_value ==
              doctest::Approx(pooled_cost_at_rate(s, cost, 0.37)).epsilon(1e-9));
        CHECK_THROWS_AS(fit_demographic_parity(s, cost, 1.2), ValidationError);
    }
    SUBCASE("applied policy satisfies the metric empirically") {
        ScoreSet s = informative_scores(rng, 20000, 2);
        CostModel cost = CostModel::uniform(s);
        FairPolicy p = fit_demographic_parity(s, cost);
        LabeledPredictions pred = apply_policy(p, s, 9001);
        double diff = demographic_parity_difference(confusion_stats(pred));
        // 3 standard errors of a selection-rate difference at n=20k per group
        CHECK(diff <= 3.0 * std::sqrt(2.0 * 0.25 / 20000.0));
    }
}

TEST_CASE("fit_equalized_odds") {
    std::mt19937_64 rng(77);

    SUBCASE("achieved rates coincide across groups and sit in every region") {
        for (int trial = 0; trial < 8; ++trial) {
            ScoreSet s = informative_scores(rng, 150, 2);
            CostModel cost = CostModel::uniform(s);
            FairPolicy p = fit_equalized_odds(s, cost);
            REQUIRE(!p.degenerate);
            CHECK(std::abs(p.achieved[0].fpr - p.achieved[1].fpr) <= kConstraintTol);
            CHECK(std::abs(p.achieved[0].tpr - p.achieved[1].tpr) <= kConstraintTol);
            for (int g = 0; g < 2; ++g) {
                RocHull h = upper_hull(build_roc(s, g));
                CHECK(region_signed_distance(
                          h, {p.achieved[g].fpr, p.achieved[g].tpr}) <= 1e-9);
                OperatingPoint op = policy_operating_point(p.thresholds[g], h);
                CHECK(op.fpr == doctest::Approx(p.achieved[g].fpr).epsilon(1e-9));
                CHECK(op.tpr == doctest::Approx(p.achieved[g].tpr).epsilon(1e-9));
            }
        }
    }
    SUBCASE("no feasible grid point beats the fitted objective") {
        ScoreSet s = informative_scores(rng, 200, 2);
        CostModel cost = CostModel::uniform(s);
        cost.cost_fp = {2.0, 2.0};
        FairPolicy p = fit_equalized_odds(s, cost);
        std::vector<RocHull> hulls{upper_hull(build_roc(s, 0)),
                                   upper_hull(build_roc(s, 1))};
        std::vector<std::int64_t> n(2, 0), pos(2, 0);
        for (std::size_t i = 0; i < s.size(); ++i) {
            ++n[s.groups[i]];
            pos[s.groups[i]] += s.labels[i];
        }
        for (double f = 0.0; f <= 1.0; f += 0.01) {
            for (double t = f; t <= 1.0; t += 0.01) {
                bool ok = true;
                for (const RocHull& h : hulls) {
                    if (region_signed_distance(h, {f, t}) > 0.0) ok = false;
                }
                if (!ok) continue;
                double c = 0.0;
                for (int g = 0; g < 2; ++g) {
                    double pf = static_cast<double>(pos[g]) / n[g];
                    c += cost.group_weights[g] *
                         (cost.cost_fp[g] * (1.0 - pf) * f +
                          cost.cost_fn[g] * pf * (1.0 - t));
                }
                CHECK(c >= p.objective_value - 1e-9);
            }
        }
    }
    SUBCASE("uninformative scores collapse to a flagged random guess") {
        // one shared score value: every ROC is exactly the chance diagonal
        ScoreSet flat;
        flat.n_groups = 2;
        for (int g = 0; g < 2; ++g) {
            for (int i = 0; i < 8; ++i) {
                flat.groups.push_back(g);
                flat.labels.push_back(i % 2);
                flat.scores.push_back(0.5);  // one shared score value
            }
        }
        FairPolicy p = fit_equalized_odds(flat, CostModel::uniform(flat));
        CHECK(p.degenerate);
        CHECK(std::abs(p.achieved[0].fpr - p.achieved[0].tpr) <= kConstraintTol);
        CHECK(std::abs(p.achieved[0].fpr - p.achieved[1].fpr) <= kConstraintTol);
    }
    SUBCASE("applied policy satisfies the metric empirically") {
        ScoreSet s = informative_scores(rng, 20000, 2);
        CostModel cost = CostModel::uniform(s);
        FairPolicy p = fit_equalized_odds(s, cost);
        LabeledPredictions pred = apply_policy(p, s, 123);
        double diff = equalized_odds_difference(confusion_stats(pred));
        // conditional rates have at least ~6k samples per class per group
        CHECK(diff <= 3.0 * std::sqrt(2.0 * 0.25 / 6000.0));
    }
}

TEST_CASE("apply_policy determinism and threshold agreement") {
    std::mt19937_64 rng(3);
    ScoreSet s = informative_scores(rng, 500, 2);
    FairPolicy det = single_threshold_policy(s, 0.2);
    LabeledPredictions a = apply_policy(det, s, 1);
    LabeledPredictions b = apply_policy(det, s, 2);
    CHECK(a.predictions == b.predictions);  // deterministic policy ignores seed
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(a.predictions[i] == (s.scores[i] > 0.2 ? 1 : 0));
    }

    FairPolicy dp = fit_demographic_parity(s, CostModel::uniform(s), 0.4);
    LabeledPredictions r1 = apply_policy(dp, s, 500);
    LabeledPredictions r2 = apply_policy(dp, s, 500);
    CHECK(r1.predictions == r2.predictions);
    LabeledPredictions r3 = apply_policy(dp, s, 501);
    CHECK(r1.predictions != r3.predictions);
}

TEST_CASE("randomization_width counting oracle") {
    std::mt19937_64 rng(13);
    ScoreSet s = informative_scores(rng, 300, 2);
    FairPolicy dp = fit_demographic_parity(s, CostModel::uniform(s), 0.35);
    std::vector<double> w = randomization_width(dp, s);
    for (int g = 0; g < 2; ++g) {
        const MixturePolicy& m = dp.thresholds[g];
        std::int64_t band = 0, n = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s.groups[i] != g) continue;
            ++n;
            if (s.scores[i] > m.t_low && s.scores[i] <= m.t_high) ++band;
        }
        if (m.deterministic()) {
            CHECK(w[g] == 0.0);
        } else {
            CHECK(w[g] == doctest::Approx(static_cast<double>(band) / n));
            CHECK(w[g] > 0.0);
        }
    }

    // a coin policy can touch everyone
    FairPolicy coin;
    coin.thresholds.resize(2);
    coin.achieved.resize(2);
    for (auto& m : coin.thresholds) {
        m.frontier_weight = 0.0;
        m.fallback_rate = 0.4;
        m.t_low = m.t_high = std::numeric_limits<double>::infinity();
    }
    std::vector<double> wc = randomization_width(coin, s);
    CHECK(wc[0] == 1.0);
    CHECK(wc[1] == 1.0);
}

TEST_CASE("expected_cost arithmetic") {
    ScoreSet s;
    s.scores = {1, 2, 3, 4};
    s.labels = {1, 0, 1, 1};
    s.groups = {0, 0, 1, 1};
    s.n_groups = 2;
    CostModel cost;
    cost.cost_fp = {1.0, 3.0};
    cost.cost_fn = {2.0, 1.0};
    cost.group_weights = {0.5, 0.5};
    // group 0: pos_frac 0.5; group 1: pos_frac 1.0
    std::vector<GroupOperating> pts = {{0.0, 0.5, 0.5}, {0.0, 0.0, 0.75}};
    double c = expected_cost(s, cost, pts);
    double expect = 0.5 * (1.0 * 0.5 * 0.5 + 2.0 * 0.5 * 0.5) +
                    0.5 * (3.0 * 0.0 * 0.0 + 1.0 * 1.0 * 0.25);
    CHECK(c == doctest::Approx(expect));
}

TEST_CASE("policy text round-trip") {
    std::mt19937_64 rng(21);
    ScoreSet s = informative_scores(rng, 100, 2);
    FairPolicy p = fit_equalized_odds(s, CostModel::uniform(s));
    std::string text = p.to_text();
    FairPolicy q = FairPolicy::from_text(text);
    CHECK(q.constraint == p.constraint);
    CHECK(q.degenerate == p.degenerate);
    CHECK(q.objective_value == p.objective_value);
    REQUIRE(q.n_groups() == p.n_groups());
    for (int g = 0; g < p.n_groups(); ++g) {
        CHECK(q.thresholds[g].t_low == p.thresholds[g].t_low);
        CHECK(q.thresholds[g].t_high == p.thresholds[g].t_high);
        CHECK(q.thresholds[g].p == p.thresholds[g].p);
        CHECK(q.thresholds[g].frontier_weight == p.thresholds[g].frontier_weight);
        CHECK(q.thresholds[g].fallback_rate == p.thresholds[g].fallback_rate);
        CHECK(q.achieved[g].selection_rate == p.achieved[g].selection_rate);
    }
    CHECK(q.to_text() == text);

    CHECK_THROWS_AS(FairPolicy::from_text("bogus"), ValidationError);
}

TEST_CASE("duplicating every sample changes no fitted policy") {
    std::mt19937_64 rng(55);
    ScoreSet s = informative_scores(rng, 80, 2);
    ScoreSet doubled = s;
    doubled.scores.insert(doubled.scores.end(), s.scores.begin(), s.scores.end());
    doubled.labels.insert(doubled.labels.end(), s.labels.begin(), s.labels.end());
    doubled.groups.insert(doubled.groups.end(), s.groups.begin(), s.groups.end());
    CostModel cost = CostModel::uniform(s);

    FairPolicy a = fit_demographic_parity(s, cost);
    FairPolicy b = fit_demographic_parity(doubled, cost);
    CHECK(a.objective_value == doctest::Approx(b.objective_value).epsilon(1e-12));
    for (int g = 0; g < 2; ++g) {
        CHECK(a.achieved[g].selection_rate ==
              doctest::Approx(b.achieved[g].selection_rate).epsilon(1e-12));
    }

    FairPolicy c = fit_equalized_odds(s, cost);
    FairPolicy d = fit_equalized_odds(doubled, cost);
    CHECK(c.objective_value == doctest::Approx(d.objective_value).epsilon(1e-12));
    CHECK(c.achieved[0].fpr == doctest::Approx(d.achieved[0].fpr).epsilon(1e-12));
    CHECK(c.achieved[0].tpr == doctest::Approx(d.achieved[0].tpr).epsilon(1e-12));
}
