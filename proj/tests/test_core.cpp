#include <doctest.h>

#include <algorithm>
#include <random>

#include "fairpost/core.hpp"

using namespace fairpost;

namespace {

LabeledPredictions random_predictions(std::mt19937_64& rng, int n, int n_groups) {
    LabeledPredictions d;
    d.n_groups = n_groups;
    std::uniform_int_distribution<int> group(0, n_groups - 1);
    std::bernoulli_distribution coin(0.5);
    for (int i = 0; i < n; ++i) {
        d.groups.push_back(group(rng));
        d.labels.push_back(coin(rng) ? 1 : 0);
        d.predictions.push_back(coin(rng) ? 1 : 0);
    }
    return d;
}

// independent per-sample tally, kept separate from confusion_stats
std::vector<GroupCounts> brute_tally(const LabeledPredictions& d) {
    std::vector<GroupCounts> out(d.n_groups);
    for (std::size_t i = 0; i < d.size(); ++i) {
        GroupCounts& c = out[d.groups[i]];
        if (d.labels[i] == 1 && d.predictions[i] == 1) ++c.tp;
        if (d.labels[i] == 1 && d.predictions[i] == 0) ++c.fn;
        if (d.labels[i] == 0 && d.predictions[i] == 1) ++c.fp;
        if (d.labels[i] == 0 && d.predictions[i] == 0) ++c.tn;
    }
    return out;
}

}  // namespace

TEST_CASE("confusion_stats counts the worked example") {
    LabeledPredictions d;
    d.groups = {0, 0, 1, 1};
    d.labels = {1, 0, 1, 0};
    d.predictions = {1, 0, 0, 1};
    d.n_groups = 2;
    ConfusionStats s = confusion_stats(d);
    CHECK(s.groups[0].tp == 1);
    CHECK(s.groups[0].tn == 1);
    CHECK(s.groups[0].fp == 0);
    CHECK(s.groups[0].fn == 0);
    CHECK(s.groups[1].fn == 1);
    CHECK(s.groups[1].fp == 1);
}

TEST_CASE("degenerate all-negative predictor has no positives anywhere") {
    LabeledPredictions d;
    d.groups = {0, 1, 0, 1, 0};
    d.labels = {1, 1, 0, 0, 1};
    d.predictions = {0, 0, 0, 0, 0};
    d.n_groups = 2;
    ConfusionStats s = confusion_stats(d);
    for (const GroupCounts& c : s.groups) {
        CHECK(c.tp == 0);
        CHECK(c.fp == 0);
    }
}

TEST_CASE("confusion_stats equals brute-force recount on random data") {
    std::mt19937_64 rng(1234);
    LabeledPredictions d = random_predictions(rng, 1000, 3);
    ConfusionStats s = confusion_stats(d);
    std::vector<GroupCounts> expected = brute_tally(d);
    for (int g = 0; g < 3; ++g) {
        CHECK(s.groups[g].tp == expected[g].tp);
        CHECK(s.groups[g].fp == expected[g].fp);
        CHECK(s.groups[g].tn == expected[g].tn);
        CHECK(s.groups[g].fn == expected[g].fn);
        CHECK(s.groups[g].total() ==
              std::count(d.groups.begin(), d.groups.end(), g));
    }
}

TEST_CASE("rate accessors refuse zero denominators") {
    GroupCounts c;
    c.tn = 5;
    CHECK_THROWS_AS(c.tpr(), UndefinedRateError);
    CHECK(c.fpr() == 0.0);
    c = GroupCounts{};
    CHECK_THROWS_AS(c.selection_rate(), UndefinedRateError);
}

TEST_CASE("demographic parity difference") {
    SUBCASE("equal selection rates give zero") {
        LabeledPredictions d;
        d.groups = {0, 0, 1, 1};
        d.labels = {1, 0, 0, 1};
        d.predictions = {1, 0, 1, 0};
        d.n_groups = 2;
        CHECK(demographic_parity_difference(confusion_stats(d)) == 0.0);
    }
    SUBCASE("perfect predictor exposes the base-rate gap") {
        // base rates 0.6 vs 0.3, predictions equal to labels
        LabeledPredictions d;
        d.n_groups = 2;
        for (int i = 0; i < 10; ++i) {
            d.groups.push_back(0);
            d.labels.push_back(i < 6 ? 1 : 0);
        }
        for (int i = 0; i < 10; ++i) {
            d.groups.push_back(1);
            d.labels.push_back(i < 3 ? 1 : 0);
        }
        d.predictions = d.labels;
        CHECK(demographic_parity_difference(confusion_stats(d)) ==
              doctest::Approx(0.3).epsilon(1e-15));
    }
    SUBCASE("three groups: max pairwise gap") {
        // selection rates 0.2, 0.5, 0.9 over 10 samples each
        LabeledPredictions d;
        d.n_groups = 3;
        int selected[] = {2, 5, 9};
        for (int g = 0; g < 3; ++g) {
            for (int i = 0; i < 10; ++i) {
                d.groups.push_back(g);
                d.labels.push_back(0);
                d.predictions.push_back(i < selected[g] ? 1 : 0);
            }
        }
        // oracle: enumerate all pairs
        ConfusionStats s = confusion_stats(d);
        double best = 0.0;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                best = std::max(best, std::abs(s.groups[a].selection_rate() -
                                               s.groups[b].selection_rate()));
            }
        }
        CHECK(demographic_parity_difference(s) == doctest::Approx(best));
        CHECK(demographic_parity_difference(s) == doctest::Approx(0.7));
    }
    SUBCASE("empty group is an error") {
        ConfusionStats s;
        s.groups.resize(2);
        s.groups[0].tp = 1;
        CHECK_THROWS_AS(demographic_parity_difference(s), UndefinedRateError);
    }
}

TEST_CASE("equalized odds difference") {
    SUBCASE("identical tables give zero") {
        ConfusionStats s;
        GroupCounts c{3, 2, 4, 1};
        s.groups = {c, c};
        CHECK(equalized_odds_difference(s) == 0.0);
    }
    SUBCASE("single active gap") {
        // tprs 0.8 vs 0.6, fprs both 0.1
        ConfusionStats s;
        s.groups = {GroupCounts{8, 1, 9, 2}, GroupCounts{6, 1, 9, 4}};
        CHECK(equalized_odds_difference(s) == doctest::Approx(0.2));
    }
    SUBCASE("random tables match enumeration oracle") {
        std::mt19937_64 rng(99);
        std::uniform_int_distribution<int> count(1, 50);
        for (int trial = 0; trial < 50; ++trial) {
            ConfusionStats s;
            for (int g = 0; g < 4; ++g) {
                s.groups.push_back(GroupCounts{count(rng), count(rng), count(rng),
                                               count(rng)});
            }
            double best = 0.0;
            for (std::size_t a = 0; a < s.groups.size(); ++a) {
                for (std::size_t b = 0; b < s.groups.size(); ++b) {
                    best = std::max(
                        best, std::abs(s.groups[a].tpr() - s.groups[b].tpr()));
                    best = std::max(
                        best, std::abs(s.groups[a].fpr() - s.groups[b].fpr()));
                }
            }
            CHECK(equalized_odds_difference(s) == doctest::Approx(best));
        }
    }
    SUBCASE("missing class names the group") {
        ConfusionStats s;
        s.groups = {GroupCounts{1, 1, 1, 1}, GroupCounts{0, 2, 3, 0}};
        CHECK_THROWS_WITH_AS(equalized_odds_difference(s),
                             doctest::Contains("group 1"), UndefinedRateError);
    }
}

TEST_CASE("base_rate") {
    CHECK(base_rate({1, 1, 0, 0}, {0, 0, 0, 0}, 1)[0] == 0.5);
    CHECK(base_rate({1, 1, 1}, {0, 0, 0}, 1)[0] == 1.0);

    SUBCASE("law of large numbers") {
        std::mt19937_64 rng(7);
        std::bernoulli_distribution bern(0.3);
        std::vector<int> labels, groups;
        for (int i = 0; i < 100000; ++i) {
            labels.push_back(bern(rng) ? 1 : 0);
            groups.push_back(0);
        }
        CHECK(base_rate(labels, groups, 1)[0] == doctest::Approx(0.3).epsilon(0.04));
    }
    SUBCASE("empty group") {
        CHECK_THROWS_AS(base_rate({1, 0}, {0, 0}, 2), UndefinedRateError);
    }
}

TEST_CASE("metric properties on random data") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        LabeledPredictions d = random_predictions(rng, 400, 3);
        ConfusionStats s = confusion_stats(d);
        double dp = demographic_parity_difference(s);
        double eo = equalized_odds_difference(s);
        CHECK(dp >= 0.0);
        CHECK(eo >= 0.0);

        // permutation invariance of group relabeling
        LabeledPredictions perm = d;
        for (int& g : perm.groups) g = (g + 1) % 3;
        CHECK(demographic_parity_difference(confusion_stats(perm)) ==
              doctest::Approx(dp));
        CHECK(equalized_odds_difference(confusion_stats(perm)) ==
              doctest::Approx(eo));

        // DP never reads Y
        LabeledPredictions swapped = d;
        for (int& y : swapped.labels) y = 1 - y;
        CHECK(demographic_parity_difference(confusion_stats(swapped)) ==
              doctest::Approx(dp));
    }
}

TEST_CASE("merging groups with identical tables changes nothing") {
    // groups 1 and 2 built identical, then merged into one
    LabeledPredictions d;
    d.n_groups = 3;
    auto add = [&](int g) {
        int ys[] = {1, 1, 0, 0, 1, 0};
        int ps[] = {1, 0, 0, 1, 1, 0};
        for (int i = 0; i < 6; ++i) {
            d.groups.push_back(g);
            d.labels.push_back(ys[i]);
            d.predictions.push_back(ps[i]);
        }
    };
    add(0);
    add(1);
    add(2);
    double dp3 = demographic_parity_difference(confusion_stats(d));
    double eo3 = equalized_odds_difference(confusion_stats(d));

    LabeledPredictions merged = d;
    merged.n_groups = 2;
    for (int& g : merged.groups) g = std::min(g, 1);
    CHECK(demographic_parity_difference(confusion_stats(merged)) ==
          doctest::Approx(dp3));
    CHECK(equalized_odds_difference(confusion_stats(merged)) ==
          doctest::Approx(eo3));
}
