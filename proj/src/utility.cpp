#include "fairpost/utility.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "fairpost/text.hpp"

namespace fairpost {

const char* reference_space_name(ReferenceSpace s) {
    return s == ReferenceSpace::Construct ? "construct" : "potential";
}

ReferenceSpace reference_space_from_name(const std::string& name) {
    if (name == "construct") return ReferenceSpace::Construct;
    if (name == "potential") return ReferenceSpace::Potential;
    throw ValidationError("unknown reference space '" + name + "'");
}

UtilityMatrix UtilityMatrix::uniform(int n_groups, Cell cell, ReferenceSpace ref) {
    UtilityMatrix m;
    m.reference_space = ref;
    m.by_group.assign(n_groups, cell);
    return m;
}

void UtilityMatrix::validate(int n_groups) const {
    if (static_cast<int>(by_group.size()) != n_groups) {
        throw ValidationError("utility matrix must have one cell set per group");
    }
    for (const Cell& c : by_group) {
        if (!std::isfinite(c.u11) || !std::isfinite(c.u10) || !std::isfinite(c.u01) ||
            !std::isfinite(c.u00)) {
            throw ValidationError("utility entries must be finite");
        }
    }
}

double individual_utility(const Individual& ind, const UtilityMatrix& m) {
    if (ind.decision != 0 && ind.decision != 1) {
        throw ValidationError("individual has no decision set");
    }
    if (ind.group < 0 || ind.group >= static_cast<int>(m.by_group.size())) {
        throw ValidationError("utility matrix has no entry for group " +
                              std::to_string(ind.group));
    }
    const UtilityMatrix::Cell& c = m.by_group[ind.group];
    int ref = m.reference_space == ReferenceSpace::Construct ? ind.construct
                                                             : ind.potential;
    if (ind.decision == 1) return ref == 1 ? c.u11 : c.u10;
    return ref == 1 ? c.u01 : c.u00;
}

std::vector<double> group_utility(const std::vector<Individual>& population,
                                  const UtilityMatrix& m) {
    int n_groups = static_cast<int>(m.by_group.size());
    std::vector<double> sum(n_groups, 0.0);
    std::vector<std::int64_t> count(n_groups, 0);
    for (const Individual& ind : population) {
        sum[ind.group] += individual_utility(ind, m);
        ++count[ind.group];
    }
    std::vector<double> mean(n_groups, 0.0);
    for (int g = 0; g < n_groups; ++g) {
        if (count[g] == 0) {
            throw UndefinedRateError("group utility undefined: group " +
                                     std::to_string(g) + " is empty");
        }
        mean[g] = sum[g] / count[g];
    }
    return mean;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::None: return "NONE";
        case Verdict::LevelingDown: return "LEVELING_DOWN";
        case Verdict::Redistribution: return "REDISTRIBUTION";
        case Verdict::Improvement: return "IMPROVEMENT";
    }
    return "NONE";
}

Verdict classify_deltas(const std::vector<GroupDelta>& groups) {
    bool any_down = false, any_up = false;
    for (const GroupDelta& g : groups) {
        if (g.delta < -g.band) any_down = true;
        if (g.delta > g.band) any_up = true;
    }
    if (any_down && any_up) return Verdict::Redistribution;
    if (any_down) return Verdict::LevelingDown;
    if (any_up) return Verdict::Improvement;
    return Verdict::None;
}

LevelingReport leveling_down_report(const std::vector<Individual>& population,
                                    const FairPolicy& baseline,
                                    const FairPolicy& fair,
                                    const UtilityMatrix& m, std::uint64_t seed) {
    int n_groups = static_cast<int>(m.by_group.size());
    m.validate(n_groups);
    if (baseline.n_groups() < n_groups || fair.n_groups() < n_groups) {
        throw ValidationError("policy group count does not match utility matrix");
    }
    ScoreSet scores = to_score_set(population, n_groups);
    LabeledPredictions base_pred = apply_policy(baseline, scores, seed);
    LabeledPredictions fair_pred = apply_policy(fair, scores, seed);

    struct Accum {
        double base_sum = 0.0, fair_sum = 0.0, delta_sum = 0.0, delta_sq = 0.0;
        std::int64_t n = 0;
    };
    std::vector<Accum> acc(n_groups);
    for (std::size_t i = 0; i < population.size(); ++i) {
        Individual ind = population[i];
        ind.decision = base_pred.predictions[i];
        double ub = individual_utility(ind, m);
        ind.decision = fair_pred.predictions[i];
        double uf = individual_utility(ind, m);
        Accum& a = acc[ind.group];
        a.base_sum += ub;
        a.fair_sum += uf;
        double d = uf - ub;
        a.delta_sum += d;
        a.delta_sq += d * d;
        ++a.n;
    }

    LevelingReport report;
    for (int g = 0; g < n_groups; ++g) {
        const Accum& a = acc[g];
        if (a.n == 0) {
            throw UndefinedRateError("group " + std::to_string(g) +
                                     " is empty; utility deltas undefined");
        }
        GroupDelta d;
        d.baseline_utility = a.base_sum / a.n;
        d.fair_utility = a.fair_sum / a.n;
        d.delta = a.delta_sum / a.n;
        double var = a.n > 1 ? (a.delta_sq - a.delta_sum * a.delta_sum / a.n) /
                                   static_cast<double>(a.n - 1)
                             : 0.0;
        var = std::max(var, 0.0);
        d.band = 3.0 * std::sqrt(var / a.n);
        report.groups.push_back(d);
    }
    report.verdict = classify_deltas(report.groups);
    return report;
}

std::string LevelingReport::to_text() const {
    std::ostringstream out;
    out << "leveling report\n";
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const GroupDelta& d = groups[g];
        out << "  group " << g << ": baseline " << format_double(d.baseline_utility)
            << " fair " << format_double(d.fair_utility) << " delta "
            << format_double(d.delta) << " band " << format_double(d.band) << "\n";
    }
    out << "verdict " << verdict_name(verdict) << "\n";
    return out.str();
}

void LevelingReport::write_rows(std::ostream& out) const {
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const GroupDelta& d = groups[g];
        out << g << ' ' << format_double(d.baseline_utility) << ' '
            << format_double(d.fair_utility) << ' ' << format_double(d.delta) << ' '
            << format_double(d.band) << '\n';
    }
}

}  // namespace fairpost
