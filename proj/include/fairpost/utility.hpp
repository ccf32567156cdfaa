#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fairpost/postprocess.hpp"
#include "fairpost/spaces.hpp"

namespace fairpost {

enum class ReferenceSpace { Construct, Potential };

const char* reference_space_name(ReferenceSpace s);
ReferenceSpace reference_space_from_name(const std::string& name);

/// Per-group 2x2 utility of (decision, reference-truth) cells.
struct UtilityMatrix {
    struct Cell {
        double u11 = 0.0;  // decision 1, reference 1
        double u10 = 0.0;  // decision 1, reference 0
        double u01 = 0.0;  // decision 0, reference 1
        double u00 = 0.0;  // decision 0, reference 0
    };

    ReferenceSpace reference_space = ReferenceSpace::Construct;
    std::vector<Cell> by_group;

    static UtilityMatrix uniform(int n_groups, Cell cell, ReferenceSpace ref);
    void validate(int n_groups) const;
};

double individual_utility(const Individual& ind, const UtilityMatrix& m);

/// Per-group arithmetic mean of individual utilities.
std::vector<double> group_utility(const std::vector<Individual>& population,
                                  const UtilityMatrix& m);

enum class Verdict { None, LevelingDown, Redistribution, Improvement };

const char* verdict_name(Verdict v);

struct GroupDelta {
    double baseline_utility = 0.0;
    double fair_utility = 0.0;
    double delta = 0.0;
    /// 3-standard-error band of the mean paired delta.
    double band = 0.0;
};

struct LevelingReport {
    std::vector<GroupDelta> groups;
    Verdict verdict = Verdict::None;

    std::string to_text() const;
    /// Machine-readable rows: group baseline_u fair_u delta band.
    void write_rows(std::ostream& out) const;
};

/// Apply both policies to the population with the same seed and compare
/// per-group mean utilities. LEVELING_DOWN: some group drops beyond its band
/// while none rises beyond its band.
LevelingReport leveling_down_report(const std::vector<Individual>& population,
                                    const FairPolicy& baseline,
                                    const FairPolicy& fair,
                                    const UtilityMatrix& m, std::uint64_t seed);

/// Verdict recomputed from precomputed deltas (used by the aggregating
/// scenario runner).
Verdict classify_deltas(const std::vector<GroupDelta>& groups);

}  // namespace fairpost
