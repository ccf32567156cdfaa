#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fairpost/types.hpp"

namespace fairpost {

/// One simulated individual with its label in every space:
/// potential -> construct -> observed -> decision, plus the model score.
/// decision is -1 until a policy has been applied.
struct Individual {
    int group = 0;
    int potential = 0;
    int construct = 0;
    int observed = 0;
    double score = 0.0;
    int decision = -1;
};

enum class BiasTag { Just, Unjust };

/// Per-group label flip rates for one space transition.
struct FlipRates {
    double pos_to_neg = 0.0;
    double neg_to_pos = 0.0;
    BiasTag tag = BiasTag::Unjust;  // metadata only, never read by sampling
};

struct BiasSpec {
    std::vector<FlipRates> lifes_bias;              // potential -> construct
    std::vector<FlipRates> measurement_label_bias;  // construct -> observed
    std::vector<double> measurement_score_shift;    // additive per-group delta
    std::vector<double> score_informativeness;      // location separation
    std::vector<double> technical_bias;             // post-hoc score offset

    /// All-zero spec for `n_groups` groups with unit informativeness.
    static BiasSpec none(int n_groups);

    void validate(int n_groups) const;
};

struct PopulationSpec {
    std::vector<int> group_sizes;
    std::vector<double> potential_base_rates;
    BiasSpec bias;
    std::uint64_t seed = 0;
    /// When set, scores are generated from construct labels instead of
    /// observed labels (oracle comparisons only).
    bool construct_driven_scores = false;

    int n_groups() const { return static_cast<int>(group_sizes.size()); }
    void validate() const;
};

/// Sample the full pipeline. Individual i is a pure function of
/// (spec.seed, i), so populations are reproducible and order-independent.
/// Scores are a two-component unit-scale normal location family with
/// separation score_informativeness, shifted by measurement_score_shift and
/// technical_bias.
std::vector<Individual> sample_population(const PopulationSpec& spec);

struct SpaceBaseRates {
    std::vector<double> potential;
    std::vector<double> construct;
    std::vector<double> observed;
};

SpaceBaseRates space_base_rates(const std::vector<Individual>& population,
                                int n_groups);

/// Scores + observed labels, the view a trained model would produce.
ScoreSet to_score_set(const std::vector<Individual>& population, int n_groups);

/// Flat delimited dump, one row per individual:
/// group potential construct observed score decision
void write_population(std::ostream& out,
                      const std::vector<Individual>& population);
std::vector<Individual> read_population(std::istream& in);

}  // namespace fairpost
