#include "fairpost/spaces.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fairpost/core.hpp"
#include "fairpost/rng.hpp"
#include "fairpost/text.hpp"

namespace fairpost {

BiasSpec BiasSpec::none(int n_groups) {
    BiasSpec spec;
    spec.lifes_bias.assign(n_groups, FlipRates{});
    spec.measurement_label_bias.assign(n_groups, FlipRates{});
    spec.measurement_score_shift.assign(n_groups, 0.0);
    spec.score_informativeness.assign(n_groups, 1.0);
    spec.technical_bias.assign(n_groups, 0.0);
    return spec;
}

void BiasSpec::validate(int n_groups) const {
    auto check_flips = [&](const std::vector<FlipRates>& v, const char* name) {
        if (static_cast<int>(v.size()) != n_groups) {
            throw ValidationError(std::string(name) + " must have one entry per group");
        }
        for (const FlipRates& f : v) {
            if (f.pos_to_neg < 0.0 || f.pos_to_neg > 1.0 || f.neg_to_pos < 0.0 ||
                f.neg_to_pos > 1.0) {
                throw ValidationError(std::string(name) + " flip rates must be in [0,1]");
            }
        }
    };
    check_flips(lifes_bias, "lifes_bias");
    check_flips(measurement_label_bias, "measurement_label_bias");
    if (static_cast<int>(measurement_score_shift.size()) != n_groups ||
        static_cast<int>(score_informativeness.size()) != n_groups ||
        static_cast<int>(technical_bias.size()) != n_groups) {
        throw ValidationError("bias vectors must have one entry per group");
    }
    for (double d : score_informativeness) {
        if (d < 0.0) throw ValidationError("score_informativeness must be >= 0");
    }
    for (double d : measurement_score_shift) {
        if (!std::isfinite(d)) throw ValidationError("score shifts must be finite");
    }
    for (double d : technical_bias) {
        if (!std::isfinite(d)) throw ValidationError("technical_bias must be finite");
    }
}

void PopulationSpec::validate() const {
    if (group_sizes.empty()) {
        throw ValidationError("population needs at least one group");
    }
    for (int n : group_sizes) {
        if (n < 1) throw ValidationError("group_sizes must be >= 1");
    }
    if (potential_base_rates.size() != group_sizes.size()) {
        throw ValidationError("potential_base_rates must have one entry per group");
    }
    for (double r : potential_base_rates) {
        if (r < 0.0 || r > 1.0) {
            throw ValidationError("potential_base_rates must be in [0,1]");
        }
    }
    bias.validate(n_groups());
}

std::vector<Individual> sample_population(const PopulationSpec& spec) {
    spec.validate();
    std::size_t total = 0;
    for (int n : spec.group_sizes) total += static_cast<std::size_t>(n);
    std::vector<Individual> population;
    population.reserve(total);

    std::size_t index = 0;
    for (int g = 0; g < spec.n_groups(); ++g) {
        const FlipRates& life = spec.bias.lifes_bias[g];
        const FlipRates& meas = spec.bias.measurement_label_bias[g];
        double sep = spec.bias.score_informativeness[g];
        double offset = spec.bias.measurement_score_shift[g] + spec.bias.technical_bias[g];
        for (int k = 0; k < spec.group_sizes[g]; ++k, ++index) {
            SampleRng rng(spec.seed, index);
            Individual ind;
            ind.group = g;
            ind.potential = rng.uniform() < spec.potential_base_rates[g] ? 1 : 0;
            ind.construct = ind.potential;
            if (ind.potential == 1) {
                if (rng.uniform() < life.pos_to_neg) ind.construct = 0;
            } else {
                if (rng.uniform() < life.neg_to_pos) ind.construct = 1;
            }
            ind.observed = ind.construct;
            if (ind.construct == 1) {
                if (rng.uniform() < meas.pos_to_neg) ind.observed = 0;
            } else {
                if (rng.uniform() < meas.neg_to_pos) ind.observed = 1;
            }
            int score_class =
                spec.construct_driven_scores ? ind.construct : ind.observed;
            double mean = (score_class == 1 ? 0.5 : -0.5) * sep;
            ind.score = mean + rng.normal() + offset;
            population.push_back(ind);
        }
    }
    return population;
}

SpaceBaseRates space_base_rates(const std::vector<Individual>& population,
                                int n_groups) {
    std::vector<int> groups, potential, construct, observed;
    groups.reserve(population.size());
    for (const Individual& ind : population) {
        groups.push_back(ind.group);
        potential.push_back(ind.potential);
        construct.push_back(ind.construct);
        observed.push_back(ind.observed);
    }
    SpaceBaseRates rates;
    rates.potential = base_rate(potential, groups, n_groups);
    rates.construct = base_rate(construct, groups, n_groups);
    rates.observed = base_rate(observed, groups, n_groups);
    return rates;
}

ScoreSet to_score_set(const std::vector<Individual>& population, int n_groups) {
    ScoreSet s;
    s.n_groups = n_groups;
    s.scores.reserve(population.size());
    for (const Individual& ind : population) {
        s.scores.push_back(ind.score);
        s.labels.push_back(ind.observed);
        s.groups.push_back(ind.group);
    }
    return s;
}

void write_population(std::ostream& out,
                      const std::vector<Individual>& population) {
    out << "fairpost_population 1\n";
    out << "group potential construct observed score decision\n";
    for (const Individual& ind : population) {
        out << ind.group << ' ' << ind.potential << ' ' << ind.construct << ' '
            << ind.observed << ' ' << format_double(ind.score) << ' '
            << ind.decision << '\n';
    }
}

std::vector<Individual> read_population(std::istream& in) {
    std::string key;
    int version = 0;
    if (!(in >> key >> version) || key != "fairpost_population" || version != 1) {
        throw ValidationError("not a fairpost_population version 1 dump");
    }
    std::string header_line;
    std::getline(in, header_line);  // rest of version line
    std::getline(in, header_line);  // column header
    std::vector<Individual> population;
    std::string line;
    std::size_t line_no = 2;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        Individual ind;
        std::string score_tok;
        if (!(row >> ind.group >> ind.potential >> ind.construct >> ind.observed >>
              score_tok >> ind.decision)) {
            throw ValidationError("population dump: malformed row at line " +
                                  std::to_string(line_no));
        }
        ind.score = parse_double(score_tok);
        population.push_back(ind);
    }
    if (population.empty()) {
        throw ValidationError("population dump contains no individuals");
    }
    return population;
}

}  // namespace fairpost
