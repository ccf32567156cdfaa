#include "fairpost/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fairpost/core.hpp"
#include "fairpost/rng.hpp"
#include "fairpost/text.hpp"

namespace fairpost {

using nlohmann::json;

void ScenarioConfig::validate() const {
    population.validate();
    int g = population.n_groups();
    if (static_cast<int>(group_labels.size()) != g) {
        throw ValidationError("groups: need one label per group");
    }
    utility.validate(g);
    cost.validate(g);
    if (budget && (*budget < 0.0 || *budget > 1.0)) {
        throw ValidationError("budget must be in [0,1]");
    }
    if (replicates < 1) {
        throw ValidationError("replicates must be >= 1");
    }
}

namespace {

[[noreturn]] void config_error(const std::string& origin, const std::string& what) {
    throw ValidationError(origin + ": " + what);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& origin, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            config_error(origin, "unknown key '" + key + "' in " + where);
        }
    }
}

std::vector<double> number_list(const json& arr, const std::string& origin,
                                const std::string& field) {
    if (!arr.is_array()) config_error(origin, field + " must be an array");
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number()) config_error(origin, field + " must contain numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<FlipRates> flip_list(const json& arr, const std::string& origin,
                                 const std::string& field) {
    if (!arr.is_array()) config_error(origin, field + " must be an array");
    std::vector<FlipRates> out;
    for (const auto& v : arr) {
        if (!v.is_object()) config_error(origin, field + " entries must be objects");
        reject_unknown(v, {"pos_to_neg", "neg_to_pos", "tag"}, origin, field);
        FlipRates f;
        f.pos_to_neg = v.value("pos_to_neg", 0.0);
        f.neg_to_pos = v.value("neg_to_pos", 0.0);
        std::string tag = v.value("tag", "unjust");
        if (tag != "just" && tag != "unjust") {
            config_error(origin, field + ": tag must be 'just' or 'unjust'");
        }
        f.tag = tag == "just" ? BiasTag::Just : BiasTag::Unjust;
        out.push_back(f);
    }
    return out;
}

OutputKind output_from_name(const std::string& name, const std::string& origin) {
    if (name == "metrics") return OutputKind::Metrics;
    if (name == "roc_points") return OutputKind::RocPoints;
    if (name == "utility_report") return OutputKind::UtilityReport;
    if (name == "population_dump") return OutputKind::PopulationDump;
    config_error(origin, "unknown output kind '" + name + "'");
}

const char* output_name(OutputKind k) {
    switch (k) {
        case OutputKind::Metrics: return "metrics";
        case OutputKind::RocPoints: return "roc_points";
        case OutputKind::UtilityReport: return "utility_report";
        case OutputKind::PopulationDump: return "population_dump";
    }
    return "metrics";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t state = seed ^ (0xd1b54a32d192ed03ULL * (stream + 1));
    return splitmix64_next(state);
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        config_error(origin, std::string("parse error: ") + e.what());
    }
    if (!doc.is_object()) config_error(origin, "top level must be an object");
    reject_unknown(doc,
                   {"schema_version", "groups", "population", "utility",
                    "constraint", "cost", "budget", "replicates", "seed", "outputs"},
                   origin, "top level");
    if (!doc.contains("schema_version") ||
        doc["schema_version"] != ScenarioConfig::kSchemaVersion) {
        config_error(origin, "schema_version must be " +
                                 std::to_string(ScenarioConfig::kSchemaVersion));
    }

    ScenarioConfig cfg;
    if (!doc.contains("groups") || !doc["groups"].is_array()) {
        config_error(origin, "groups: array of labels required");
    }
    for (const auto& g : doc["groups"]) {
        cfg.group_labels.push_back(g.get<std::string>());
    }
    int n_groups = static_cast<int>(cfg.group_labels.size());
    if (n_groups < 1) config_error(origin, "groups must be non-empty");

    if (!doc.contains("population") || !doc["population"].is_object()) {
        config_error(origin, "population object required");
    }
    const json& pop = doc["population"];
    reject_unknown(pop,
                   {"group_sizes", "potential_base_rates", "bias",
                    "construct_driven_scores"},
                   origin, "population");
    if (!pop.contains("group_sizes")) {
        config_error(origin, "population.group_sizes required");
    }
    for (const auto& v : pop["group_sizes"]) {
        cfg.population.group_sizes.push_back(v.get<int>());
    }
    cfg.population.potential_base_rates =
        number_list(pop.at("potential_base_rates"), origin,
                    "population.potential_base_rates");
    cfg.population.construct_driven_scores =
        pop.value("construct_driven_scores", false);

    cfg.population.bias = BiasSpec::none(n_groups);
    if (pop.contains("bias")) {
        const json& bias = pop["bias"];
        reject_unknown(bias,
                       {"lifes_bias", "measurement_label_bias",
                        "measurement_score_shift", "score_informativeness",
                        "technical_bias"},
                       origin, "population.bias");
        if (bias.contains("lifes_bias")) {
            cfg.population.bias.lifes_bias =
                flip_list(bias["lifes_bias"], origin, "lifes_bias");
        }
        if (bias.contains("measurement_label_bias")) {
            cfg.population.bias.measurement_label_bias = flip_list(
                bias["measurement_label_bias"], origin, "measurement_label_bias");
        }
        if (bias.contains("measurement_score_shift")) {
            cfg.population.bias.measurement_score_shift = number_list(
                bias["measurement_score_shift"], origin, "measurement_score_shift");
        }
        if (bias.contains("score_informativeness")) {
            cfg.population.bias.score_informativeness = number_list(
                bias["score_informativeness"], origin, "score_informativeness");
        }
        if (bias.contains("technical_bias")) {
            cfg.population.bias.technical_bias =
                number_list(bias["technical_bias"], origin, "technical_bias");
        }
    }

    if (!doc.contains("utility") || !doc["utility"].is_object()) {
        config_error(origin, "utility object required");
    }
    const json& util = doc["utility"];
    reject_unknown(util, {"reference_space", "by_group"}, origin, "utility");
    cfg.utility.reference_space =
        reference_space_from_name(util.value("reference_space", "construct"));
    if (!util.contains("by_group") || !util["by_group"].is_array()) {
        config_error(origin, "utility.by_group array required");
    }
    for (const auto& row : util["by_group"]) {
        std::vector<double> cells = number_list(row, origin, "utility.by_group row");
        if (cells.size() != 4) {
            config_error(origin, "utility.by_group rows are [u11, u10, u01, u00]");
        }
        cfg.utility.by_group.push_back({cells[0], cells[1], cells[2], cells[3]});
    }

    cfg.constraint = constraint_from_name(doc.value("constraint", "none"));

    if (!doc.contains("cost") || !doc["cost"].is_object()) {
        config_error(origin, "cost object required");
    }
    const json& cost = doc["cost"];
    reject_unknown(cost, {"cost_fp", "cost_fn", "group_weights"}, origin, "cost");
    cfg.cost.cost_fp = number_list(cost.at("cost_fp"), origin, "cost.cost_fp");
    cfg.cost.cost_fn = number_list(cost.at("cost_fn"), origin, "cost.cost_fn");
    if (cost.contains("group_weights")) {
        cfg.cost.group_weights =
            number_list(cost["group_weights"], origin, "cost.group_weights");
    } else {
        // default: population proportions
        double total = 0.0;
        for (int n : cfg.population.group_sizes) total += n;
        for (int n : cfg.population.group_sizes) {
            cfg.cost.group_weights.push_back(n / total);
        }
    }

    if (doc.contains("budget")) {
        if (!doc["budget"].is_number()) config_error(origin, "budget must be a number");
        cfg.budget = doc["budget"].get<double>();
    }
    cfg.replicates = doc.value("replicates", 1);
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) {
            config_error(origin, "seed must be a non-negative integer");
        }
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("outputs")) {
        for (const auto& o : doc["outputs"]) {
            cfg.outputs.push_back(output_from_name(o.get<std::string>(), origin));
        }
    } else {
        cfg.outputs = {OutputKind::Metrics, OutputKind::UtilityReport};
    }

    try {
        cfg.validate();
    } catch (const ValidationError& e) {
        config_error(origin, e.what());
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

std::string config_to_text(const ScenarioConfig& cfg) {
    json doc;
    doc["schema_version"] = ScenarioConfig::kSchemaVersion;
    doc["groups"] = cfg.group_labels;
    json pop;
    pop["group_sizes"] = cfg.population.group_sizes;
    pop["potential_base_rates"] = cfg.population.potential_base_rates;
    if (cfg.population.construct_driven_scores) {
        pop["construct_driven_scores"] = true;
    }
    json bias;
    auto flips_to_json = [](const std::vector<FlipRates>& flips) {
        json arr = json::array();
        for (const FlipRates& f : flips) {
            arr.push_back({{"pos_to_neg", f.pos_to_neg},
                           {"neg_to_pos", f.neg_to_pos},
                           {"tag", f.tag == BiasTag::Just ? "just" : "unjust"}});
        }
        return arr;
    };
    bias["lifes_bias"] = flips_to_json(cfg.population.bias.lifes_bias);
    bias["measurement_label_bias"] =
        flips_to_json(cfg.population.bias.measurement_label_bias);
    bias["measurement_score_shift"] = cfg.population.bias.measurement_score_shift;
    bias["score_informativeness"] = cfg.population.bias.score_informativeness;
    bias["technical_bias"] = cfg.population.bias.technical_bias;
    pop["bias"] = bias;
    doc["population"] = pop;
    json util;
    util["reference_space"] = reference_space_name(cfg.utility.reference_space);
    json rows = json::array();
    for (const auto& c : cfg.utility.by_group) {
        rows.push_back({c.u11, c.u10, c.u01, c.u00});
    }
    util["by_group"] = rows;
    doc["utility"] = util;
    doc["constraint"] = constraint_name(cfg.constraint);
    doc["cost"] = {{"cost_fp", cfg.cost.cost_fp},
                   {"cost_fn", cfg.cost.cost_fn},
                   {"group_weights", cfg.cost.group_weights}};
    if (cfg.budget) doc["budget"] = *cfg.budget;
    doc["replicates"] = cfg.replicates;
    doc["seed"] = cfg.seed;
    json outs = json::array();
    for (OutputKind k : cfg.outputs) outs.push_back(output_name(k));
    doc["outputs"] = outs;
    return doc.dump(2) + "\n";
}

std::vector<std::string> preset_names() {
    return {"resume_selection", "lending", "disease_detection"};
}

ScenarioConfig preset_config(const std::string& name) {
    ScenarioConfig cfg;
    cfg.group_labels = {"A", "B"};
    cfg.population.group_sizes = {10000, 10000};
    cfg.population.bias = BiasSpec::none(2);
    cfg.replicates = 5;
    cfg.outputs = {OutputKind::Metrics, OutputKind::RocPoints,
                   OutputKind::UtilityReport, OutputKind::PopulationDump};
    cfg.cost.group_weights = {0.5, 0.5};

    if (name == "resume_selection") {
        // limited interview slots; appraisal scores systematically lower for
        // group A; every selection benefits the candidate
        cfg.population.potential_base_rates = {0.5, 0.5};
        cfg.population.bias.score_informativeness = {2.0, 2.0};
        cfg.population.bias.measurement_score_shift = {-0.5, 0.0};
        cfg.utility.reference_space = ReferenceSpace::Potential;
        cfg.utility.by_group = {{1.0, 0.5, 0.0, 0.0}, {1.0, 0.5, 0.0, 0.0}};
        cfg.constraint = Constraint::DemographicParity;
        cfg.cost.cost_fp = {1.0, 1.0};
        cfg.cost.cost_fn = {1.0, 1.0};
        cfg.budget = 0.3;
        cfg.seed = 101;
    } else if (name == "lending") {
        // differing repayment base rates, lender balances default risk
        // against missed business; no budget
        cfg.population.potential_base_rates = {0.45, 0.3};
        cfg.population.bias.score_informativeness = {1.5, 1.5};
        cfg.utility.reference_space = ReferenceSpace::Construct;
        cfg.utility.by_group = {{1.0, -1.0, -0.5, 0.0}, {1.0, -1.0, -0.5, 0.0}};
        cfg.constraint = Constraint::EqualizedOdds;
        cfg.cost.cost_fp = {2.0, 2.0};
        cfg.cost.cost_fn = {1.0, 1.0};
        cfg.seed = 202;
    } else if (name == "disease_detection") {
        // equal construct prevalence; 30% of group A cases unobservable;
        // treatment helps the sick and harms the healthy
        cfg.population.potential_base_rates = {0.4, 0.4};
        cfg.population.bias.score_informativeness = {3.0, 3.0};
        cfg.population.bias.measurement_label_bias[0].pos_to_neg = 0.3;
        cfg.utility.reference_space = ReferenceSpace::Construct;
        cfg.utility.by_group = {{1.0, -1.0, -2.0, 0.0}, {1.0, -1.0, -2.0, 0.0}};
        cfg.constraint = Constraint::DemographicParity;
        cfg.cost.cost_fp = {1.0, 1.0};
        cfg.cost.cost_fn = {2.0, 2.0};
        cfg.seed = 303;
    } else {
        throw ValidationError("unknown preset '" + name +
                              "'; available: resume_selection, lending, "
                              "disease_detection");
    }
    cfg.validate();
    return cfg;
}

ScenarioReport run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    int n_groups = cfg.population.n_groups();
    ScenarioReport report;

    for (int r = 0; r < cfg.replicates; ++r) {
        try {
            PopulationSpec spec = cfg.population;
            spec.seed = derive_seed(cfg.seed, 2 * static_cast<std::uint64_t>(r));
            std::vector<Individual> population = sample_population(spec);
            ScoreSet scores = to_score_set(population, n_groups);

            FairPolicy baseline = fit_unconstrained(scores, cfg.cost);
            FairPolicy fair;
            switch (cfg.constraint) {
                case Constraint::None:
                    fair = baseline;
                    break;
                case Constraint::DemographicParity:
                    fair = fit_demographic_parity(scores, cfg.cost, cfg.budget);
                    break;
                case Constraint::EqualizedOdds:
                    fair = fit_equalized_odds(scores, cfg.cost);
                    break;
            }

            std::uint64_t apply_seed =
                derive_seed(cfg.seed, 2 * static_cast<std::uint64_t>(r) + 1);
            LabeledPredictions base_pred = apply_policy(baseline, scores, apply_seed);
            LabeledPredictions fair_pred = apply_policy(fair, scores, apply_seed);

            ReplicateResult res;
            ConfusionStats base_stats = confusion_stats(base_pred);
            ConfusionStats fair_stats = confusion_stats(fair_pred);
            res.dp_baseline = demographic_parity_difference(base_stats);
            res.eo_baseline = equalized_odds_difference(base_stats);
            res.dp_fair = demographic_parity_difference(fair_stats);
            res.eo_fair = equalized_odds_difference(fair_stats);
            res.objective_baseline = baseline.objective_value;
            res.objective_fair = fair.objective_value;
            for (int g = 0; g < n_groups; ++g) {
                const GroupCounts& bc = base_stats.groups[g];
                const GroupCounts& fc = fair_stats.groups[g];
                res.baseline_rates.push_back(
                    {bc.selection_rate(), bc.fpr(), bc.tpr()});
                res.fair_rates.push_back({fc.selection_rate(), fc.fpr(), fc.tpr()});
            }
            res.widths = randomization_width(fair, scores);
            res.utility = leveling_down_report(population, baseline, fair,
                                               cfg.utility, apply_seed);

            if (r == 0) {
                report.baseline_policy = baseline;
                report.fair_policy = fair;
            }
            report.replicates.push_back(std::move(res));
        } catch (const UndefinedRateError& e) {
            throw UndefinedRateError("replicate " + std::to_string(r) + ": " +
                                     e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("replicate " + std::to_string(r) + ": " + e.what());
        }
    }

    // aggregate means and standard errors over replicates
    auto aggregate = [&](auto getter) {
        Aggregate a;
        double n = static_cast<double>(report.replicates.size());
        for (const ReplicateResult& res : report.replicates) a.mean += getter(res);
        a.mean /= n;
        if (report.replicates.size() > 1) {
            double ss = 0.0;
            for (const ReplicateResult& res : report.replicates) {
                double d = getter(res) - a.mean;
                ss += d * d;
            }
            a.se = std::sqrt(ss / (n - 1.0) / n);
        }
        return a;
    };
    report.dp_fair = aggregate([](const ReplicateResult& r) { return r.dp_fair; });
    report.eo_fair = aggregate([](const ReplicateResult& r) { return r.eo_fair; });
    report.objective_fair =
        aggregate([](const ReplicateResult& r) { return r.objective_fair; });

    for (int g = 0; g < n_groups; ++g) {
        GroupDelta d;
        double n = static_cast<double>(report.replicates.size());
        for (const ReplicateResult& res : report.replicates) {
            d.baseline_utility += res.utility.groups[g].baseline_utility;
            d.fair_utility += res.utility.groups[g].fair_utility;
            d.delta += res.utility.groups[g].delta;
            d.band += res.utility.groups[g].band;
        }
        d.baseline_utility /= n;
        d.fair_utility /= n;
        d.delta /= n;
        d.band /= n;
        if (report.replicates.size() > 1) {
            // with several replicates the fitted policies themselves vary, so
            // the uncertainty of the mean delta is the across-replicate spread,
            // not the average within-replicate band
            double ss = 0.0;
            for (const ReplicateResult& res : report.replicates) {
                double dd = res.utility.groups[g].delta - d.delta;
                ss += dd * dd;
            }
            d.band = 3.0 * std::sqrt(ss / (n - 1.0) / n);
        }
        report.utility_deltas.push_back(d);
    }
    report.verdict = classify_deltas(report.utility_deltas);
    return report;
}

namespace {

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string metrics_rows(const ScenarioReport& report) {
    std::ostringstream out;
    for (std::size_t r = 0; r < report.replicates.size(); ++r) {
        const ReplicateResult& res = report.replicates[r];
        out << "replicate " << r << " dp_difference_baseline "
            << format_double(res.dp_baseline) << "\n";
        out << "replicate " << r << " eo_difference_baseline "
            << format_double(res.eo_baseline) << "\n";
        out << "replicate " << r << " dp_difference " << format_double(res.dp_fair)
            << "\n";
        out << "replicate " << r << " eo_difference " << format_double(res.eo_fair)
            << "\n";
        out << "replicate " << r << " objective_baseline "
            << format_double(res.objective_baseline) << "\n";
        out << "replicate " << r << " objective " << format_double(res.objective_fair)
            << "\n";
        for (std::size_t g = 0; g < res.fair_rates.size(); ++g) {
            const GroupOperating& p = res.fair_rates[g];
            out << "replicate " << r << " group " << g << " selection "
                << format_double(p.selection_rate) << " fpr " << format_double(p.fpr)
                << " tpr " << format_double(p.tpr) << " width "
                << format_double(res.widths[g]) << "\n";
        }
    }
    out << "aggregate dp_difference mean " << format_double(report.dp_fair.mean)
        << " se " << format_double(report.dp_fair.se) << "\n";
    out << "aggregate eo_difference mean " << format_double(report.eo_fair.mean)
        << " se " << format_double(report.eo_fair.se) << "\n";
    out << "aggregate objective mean " << format_double(report.objective_fair.mean)
        << " se " << format_double(report.objective_fair.se) << "\n";
    for (std::size_t g = 0; g < report.utility_deltas.size(); ++g) {
        const GroupDelta& d = report.utility_deltas[g];
        out << "aggregate group " << g << " utility_delta "
            << format_double(d.delta) << " band " << format_double(d.band) << "\n";
    }
    out << "verdict " << verdict_name(report.verdict) << "\n";
    return out.str();
}

std::string metrics_structured(const ScenarioReport& report) {
    json doc;
    json reps = json::array();
    for (const ReplicateResult& res : report.replicates) {
        json rep;
        rep["dp_difference_baseline"] = res.dp_baseline;
        rep["eo_difference_baseline"] = res.eo_baseline;
        rep["dp_difference"] = res.dp_fair;
        rep["eo_difference"] = res.eo_fair;
        rep["objective_baseline"] = res.objective_baseline;
        rep["objective"] = res.objective_fair;
        json groups = json::array();
        for (std::size_t g = 0; g < res.fair_rates.size(); ++g) {
            groups.push_back({{"selection", res.fair_rates[g].selection_rate},
                              {"fpr", res.fair_rates[g].fpr},
                              {"tpr", res.fair_rates[g].tpr},
                              {"width", res.widths[g]}});
        }
        rep["groups"] = groups;
        reps.push_back(rep);
    }
    doc["replicates"] = reps;
    doc["aggregate"] = {
        {"dp_difference", {{"mean", report.dp_fair.mean}, {"se", report.dp_fair.se}}},
        {"eo_difference", {{"mean", report.eo_fair.mean}, {"se", report.eo_fair.se}}},
        {"objective",
         {{"mean", report.objective_fair.mean}, {"se", report.objective_fair.se}}}};
    json deltas = json::array();
    for (const GroupDelta& d : report.utility_deltas) {
        deltas.push_back({{"baseline_utility", d.baseline_utility},
                          {"fair_utility", d.fair_utility},
                          {"delta", d.delta},
                          {"band", d.band}});
    }
    doc["utility_deltas"] = deltas;
    doc["verdict"] = verdict_name(report.verdict);
    return doc.dump(2) + "\n";
}

std::string roc_rows(const ScenarioConfig& cfg, const ScenarioReport& report) {
    // geometry of replicate 0, recomputed from its population
    PopulationSpec spec = cfg.population;
    spec.seed = derive_seed(cfg.seed, 0);
    std::vector<Individual> population = sample_population(spec);
    ScoreSet scores = to_score_set(population, cfg.population.n_groups());
    std::ostringstream out;
    for (int g = 0; g < cfg.population.n_groups(); ++g) {
        RocCurve curve = build_roc(scores, g);
        RocHull hull = upper_hull(curve);
        for (const RocPoint& p : curve.points) {
            out << "group " << g << " curve " << format_double(p.fpr) << ' '
                << format_double(p.tpr) << ' ' << format_double(p.threshold) << "\n";
        }
        for (const RocPoint& p : hull.vertices) {
            out << "group " << g << " hull " << format_double(p.fpr) << ' '
                << format_double(p.tpr) << ' ' << format_double(p.threshold) << "\n";
        }
    }
    for (std::size_t g = 0; g < report.fair_policy.achieved.size(); ++g) {
        const GroupOperating& p = report.fair_policy.achieved[g];
        out << "group " << g << " chosen " << format_double(p.fpr) << ' '
            << format_double(p.tpr) << ' ' << format_double(p.selection_rate)
            << "\n";
    }
    return out.str();
}

std::string utility_rows(const ScenarioReport& report) {
    std::ostringstream out;
    for (std::size_t g = 0; g < report.utility_deltas.size(); ++g) {
        const GroupDelta& d = report.utility_deltas[g];
        out << g << ' ' << format_double(d.baseline_utility) << ' '
            << format_double(d.fair_utility) << ' ' << format_double(d.delta) << ' '
            << format_double(d.band) << "\n";
    }
    out << "verdict " << verdict_name(report.verdict) << "\n";
    return out.str();
}

std::string population_dump(const ScenarioConfig& cfg, const ScenarioReport& report) {
    PopulationSpec spec = cfg.population;
    spec.seed = derive_seed(cfg.seed, 0);
    std::vector<Individual> population = sample_population(spec);
    ScoreSet scores = to_score_set(population, cfg.population.n_groups());
    std::uint64_t apply_seed = derive_seed(cfg.seed, 1);
    LabeledPredictions pred = apply_policy(report.fair_policy, scores, apply_seed);
    for (std::size_t i = 0; i < population.size(); ++i) {
        population[i].decision = pred.predictions[i];
    }
    std::ostringstream out;
    write_population(out, population);
    return out.str();
}

}  // namespace

std::vector<std::filesystem::path> emit_report(const ScenarioConfig& cfg,
                                               const ScenarioReport& report,
                                               const std::filesystem::path& out_dir,
                                               ReportFormat format) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::filesystem::path& name, const std::string& content) {
        std::filesystem::path path = out_dir / name;
        atomic_write(path, content);
        written.push_back(path);
    };

    for (OutputKind kind : cfg.outputs) {
        switch (kind) {
            case OutputKind::Metrics:
                if (format == ReportFormat::Structured) {
                    emit("metrics.json", metrics_structured(report));
                } else {
                    emit("metrics.txt", metrics_rows(report));
                }
                break;
            case OutputKind::RocPoints:
                emit("roc_points.txt", roc_rows(cfg, report));
                break;
            case OutputKind::UtilityReport:
                emit("utility_report.txt", utility_rows(report));
                break;
            case OutputKind::PopulationDump:
                emit("population_dump.txt", population_dump(cfg, report));
                break;
        }
    }
    emit("policy.txt", report.fair_policy.to_text());
    emit("baseline_policy.txt", report.baseline_policy.to_text());
    return written;
}

}  // namespace fairpost
