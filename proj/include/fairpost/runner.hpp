#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fairpost/postprocess.hpp"
#include "fairpost/spaces.hpp"
#include "fairpost/utility.hpp"

namespace fairpost {

enum class OutputKind { Metrics, RocPoints, UtilityReport, PopulationDump };

enum class ReportFormat { Rows, Structured };

/// Declarative description of one experiment: population, bias injectors,
/// constraint, objective, outputs.
struct ScenarioConfig {
    static constexpr int kSchemaVersion = 1;

    std::vector<std::string> group_labels;
    PopulationSpec population;
    UtilityMatrix utility;
    Constraint constraint = Constraint::None;
    CostModel cost;
    std::optional<double> budget;
    int replicates = 1;
    std::uint64_t seed = 0;
    std::vector<OutputKind> outputs;

    void validate() const;
};

/// Parse and schema-validate a config document. Unknown keys are rejected;
/// errors name the offending field.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config(const std::string& text, const std::string& origin);
std::string config_to_text(const ScenarioConfig& cfg);

/// Shipped scenario presets: resume_selection, lending, disease_detection.
ScenarioConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

struct ReplicateResult {
    double dp_baseline = 0.0;
    double eo_baseline = 0.0;
    double dp_fair = 0.0;
    double eo_fair = 0.0;
    double objective_baseline = 0.0;
    double objective_fair = 0.0;
    std::vector<GroupOperating> baseline_rates;  // empirical per group
    std::vector<GroupOperating> fair_rates;
    std::vector<double> widths;
    LevelingReport utility;
};

struct Aggregate {
    double mean = 0.0;
    double se = 0.0;
};

struct ScenarioReport {
    std::vector<ReplicateResult> replicates;
    Aggregate dp_fair;
    Aggregate eo_fair;
    Aggregate objective_fair;
    std::vector<GroupDelta> utility_deltas;  // means, band = mean band
    Verdict verdict = Verdict::None;
    FairPolicy fair_policy;      // fitted on replicate 0
    FairPolicy baseline_policy;  // fitted on replicate 0
};

/// Run every replicate: sample, fit baseline and constrained policy, apply
/// both, collect metrics, widths and the utility report; aggregate means and
/// standard errors. Deterministic given cfg.seed.
ScenarioReport run_scenario(const ScenarioConfig& cfg);

/// Write the report bundle (per cfg.outputs) into out_dir. Files are written
/// atomically (write-then-rename). Returns the files written.
std::vector<std::filesystem::path> emit_report(const ScenarioConfig& cfg,
                                               const ScenarioReport& report,
                                               const std::filesystem::path& out_dir,
                                               ReportFormat format);

}  // namespace fairpost
