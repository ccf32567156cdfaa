#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fairpost/core.hpp"
#include "fairpost/runner.hpp"
#include "fairpost/text.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

std::filesystem::path resolve_out_dir(const std::string& flag_value) {
    if (const char* env = std::getenv("FAIRPOST_OUT_DIR")) {
        if (*env != '\0') return env;
    }
    return flag_value;
}

void apply_overrides(fairpost::ScenarioConfig& cfg, std::optional<std::uint64_t> seed,
                     std::optional<int> replicates) {
    if (seed) cfg.seed = *seed;
    if (replicates) cfg.replicates = *replicates;
    cfg.validate();
}

fairpost::ReportFormat parse_format(const std::string& name) {
    if (name == "rows") return fairpost::ReportFormat::Rows;
    if (name == "structured") return fairpost::ReportFormat::Structured;
    throw fairpost::ValidationError("--format must be 'rows' or 'structured'");
}

int run_config(const fairpost::ScenarioConfig& cfg,
               const std::filesystem::path& out_dir,
               fairpost::ReportFormat format) {
    fairpost::ScenarioReport report = fairpost::run_scenario(cfg);
    auto files = fairpost::emit_report(cfg, report, out_dir, format);
    for (const auto& f : files) {
        std::cout << "wrote " << f.string() << "\n";
    }
    std::cout << "verdict " << fairpost::verdict_name(report.verdict) << "\n";
    return 0;
}

int audit(const std::filesystem::path& dump_path,
          const std::filesystem::path& policy_path, std::uint64_t seed) {
    std::ifstream dump_in(dump_path);
    if (!dump_in) {
        throw fairpost::ValidationError("cannot open population dump " +
                                        dump_path.string());
    }
    std::vector<fairpost::Individual> population =
        fairpost::read_population(dump_in);
    std::ifstream policy_in(policy_path);
    if (!policy_in) {
        throw fairpost::ValidationError("cannot open policy file " +
                                        policy_path.string());
    }
    std::ostringstream buf;
    buf << policy_in.rdbuf();
    fairpost::FairPolicy policy = fairpost::FairPolicy::from_text(buf.str());

    int n_groups = policy.n_groups();
    fairpost::ScoreSet scores = fairpost::to_score_set(population, n_groups);
    fairpost::LabeledPredictions pred =
        fairpost::apply_policy(policy, scores, seed);
    fairpost::ConfusionStats stats = fairpost::confusion_stats(pred);

    std::cout << "dp_difference "
              << fairpost::format_double(
                     fairpost::demographic_parity_difference(stats))
              << "\n";
    std::cout << "eo_difference "
              << fairpost::format_double(fairpost::equalized_odds_difference(stats))
              << "\n";
    std::vector<double> widths = fairpost::randomization_width(policy, scores);
    for (int g = 0; g < n_groups; ++g) {
        const fairpost::GroupCounts& c = stats.groups[g];
        std::cout << "group " << g << " selection "
                  << fairpost::format_double(c.selection_rate()) << " fpr "
                  << fairpost::format_double(c.fpr()) << " tpr "
                  << fairpost::format_double(c.tpr()) << " width "
                  << fairpost::format_double(widths[g]) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group-fairness post-processing experiments"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir = "out", format_name = "rows";
    std::string dump_path, policy_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> replicates_override;
    std::uint64_t audit_seed = 0;

    CLI::App* run = app.add_subcommand("run", "Run a scenario config");
    run->add_option("config", config_path, "Scenario config file")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--seed", seed_override, "Override the config seed");
    run->add_option("--replicates", replicates_override, "Override replicates");
    run->add_option("--format", format_name, "Report format: rows|structured");

    CLI::App* preset = app.add_subcommand("preset", "Run a shipped scenario preset");
    preset->add_option("name", preset_name, "Preset name")->required();
    preset->add_option("--out", out_dir, "Output directory");
    preset->add_option("--seed", seed_override, "Override the preset seed");
    preset->add_option("--replicates", replicates_override, "Override replicates");
    preset->add_option("--format", format_name, "Report format: rows|structured");

    CLI::App* aud =
        app.add_subcommand("audit", "Recompute metrics on a population dump");
    aud->add_option("population_dump", dump_path, "Population dump file")->required();
    aud->add_option("policy_file", policy_path, "Serialized policy file")->required();
    aud->add_option("--seed", audit_seed, "Seed for randomized thresholds");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            fairpost::ScenarioConfig cfg = fairpost::load_config(config_path);
            apply_overrides(cfg, seed_override, replicates_override);
            return run_config(cfg, resolve_out_dir(out_dir),
                              parse_format(format_name));
        }
        if (preset->parsed()) {
            fairpost::ScenarioConfig cfg = fairpost::preset_config(preset_name);
            apply_overrides(cfg, seed_override, replicates_override);
            auto dir = resolve_out_dir(out_dir);
            std::filesystem::create_directories(dir);
            {
                std::ofstream cfg_out(dir / "config.json",
                                      std::ios::binary | std::ios::trunc);
                cfg_out << fairpost::config_to_text(cfg);
            }
            return run_config(cfg, dir, parse_format(format_name));
        }
        if (aud->parsed()) {
            return audit(dump_path, policy_path, audit_seed);
        }
    } catch (const fairpost::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
