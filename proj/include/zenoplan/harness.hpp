#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "zenoplan/aggregation.hpp"
#include "zenoplan/metrics.hpp"
#include "zenoplan/multizeno.hpp"
#include "zenoplan/paramils.hpp"

namespace zenoplan {

/// Everything needed to reproduce a campaign: instance, schedule, per-alpha
/// configs, budgets, repetitions and the seed root that fixes every derived
/// seed (seed(alpha, rep) = mix_seed(root, {kSeedRun, alpha_index, rep})).
struct CampaignManifest {
    ZenoSpec instance;
    AlphaSchedule schedule = AlphaSchedule::standard();
    std::vector<DaEConfig> configs; // one per alpha; empty = defaults
    RunBudget budget = RunBudget::virtual_seconds(Rat(60));
    int sub_nodes = 100;
    int repetitions = 11;
    std::uint64_t seed_root = 1;
    int workers = 1;
    bool normalize = false; // divide objectives by the reference extents

    void check() const;
    std::vector<DaEConfig> resolved_configs() const;
    std::uint64_t run_seed(int alpha_index, int repetition) const {
        return mix_seed(seed_root, {kSeedRun, static_cast<std::uint64_t>(alpha_index),
                                    static_cast<std::uint64_t>(repetition)});
    }
};

std::string manifest_to_json(const CampaignManifest& m);
CampaignManifest manifest_from_json(const std::string& text);
CampaignManifest load_manifest(const std::filesystem::path& file);

std::string config_to_json(const DaEConfig& cfg);
DaEConfig config_from_json_text(const std::string& text);

/// Per-alpha configs from a JSON file: a single config object, an array, or
/// a tune output ({"configs": [...]}). A single config fans out to every
/// alpha of the schedule.
std::vector<DaEConfig> load_configs_file(const std::filesystem::path& file,
                                         const AlphaSchedule& schedule);

/// Campaign file layout inside the output directory:
///   manifest.json, reference.front.csv,
///   rep<R>_alpha<I>.trace.jsonl, rep<R>.front.csv, campaign.json
struct CampaignPaths {
    std::filesystem::path dir;
    std::filesystem::path manifest() const { return dir / "manifest.json"; }
    std::filesystem::path reference_front() const { return dir / "reference.front.csv"; }
    std::filesystem::path trace(int rep, int alpha_index) const;
    std::filesystem::path merged_front(int rep) const;
    std::filesystem::path summary() const { return dir / "campaign.json"; }
    std::filesystem::path partial() const { return dir / "partial_results.json"; }
};

/// Runs every (alpha, repetition) pair of the manifest across a worker pool
/// and writes traces, per-repetition merged fronts and a summary. A crashed
/// run aborts the campaign after writing partial_results.json.
void run_campaign(const CampaignManifest& manifest, const std::filesystem::path& out_dir);

/// Reads the campaign traces and writes ihv_series.csv (per-run unary
/// hypervolume over time, population and archive columns) and hitting.csv
/// (first exact hit per reference point per repetition). Never reruns the EA.
void eval_campaign(const std::filesystem::path& campaign_dir,
                   const std::filesystem::path& out_dir);

/// Plot-ready aggregations: report_hypervolume.csv (per-alpha and overall
/// curves averaged over repetitions), report_hitting.csv (hit ratios over
/// time) and report_fronts.csv (merged fronts of every repetition).
void report_campaign(const std::filesystem::path& campaign_dir,
                     const std::filesystem::path& out_dir);

struct ComparisonReport {
    std::vector<Rat> hyper_samples;   // per repetition overall I_H^-
    std::vector<Rat> fitness_samples;
    Rat median_hyper;
    Rat median_fitness;
    WilcoxonResult test;
    bool direction_expected = false; // median(hyper) <= median(fitness)
};

/// Runs `repetitions` aggregated campaigns per tuning approach with shared
/// seeds, scores each by the unary hypervolume of its merged front, and
/// applies the signed-rank test. Writes comparison_samples.csv and
/// comparison.json into out_dir.
ComparisonReport reproduce_comparison(const CampaignManifest& base,
                                      const std::vector<DaEConfig>& configs_hyper,
                                      const std::vector<DaEConfig>& configs_fitness,
                                      const std::filesystem::path& out_dir);

/// Full CLI (gen/solve/aggregate/tune/eval/report/compare); returns the
/// process exit status.
int run_cli(const std::vector<std::string>& args);

/// Reference front CSV: "makespan,cost" header, one '#' provenance line,
/// then one row per point.
void write_front_csv(const std::filesystem::path& file, const ParetoFront& front,
                     const std::string& provenance);
ParetoFront read_front_csv(const std::filesystem::path& file);

} // namespace zenoplan
