#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "zenoplan/harness.hpp"
#include "zenoplan/oracle.hpp"

namespace zenoplan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct InstanceFlags {
    std::string name = "zeno3";
    int passengers = 0; // 0 = derive from name
    std::string tax2 = "2";

    ZenoSpec spec() const {
        int n = passengers;
        if (n == 0) {
            if (name == "zeno3") n = 3;
            else if (name == "zeno6") n = 6;
            else if (name == "zeno9") n = 9;
            else throw std::invalid_argument("unknown instance '" + name +
                                             "' (zeno3/zeno6/zeno9, or use --passengers)");
        }
        return ZenoSpec::canonical(n, Rat::parse(tax2));
    }
    std::string label() const {
        ZenoSpec s = spec();
        return "zeno" + std::to_string(s.passengers) +
               (tax2 == "2" ? std::string() : "_tax2_" + tax2);
    }
};

void add_instance_flags(CLI::App* cmd, InstanceFlags& inst) {
    cmd->add_option("--instance", inst.name, "instance name: zeno3, zeno6 or zeno9");
    cmd->add_option("--passengers", inst.passengers, "passenger count (multiple of 3)");
    cmd->add_option("--tax2", inst.tax2, "landing tax of city2 (default 2)");
}

struct BudgetFlags {
    std::string budget_seconds;
    std::uint64_t evals_budget = 0;

    RunBudget budget(const std::string& fallback_seconds) const {
        if (!budget_seconds.empty() && evals_budget != 0)
            throw std::invalid_argument("choose either --budget-seconds or --evals-budget");
        if (evals_budget != 0) return RunBudget::evals(evals_budget);
        return RunBudget::virtual_seconds(
            Rat::parse(budget_seconds.empty() ? fallback_seconds : budget_seconds));
    }
};

void add_budget_flags(CLI::App* cmd, BudgetFlags& b) {
    cmd->add_option("--budget-seconds", b.budget_seconds,
                    "per-run budget on the deterministic virtual clock");
    cmd->add_option("--evals-budget", b.evals_budget, "per-run offspring evaluation budget");
}

std::string default_desk_seconds(const ZenoSpec& spec) {
    if (spec.passengers <= 3) return "60";
    if (spec.passengers <= 6) return "120";
    return "300";
}

std::vector<Rat> parse_alpha_list(const std::string& text) {
    std::vector<Rat> alphas;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) alphas.push_back(Rat::parse(item));
    return alphas;
}

int cmd_gen(const InstanceFlags& inst, bool pddl, const fs::path& out) {
    ZenoSpec spec = inst.spec();
    fs::create_directories(out);
    const std::string label = inst.label();

    ParetoFront front = exact_front(spec);
    const bool stored = !stored_reference_front(spec).empty();
    write_front_csv(out / (label + ".front.csv"), front,
                    stored ? "stored reference front, revalidated by the pattern search oracle"
                           : "computed by the exhaustive routing-pattern oracle");

    std::ofstream specfile(out / (label + ".spec.json"));
    json sj;
    sj["passengers"] = spec.passengers;
    sj["planes"] = spec.planes;
    for (const CentralCity& c : spec.central)
        sj["central"].push_back(
            {{"duration", c.leg_duration.to_string()}, {"tax", c.landing_tax.to_string()}});
    specfile << sj.dump(2) << "\n";

    if (pddl) {
        PddlDocuments docs = export_pddl(spec);
        std::ofstream(out / (label + ".domain.pddl")) << docs.domain_pddl;
        std::ofstream(out / (label + ".problem.pddl")) << docs.problem_pddl;
    }
    std::cout << "wrote " << (out / (label + ".front.csv")).string() << " (" << front.size()
              << " points)\n";
    return 0;
}

int cmd_solve(const InstanceFlags& inst, const std::string& alpha_text, const std::string& config_file,
              const BudgetFlags& budget_flags, int max_nodes, std::uint64_t seed, bool normalize,
              const fs::path& out) {
    ZenoSpec spec = inst.spec();
    PlanningTask task = build_task(spec);
    Rat alpha = Rat::parse(alpha_text);
    DaEConfig cfg;
    if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) throw std::runtime_error("cannot open config: " + config_file);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = config_from_json_text(ss.str());
    }
    ObjectiveScale scale;
    if (normalize) {
        ParetoFront reference = exact_front(spec);
        scale.makespan_div = reference.points().back().makespan;
        scale.cost_div = reference.points().front().cost;
    }

    fs::create_directories(out);
    RunResult run = run_dae(task, cfg, alpha, budget_flags.budget(default_desk_seconds(spec)),
                            seed, SubplannerBudget{max_nodes}, scale);

    {
        std::ofstream tf(out / "trace.jsonl");
        write_trace_jsonl(tf, run.trace, {"alpha: " + alpha.to_string()});
    }
    std::vector<ObjectivePoint> pts;
    for (const EvaluatedIndividual& ind : run.population)
        if (ind.feasible) pts.push_back({ind.makespan, ind.cost});
    write_front_csv(out / "final.front.csv", nondominated(pts),
                    "nondominated set of the final population");

    json summary;
    summary["alpha"] = alpha.to_string();
    summary["seed"] = seed;
    summary["evals"] = run.evals;
    summary["virtual_seconds"] = run.virtual_seconds.to_string();
    summary["strategy_makespan"] = run.strategies.makespan_draws;
    summary["strategy_cost"] = run.strategies.cost_draws;
    summary["best"] = {{"feasible", run.best.feasible},
                       {"fitness", run.best.fitness.to_string()},
                       {"makespan", run.best.makespan.to_string()},
                       {"cost", run.best.cost.to_string()}};
    std::ofstream sf(out / "summary.json");
    sf << summary.dump(2) << "\n";
    std::cout << "best fitness " << run.best.fitness.to_string() << " after " << run.evals
              << " evaluations\n";
    return 0;
}

int cmd_tune(const InstanceFlags& inst, const std::string& measure_name, int tune_budget,
             int n_runs, const BudgetFlags& budget_flags, const std::string& alpha_list,
             int max_nodes, std::uint64_t seed, int workers, const fs::path& out) {
    ZenoSpec spec = inst.spec();
    PlanningTask task = build_task(spec);
    AlphaSchedule schedule = AlphaSchedule::standard();
    if (!alpha_list.empty()) schedule.alphas = parse_alpha_list(alpha_list);
    schedule.check();
    RunBudget run_budget = budget_flags.budget(default_desk_seconds(spec));

    QualityMeasure measure;
    if (measure_name == "hypervolume")
        measure = QualityMeasure::hypervolume(exact_front(spec));
    else if (measure_name != "fitness")
        throw std::invalid_argument("--measure must be fitness or hypervolume");

    fs::create_directories(out);
    const ParamSpace space = ParamSpace::table1();
    std::vector<DaEConfig> tuned(schedule.alphas.size());
    std::vector<TuneResult> results(schedule.alphas.size());

    std::vector<int> indices(schedule.alphas.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = static_cast<int>(i);
    auto tune_one = [&](int ai) {
        auto objective = [&, ai](const ConfigChoice& choice) {
            return evaluate_config(task, ParamSpace::table1_config(choice), schedule.alphas[ai],
                                   run_budget, measure, n_runs,
                                   mix_seed(seed, {kSeedTune, static_cast<std::uint64_t>(ai)}),
                                   SubplannerBudget{max_nodes});
        };
        TuneOptions options;
        options.budget = tune_budget;
        options.seed = mix_seed(seed, {kSeedTune, static_cast<std::uint64_t>(ai), 1});
        results[ai] = tune(space, objective, options);
        tuned[ai] = ParamSpace::table1_config(results[ai].incumbent);
    };
    // the per-alpha tunings are fully independent
    std::exception_ptr error;
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    int pool_size = std::min<int>(workers, static_cast<int>(indices.size()));
    if (pool_size <= 1) {
        for (int ai : indices) tune_one(ai);
    } else {
        std::mutex error_mutex;
        for (int w = 0; w < pool_size; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < indices.size(); i = next.fetch_add(1)) {
                    try {
                        tune_one(indices[i]);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!error) error = std::current_exception();
                    }
                }
            });
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }

    json tuned_json;
    for (std::size_t ai = 0; ai < schedule.alphas.size(); ++ai) {
        tuned_json["alphas"].push_back(schedule.alphas[ai].to_string());
        tuned_json["configs"].push_back(json::parse(config_to_json(tuned[ai])));

        std::ofstream lf(out / ("tune_alpha" + std::to_string(ai) + ".log.jsonl"));
        for (const TuneLogEntry& e : results[ai].log) {
            json rec;
            rec["eval_index"] = e.eval_index;
            rec["config"] = json::parse(config_to_json(ParamSpace::table1_config(e.config)));
            rec["quality"] = e.quality.to_string();
            rec["incumbent"] = e.incumbent_quality.to_string();
            lf << rec.dump() << "\n";
        }
    }
    tuned_json["measure"] = measure_name;
    std::ofstream cf(out / "tuned_configs.json");
    cf << tuned_json.dump(2) << "\n";
    std::cout << "tuned " << schedule.alphas.size() << " alpha configurations ("
              << measure_name << ")\n";
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"MultiZeno benchmark toolkit: aggregated multi-objective temporal planning"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "write instance spec, reference front and optional PDDL");
    InstanceFlags gen_inst;
    add_instance_flags(gen, gen_inst);
    bool gen_pddl = false;
    std::string gen_out = ".";
    gen->add_flag("--pddl", gen_pddl, "also export PDDL 2.1 domain/problem files");
    gen->add_option("--out", gen_out, "output directory");

    // solve
    auto* solve = app.add_subcommand("solve", "run one alpha-run of the evolutionary planner");
    InstanceFlags solve_inst;
    add_instance_flags(solve, solve_inst);
    BudgetFlags solve_budget;
    add_budget_flags(solve, solve_budget);
    std::string solve_alpha = "1.0", solve_config, solve_out = "solve_out";
    int solve_nodes = 100;
    std::uint64_t solve_seed = 1;
    bool solve_normalize = false;
    solve->add_option("--alpha", solve_alpha, "aggregation weight in [0,1]");
    solve->add_option("--config", solve_config, "DaE config JSON file");
    solve->add_option("--max-nodes", solve_nodes, "embedded planner node cap per sub-problem");
    solve->add_option("--seed", solve_seed, "run seed");
    solve->add_flag("--normalize", solve_normalize, "normalize objectives in the fitness");
    solve->add_option("--out", solve_out, "output directory");

    // aggregate
    auto* agg = app.add_subcommand("aggregate", "run a full aggregated campaign");
    InstanceFlags agg_inst;
    add_instance_flags(agg, agg_inst);
    BudgetFlags agg_budget;
    add_budget_flags(agg, agg_budget);
    std::string agg_manifest, agg_alphas, agg_configs, agg_out = "campaign";
    int agg_reps = 11, agg_nodes = 100, agg_workers = 1;
    std::uint64_t agg_seed = 1;
    bool agg_normalize = false;
    agg->add_option("--manifest", agg_manifest, "campaign manifest JSON (overrides other flags)");
    agg->add_option("--alpha-schedule", agg_alphas, "comma-separated alphas (default: standard 8)");
    agg->add_option("--configs", agg_configs, "configs JSON (single, array, or tuned_configs.json)");
    agg->add_option("--repetitions", agg_reps, "independent campaign repetitions");
    agg->add_option("--max-nodes", agg_nodes, "embedded planner node cap");
    agg->add_option("--workers", agg_workers, "parallel runs");
    agg->add_option("--seed", agg_seed, "seed root");
    agg->add_flag("--normalize", agg_normalize, "normalize objectives in the fitness");
    agg->add_option("--out", agg_out, "campaign output directory");

    // tune
    auto* tune_cmd = app.add_subcommand("tune", "tune per-alpha configurations with iterated local search");
    InstanceFlags tune_inst;
    add_instance_flags(tune_cmd, tune_inst);
    BudgetFlags tune_budget_flags;
    add_budget_flags(tune_cmd, tune_budget_flags);
    std::string tune_measure = "fitness", tune_alphas, tune_out = "tuning";
    int tune_budget_n = 60, tune_n_runs = 1, tune_nodes = 100, tune_workers = 1;
    std::uint64_t tune_seed = 1;
    tune_cmd->add_option("--measure", tune_measure, "quality measure: fitness or hypervolume");
    tune_cmd->add_option("--tune-budget", tune_budget_n, "configuration evaluations per alpha");
    tune_cmd->add_option("--n-runs", tune_n_runs, "target runs per configuration evaluation");
    tune_cmd->add_option("--alpha-schedule", tune_alphas, "comma-separated alphas");
    tune_cmd->add_option("--max-nodes", tune_nodes, "embedded planner node cap");
    tune_cmd->add_option("--workers", tune_workers, "parallel per-alpha tunings");
    tune_cmd->add_option("--seed", tune_seed, "tuning seed root");
    tune_cmd->add_option("--out", tune_out, "output directory");

    // eval / report
    auto* eval_cmd = app.add_subcommand("eval", "compute metric series from campaign traces");
    std::string eval_campaign_dir, eval_out;
    eval_cmd->add_option("--campaign", eval_campaign_dir, "campaign directory")->required();
    eval_cmd->add_option("--out", eval_out, "output directory (default: campaign dir)");

    auto* report_cmd = app.add_subcommand("report", "emit plot-ready CSV reports from traces");
    std::string report_campaign_dir, report_out;
    report_cmd->add_option("--campaign", report_campaign_dir, "campaign directory")->required();
    report_cmd->add_option("--out", report_out, "output directory (default: campaign dir)");

    // compare
    auto* cmp = app.add_subcommand("compare",
                                   "run both tuned approaches and report the signed-rank test");
    InstanceFlags cmp_inst;
    add_instance_flags(cmp, cmp_inst);
    BudgetFlags cmp_budget;
    add_budget_flags(cmp, cmp_budget);
    std::string cmp_hyper, cmp_fitness, cmp_alphas, cmp_out = "comparison";
    int cmp_reps = 11, cmp_nodes = 100, cmp_workers = 1;
    std::uint64_t cmp_seed = 1;
    cmp->add_option("--configs-hyper", cmp_hyper, "tuned configs for the hypervolume measure")
        ->required();
    cmp->add_option("--configs-fitness", cmp_fitness, "tuned configs for the fitness measure")
        ->required();
    cmp->add_option("--alpha-schedule", cmp_alphas, "comma-separated alphas");
    cmp->add_option("--repetitions", cmp_reps, "campaign repetitions per approach");
    cmp->add_option("--max-nodes", cmp_nodes, "embedded planner node cap");
    cmp->add_option("--workers", cmp_workers, "parallel campaigns");
    cmp->add_option("--seed", cmp_seed, "seed root (shared by both approaches)");
    cmp->add_option("--out", cmp_out, "output directory");

    std::vector<const char*> argv;
    argv.push_back("zenoplan");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_inst, gen_pddl, gen_out);
        if (solve->parsed())
            return cmd_solve(solve_inst, solve_alpha, solve_config, solve_budget, solve_nodes,
                             solve_seed, solve_normalize, solve_out);
        if (agg->parsed()) {
            CampaignManifest manifest;
            if (!agg_manifest.empty()) {
                manifest = load_manifest(agg_manifest);
            } else {
                manifest.instance = agg_inst.spec();
                if (!agg_alphas.empty()) manifest.schedule.alphas = parse_alpha_list(agg_alphas);
                manifest.budget = agg_budget.budget(default_desk_seconds(manifest.instance));
                manifest.repetitions = agg_reps;
                manifest.sub_nodes = agg_nodes;
                manifest.workers = agg_workers;
                manifest.seed_root = agg_seed;
                manifest.normalize = agg_normalize;
                if (!agg_configs.empty())
                    manifest.configs = load_configs_file(agg_configs, manifest.schedule);
            }
            run_campaign(manifest, agg_out);
            std::cout << "campaign written to " << agg_out << "\n";
            return 0;
        }
        if (tune_cmd->parsed())
            return cmd_tune(tune_inst, tune_measure, tune_budget_n, tune_n_runs, tune_budget_flags,
                            tune_alphas, tune_nodes, tune_seed, tune_workers, tune_out);
        if (eval_cmd->parsed()) {
            eval_campaign(eval_campaign_dir, eval_out.empty() ? eval_campaign_dir : eval_out);
            return 0;
        }
        if (report_cmd->parsed()) {
            report_campaign(report_campaign_dir,
                            report_out.empty() ? report_campaign_dir : report_out);
            return 0;
        }
        if (cmp->parsed()) {
            CampaignManifest base;
            base.instance = cmp_inst.spec();
            if (!cmp_alphas.empty()) base.schedule.alphas = parse_alpha_list(cmp_alphas);
            base.budget = cmp_budget.budget(default_desk_seconds(base.instance));
            base.repetitions = cmp_reps;
            base.sub_nodes = cmp_nodes;
            base.workers = cmp_workers;
            base.seed_root = cmp_seed;
            std::vector<DaEConfig> hyper = load_configs_file(cmp_hyper, base.schedule);
            std::vector<DaEConfig> fitness = load_configs_file(cmp_fitness, base.schedule);
            ComparisonReport report = reproduce_comparison(base, hyper, fitness, cmp_out);
            std::cout << "median I_H^- hypervolume-tuned: " << report.median_hyper.to_string()
                      << ", fitness-tuned: " << report.median_fitness.to_string()
                      << ", one-sided p = " << report.test.p_value << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace zenoplan
