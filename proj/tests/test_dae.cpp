#include <doctest.h>

#include <cmath>
#include <sstream>

#include "zenoplan/dae.hpp"
#include "zenoplan/multizeno.hpp"

using namespace zenoplan;

namespace {

DaEConfig test_config() {
    DaEConfig cfg;
    cfg.pop_size = 30;
    return cfg;
}

Genome single_station(const TaskContext& ctx, std::initializer_list<Atom> atoms) {
    Genome g;
    PartialState st;
    for (const Atom& a : atoms) st.atoms.push_back(ctx.task.atom_id(a));
    st.key = ctx.key(st.atoms[0]);
    for (AtomId a : st.atoms) st.key = min(st.key, ctx.key(a));
    g.stations.push_back(std::move(st));
    return g;
}

} // namespace

TEST_CASE("config grid validation") {
    DaEConfig ok = test_config();
    CHECK_NOTHROW(ok.check());

    DaEConfig bad_pop = ok;
    bad_pop.pop_size = 64;
    CHECK_THROWS_AS(bad_pop.check(), std::invalid_argument);

    DaEConfig bad_proba = ok;
    bad_proba.proba_cross = Rat(3, 10);
    CHECK_THROWS_AS(bad_proba.check(), std::invalid_argument);

    DaEConfig no_strategy = ok;
    no_strategy.w_makespan = 0;
    no_strategy.w_cost = 0;
    CHECK_THROWS_AS(no_strategy.check(), std::invalid_argument);
}

TEST_CASE("init genome: invariants hold for every draw") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    TaskContext ctx(task);
    Rng rng(123);
    for (int i = 0; i < 2000; ++i) {
        Genome g = init_genome(ctx, rng, 5);
        CHECK(genome_valid(ctx, g));
        CHECK(g.stations.size() >= 1);
        CHECK(g.stations.size() <= 5);
    }
    CHECK(init_genome(ctx, rng, 0).stations.empty());
}

TEST_CASE("station keys come from the earliest-time map") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    TaskContext ctx(task);
    AtomId p1_city4 = task.atom_id({Pred::At, 0, 4});
    CHECK(ctx.key(p1_city4) == Rat(4));
    Genome g = single_station(ctx, {{Pred::At, 0, 4}});
    CHECK(g.stations[0].key == Rat(4));
    CHECK(genome_valid(ctx, g));
}

TEST_CASE("crossover: empty parents, key ordering over random pairs") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    TaskContext ctx(task);
    Rng rng(55);

    Genome empty;
    CHECK(crossover(empty, empty, rng).stations.empty());

    for (int i = 0; i < 10000; ++i) {
        Genome a = init_genome(ctx, rng, 4);
        Genome b = init_genome(ctx, rng, 4);
        Genome child = crossover(a, b, rng);
        CHECK(genome_valid(ctx, child));
    }
}

TEST_CASE("mutation keeps genomes valid for every operator mix") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    TaskContext ctx(task);
    DaEConfig cfg = test_config();
    Rng rng(808);
    for (int i = 0; i < 10000; ++i) {
        Genome g = init_genome(ctx, rng, 4);
        Genome m = mutate(ctx, g, cfg, rng);
        CHECK(genome_valid(ctx, m));
    }
}

TEST_CASE("delGoal empties a single-station genome") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    TaskContext ctx(task);
    DaEConfig cfg = test_config();
    cfg.w_add_atom = 0;
    cfg.w_add_goal = 0;
    cfg.w_del_atom = 0;
    cfg.w_del_goal = 1;
    Rng rng(1);
    Genome g = single_station(ctx, {{Pred::At, 0, 4}});
    CHECK(mutate(ctx, g, cfg, rng).stations.empty());
}

TEST_CASE("operator draw frequencies: equal weights stay within 3 sigma") {
    Rng rng(2024);
    const int draws = 10000;
    int counts[4] = {0, 0, 0, 0};
    const int weights[4] = {1, 1, 1, 1};
    for (int i = 0; i < draws; ++i)
        ++counts[rng.weighted_pick(std::span<const int>(weights, 4))];
    const double expected = draws / 4.0;
    const double sigma = std::sqrt(draws * 0.25 * 0.75);
    for (int c : counts) CHECK(std::abs(c - expected) <= 3 * sigma);
}

TEST_CASE("evaluate: empty genome, aggregation arithmetic, determinism") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    TaskContext ctx(task);
    Subplanner planner(task);
    DaEConfig cfg = test_config();

    Genome empty;
    EvaluatedIndividual direct = evaluate(ctx, planner, empty, cfg, Rat(1), {1000}, 77);
    REQUIRE(direct.feasible);
    CHECK(direct.fitness == direct.makespan); // alpha = 1 degenerates to makespan

    EvaluatedIndividual half = evaluate(ctx, planner, empty, cfg, Rat(1, 2), {1000}, 77);
    REQUIRE(half.feasible);
    CHECK(half.fitness == (half.makespan + half.cost) / Rat(2));

    EvaluatedIndividual again = evaluate(ctx, planner, empty, cfg, Rat(1, 2), {1000}, 77);
    CHECK(again.makespan == half.makespan);
    CHECK(again.cost == half.cost);
    CHECK(again.fitness == half.fitness);
}

TEST_CASE("a feasible individual with makespan 8 and cost 12 scores 10 at alpha 1/2") {
    CHECK(Rat(1, 2) * Rat(8) + (Rat(1) - Rat(1, 2)) * Rat(12) == Rat(10));
}

TEST_CASE("unreachable station atom marks the individual infeasible with the penalty") {
    // flights into the far hub removed: at(p1, city4) can never hold
    PlanningTask cut = build_task(ZenoSpec::canonical(3));
    std::erase_if(cut.actions, [](const Action& a) {
        return a.name.rfind("fly", 0) == 0 && a.name.rfind("city4") == a.name.size() - 5;
    });
    cut.finalize();
    TaskContext ctx(cut);
    Subplanner planner(cut);
    DaEConfig cfg = test_config();

    Genome g;
    for (int i = 0; i < 3; ++i) {
        PartialState st;
        st.atoms.push_back(cut.atom_id({Pred::At, 0, 4}));
        st.key = Rat(0); // the atom is unreachable; only failure accounting matters
        g.stations.push_back(st);
    }
    EvaluatedIndividual ind = evaluate(ctx, planner, g, cfg, Rat(1), {50}, 5);
    CHECK_FALSE(ind.feasible);
    CHECK(ind.unsolved == 4); // three stations plus the final goal, none solved
    CHECK(ind.fitness == kPenaltyBase + Rat(4));
}

TEST_CASE("run_dae: zero budget returns the evaluated initial population") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    DaEConfig cfg = test_config();
    RunResult run = run_dae(task, cfg, Rat(1), RunBudget::evals(0), 9);
    CHECK(run.trace.snapshots.size() == 1);
    CHECK(run.population.size() == 30);
    CHECK(run.evals == 30);
    CHECK(run.best.fitness == run.population.front().fitness);
}

TEST_CASE("run_dae: elitism makes best fitness nonincreasing") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    DaEConfig cfg = test_config();
    RunResult run = run_dae(task, cfg, Rat(1, 2), RunBudget::evals(300), 31);
    REQUIRE(run.trace.snapshots.size() > 1);
    for (std::size_t i = 1; i < run.trace.snapshots.size(); ++i)
        CHECK(run.trace.snapshots[i].best_fitness <= run.trace.snapshots[i - 1].best_fitness);
}

TEST_CASE("run_dae: no infeasible individual ranks above a feasible one") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    DaEConfig cfg = test_config();
    RunResult run = run_dae(task, cfg, Rat(0), RunBudget::evals(120), 13);
    bool seen_infeasible = false;
    for (const EvaluatedIndividual& ind : run.population) {
        if (!ind.feasible) seen_infeasible = true;
        if (ind.feasible) CHECK_FALSE(seen_infeasible); // feasible block comes first
    }
}

TEST_CASE("final population genomes keep mutex-freedom and time-consistency") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    TaskContext ctx(task);
    DaEConfig cfg = test_config();
    RunResult run = run_dae(task, cfg, Rat(1, 2), RunBudget::evals(240), 97);
    for (const EvaluatedIndividual& ind : run.population)
        CHECK(genome_valid(ctx, ind.genome));
}

TEST_CASE("strategy weights gate the embedded planner exclusively") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    DaEConfig cfg = test_config();
    cfg.w_makespan = 3;
    cfg.w_cost = 0;
    RunResult run = run_dae(task, cfg, Rat(1), RunBudget::evals(60), 21);
    CHECK(run.strategies.makespan_draws > 0);
    CHECK(run.strategies.cost_draws == 0);

    cfg.w_makespan = 0;
    cfg.w_cost = 4;
    RunResult flipped = run_dae(task, cfg, Rat(1), RunBudget::evals(60), 21);
    CHECK(flipped.strategies.makespan_draws == 0);
    CHECK(flipped.strategies.cost_draws > 0);
}

TEST_CASE("traces serialize and parse losslessly") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    DaEConfig cfg = test_config();
    RunResult run = run_dae(task, cfg, Rat(1, 2), RunBudget::evals(90), 17);

    std::ostringstream out;
    write_trace_jsonl(out, run.trace, {"header line with a timestamp"});
    std::istringstream in(out.str());
    RunTrace back = read_trace_jsonl(in);
    REQUIRE(back.snapshots.size() == run.trace.snapshots.size());
    for (std::size_t i = 0; i < back.snapshots.size(); ++i) {
        CHECK(back.snapshots[i].t == run.trace.snapshots[i].t);
        CHECK(back.snapshots[i].evals == run.trace.snapshots[i].evals);
        CHECK(back.snapshots[i].best_fitness == run.trace.snapshots[i].best_fitness);
        CHECK(back.snapshots[i].points == run.trace.snapshots[i].points);
    }
}

TEST_CASE("identical seeds reproduce identical traces") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    DaEConfig cfg = test_config();
    RunResult a = run_dae(task, cfg, Rat(1), RunBudget::evals(120), 4242);
    RunResult b = run_dae(task, cfg, Rat(1), RunBudget::evals(120), 4242);
    std::ostringstream sa, sb;
    write_trace_jsonl(sa, a.trace);
    write_trace_jsonl(sb, b.trace);
    CHECK(sa.str() == sb.str());
}
