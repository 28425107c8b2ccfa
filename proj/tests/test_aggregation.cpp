#include <doctest.h>

#include "zenoplan/aggregation.hpp"
#include "zenoplan/metrics.hpp"
#include "zenoplan/multizeno.hpp"
#include "zenoplan/oracle.hpp"

using namespace zenoplan;

namespace {

std::vector<std::uint64_t> seeds_for(const AlphaSchedule& s, std::uint64_t root) {
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < s.alphas.size(); ++i) seeds.push_back(mix_seed(root, {i}));
    return seeds;
}

DaEConfig small_config() {
    DaEConfig cfg;
    cfg.pop_size = 30;
    return cfg;
}

} // namespace

TEST_CASE("scalar fitness anchors") {
    CHECK(scalar_fitness(Rat(1), {Rat(8), Rat(12)}) == Rat(8));
    CHECK(scalar_fitness(Rat(0), {Rat(24), Rat(4)}) == Rat(4));
    CHECK(scalar_fitness(Rat::parse("0.3"), {Rat(16), Rat(8)}) == Rat::parse("10.4"));
    CHECK_THROWS_AS(scalar_fitness(Rat(2), {Rat(1), Rat(1)}), std::invalid_argument);
}

TEST_CASE("schedule validation") {
    CHECK_NOTHROW(AlphaSchedule::standard().check());
    AlphaSchedule empty;
    CHECK_THROWS_AS(empty.check(), std::invalid_argument);
    AlphaSchedule unsorted{{Rat(1, 2), Rat(1, 4)}};
    CHECK_THROWS_AS(unsorted.check(), std::invalid_argument);
    AlphaSchedule outside{{Rat(2)}};
    CHECK_THROWS_AS(outside.check(), std::invalid_argument);
}

TEST_CASE("single-alpha aggregation returns that run's nondominated points") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    AlphaSchedule schedule{{Rat(1)}};
    AggregatedOutcome out = run_aggregated(task, {small_config()}, schedule,
                                           RunBudget::evals(120), seeds_for(schedule, 5));
    REQUIRE(out.runs.size() == 1);
    std::vector<ObjectivePoint> pts;
    for (const EvaluatedIndividual& ind : out.runs[0].population)
        if (ind.feasible) pts.push_back({ind.makespan, ind.cost});
    CHECK(out.merged == nondominated(pts));
}

TEST_CASE("merging identical populations is idempotent") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    AlphaSchedule schedule{{Rat(1)}};
    AggregatedOutcome once = run_aggregated(task, {small_config()}, schedule,
                                            RunBudget::evals(60), seeds_for(schedule, 8));
    std::vector<RunResult> twice = {once.runs[0], once.runs[0]};
    CHECK(merge_final_populations(twice) == once.merged);
}

TEST_CASE("merged front equals the quadratic dominance filter of the union") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    AlphaSchedule schedule{{Rat(0), Rat(1, 2), Rat(1)}};
    std::vector<DaEConfig> configs(3, small_config());
    AggregatedOutcome out = run_aggregated(task, configs, schedule, RunBudget::evals(90),
                                           seeds_for(schedule, 77));
    std::vector<ObjectivePoint> pool;
    for (const RunResult& run : out.runs) {
        for (const EvaluatedIndividual& ind : run.population)
            if (ind.feasible) pool.push_back({ind.makespan, ind.cost});
        if (run.best.feasible) pool.push_back({run.best.makespan, run.best.cost});
    }
    // quadratic filter
    std::vector<ObjectivePoint> slow;
    for (const ObjectivePoint& p : pool) {
        bool dominated = false, dup = false;
        for (const ObjectivePoint& q : pool)
            if (!(q == p) && q.dominates(p)) dominated = true;
        for (const ObjectivePoint& q : slow)
            if (q == p) dup = true;
        if (!dominated && !dup) slow.push_back(p);
    }
    std::sort(slow.begin(), slow.end(), lex_less);
    CHECK(out.merged.points() == slow);

    // the merged front is never dominated by any population point
    for (const ObjectivePoint& p : pool)
        for (const ObjectivePoint& q : out.merged.points())
            CHECK_FALSE((p.dominates(q) && !(p == q)));
}

TEST_CASE("adding an alpha never worsens the merged hypervolume") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    ParetoFront reference = exact_front(ZenoSpec::canonical(3));
    ReferencePoint ref = ReferencePoint::for_front(reference);

    AlphaSchedule two{{Rat(0), Rat(1)}};
    AlphaSchedule three{{Rat(0), Rat(1, 2), Rat(1)}};
    // seeds per alpha value stay aligned between the schedules
    std::vector<std::uint64_t> seeds_two = {mix_seed(3, {0}), mix_seed(3, {2})};
    std::vector<std::uint64_t> seeds_three = {mix_seed(3, {0}), mix_seed(3, {1}), mix_seed(3, {2})};

    AggregatedOutcome small = run_aggregated(task, {small_config(), small_config()}, two,
                                             RunBudget::evals(90), seeds_two);
    AggregatedOutcome large =
        run_aggregated(task, {small_config(), small_config(), small_config()}, three,
                       RunBudget::evals(90), seeds_three);
    Rat small_ihv = unary_hypervolume(small.merged.points(), reference, ref);
    Rat large_ihv = unary_hypervolume(large.merged.points(), reference, ref);
    CHECK(large_ihv <= small_ihv);
}

TEST_CASE("aggregation demands one config and one seed per alpha") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    AlphaSchedule schedule{{Rat(0), Rat(1)}};
    CHECK_THROWS_AS(run_aggregated(task, {small_config()}, schedule, RunBudget::evals(10),
                                   seeds_for(schedule, 1)),
                    std::invalid_argument);
}
