#include <doctest.h>

#include "zenoplan/multizeno.hpp"
#include "zenoplan/paramils.hpp"

using namespace zenoplan;

namespace {

// separable synthetic target over a six-parameter space with a unique,
// brute-forced optimum
struct SyntheticTarget {
    ParamSpace space;
    std::vector<std::vector<Rat>> penalty; // per parameter, per value index
    ConfigChoice optimum;
    Rat optimum_quality;

    explicit SyntheticTarget(std::uint64_t seed) {
        Rng rng(seed);
        for (int p = 0; p < 6; ++p) {
            ParamDomain dom;
            dom.name = "p" + std::to_string(p);
            for (int v = 0; v < 6; ++v) dom.values.push_back(Rat(v));
            space.domains.push_back(dom);
            std::vector<Rat> pen;
            for (int v = 0; v < 6; ++v) pen.push_back(Rat(static_cast<std::int64_t>(rng.range(0, 40))));
            // force a unique minimum per parameter
            std::size_t best = rng.below(6);
            pen[best] = Rat(-1);
            penalty.push_back(pen);
        }
        // brute force the whole space to confirm the unique optimum
        ConfigChoice c(6, 0);
        std::optional<Rat> best_q;
        int best_count = 0;
        enumerate(c, 0, [&](const ConfigChoice& full) {
            Rat q = quality(full);
            if (!best_q || q < *best_q) {
                best_q = q;
                optimum = full;
                best_count = 1;
            } else if (q == *best_q) {
                ++best_count;
            }
        });
        REQUIRE(best_count == 1);
        optimum_quality = *best_q;
    }

    template <class Fn>
    void enumerate(ConfigChoice& c, int depth, Fn&& fn) {
        if (depth == 6) {
            fn(c);
            return;
        }
        for (int v = 0; v < 6; ++v) {
            c[depth] = v;
            enumerate(c, depth + 1, fn);
        }
    }

    Rat quality(const ConfigChoice& c) const {
        Rat q(0);
        for (int p = 0; p < 6; ++p) q += penalty[p][c[p]];
        return q;
    }
};

} // namespace

TEST_CASE("table1 space has about 1.5e9 configurations") {
    ParamSpace space = ParamSpace::table1();
    CHECK(space.domains.size() == 12);
    CHECK(space.size() == doctest::Approx(1.5116544e9));
}

TEST_CASE("table1 choices map onto valid grid configs and back") {
    ParamSpace space = ParamSpace::table1();
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        ConfigChoice c(space.domains.size());
        do {
            for (std::size_t p = 0; p < space.domains.size(); ++p)
                c[p] = static_cast<int>(rng.below(space.domains[p].values.size()));
        } while (!space.is_valid(c));
        DaEConfig cfg = ParamSpace::table1_config(c);
        CHECK_NOTHROW(cfg.check()); // always exactly on the grid
        CHECK(ParamSpace::table1_choice(cfg) == c);
    }
}

TEST_CASE("budget one evaluates exactly the start configuration") {
    SyntheticTarget target(1);
    TuneOptions options;
    options.budget = 1;
    TuneResult res = tune(target.space, [&](const ConfigChoice& c) { return target.quality(c); },
                          options);
    CHECK(res.log.size() == 1);
    CHECK(res.incumbent == res.log[0].config);
    CHECK(res.incumbent_quality == res.log[0].quality);
}

TEST_CASE("incumbent trajectory is nonincreasing and moves strictly improve") {
    SyntheticTarget target(2);
    TuneOptions options;
    options.budget = 200;
    options.seed = 7;
    TuneResult res = tune(target.space, [&](const ConfigChoice& c) { return target.quality(c); },
                          options);
    REQUIRE(res.log.size() == 200);
    for (std::size_t i = 1; i < res.log.size(); ++i)
        CHECK(res.log[i].incumbent_quality <= res.log[i - 1].incumbent_quality);
    CHECK(res.incumbent_quality == res.log.back().incumbent_quality);
}

TEST_CASE("synthetic optimum found within 300 evaluations in at least 10 of 11 seeds") {
    SyntheticTarget target(3);
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 11; ++seed) {
        TuneOptions options;
        options.budget = 300;
        options.seed = seed;
        TuneResult res = tune(target.space,
                              [&](const ConfigChoice& c) { return target.quality(c); }, options);
        if (res.incumbent == target.optimum) ++hits;
    }
    CHECK(hits >= 10);
}

TEST_CASE("every logged configuration lies on the grid") {
    ParamSpace space = ParamSpace::table1();
    // cheap synthetic objective on the real table-1 space
    auto objective = [&](const ConfigChoice& c) {
        Rat q(0);
        for (std::size_t p = 0; p < c.size(); ++p) q += Rat(c[p]);
        return q;
    };
    TuneOptions options;
    options.budget = 120;
    options.seed = 3;
    TuneResult res = tune(space, objective, options);
    REQUIRE(res.log.size() == 120);
    for (const TuneLogEntry& e : res.log) {
        CHECK(space.is_valid(e.config));
        CHECK_NOTHROW(ParamSpace::table1_config(e.config).check());
    }
}

TEST_CASE("evaluate_config means over seeded runs deterministically") {
    PlanningTask task = build_task(ZenoSpec::canonical(3));
    DaEConfig cfg;
    cfg.pop_size = 30;
    QualityMeasure fitness = QualityMeasure::fitness();
    Rat a = evaluate_config(task, cfg, Rat(1), RunBudget::evals(60), fitness, 3, 99);
    Rat b = evaluate_config(task, cfg, Rat(1), RunBudget::evals(60), fitness, 3, 99);
    CHECK(a == b);

    // with alpha = 1 the fitness measure is the mean best makespan
    Rat total(0);
    for (int r = 0; r < 3; ++r) {
        RunResult run = run_dae(task, cfg, Rat(1), RunBudget::evals(60),
                                mix_seed(99, {kSeedRun, static_cast<std::uint64_t>(r)}));
        CHECK(run.best.feasible);
        CHECK(run.best.fitness == run.best.makespan);
        total += run.best.fitness;
    }
    CHECK(a == total / Rat(3));
}
