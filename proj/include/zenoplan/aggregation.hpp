#pragma once

#include <vector>

#include "zenoplan/dae.hpp"
#include "zenoplan/objectives.hpp"

namespace zenoplan {

/// The weight list of the aggregation scheme. The published schedule is
/// deliberately irregular because the makespan range is about twice the
/// cost range.
struct AlphaSchedule {
    std::vector<Rat> alphas;

    static AlphaSchedule standard() {
        AlphaSchedule s;
        for (const char* a : {"0", "0.05", "0.1", "0.3", "0.5", "0.55", "0.7", "1.0"})
            s.alphas.push_back(Rat::parse(a));
        return s;
    }
    void check() const; // nonempty, strictly increasing, within [0, 1]
};

/// F_alpha = alpha * makespan + (1 - alpha) * cost, exact.
Rat scalar_fitness(const Rat& alpha, const ObjectivePoint& p);

struct AggregatedOutcome {
    ParetoFront merged;          // nondominated set over all final populations
    std::vector<RunResult> runs; // one per alpha, schedule order
};

/// Runs one alpha-run per schedule entry (independent, seeded) and merges
/// the final populations plus each run's best-ever individual into the
/// front approximation.
AggregatedOutcome run_aggregated(const PlanningTask& task, const std::vector<DaEConfig>& configs,
                                 const AlphaSchedule& schedule, const RunBudget& budget,
                                 const std::vector<std::uint64_t>& seeds,
                                 SubplannerBudget sub_budget = {},
                                 const ObjectiveScale& scale = {});

/// The merge step alone: nondominated filter over every feasible point of
/// the final populations and bests.
ParetoFront merge_final_populations(const std::vector<RunResult>& runs);

} // namespace zenoplan
