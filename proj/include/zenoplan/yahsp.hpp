#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "zenoplan/planning.hpp"

namespace zenoplan {

/// Greedy objective of the embedded planner: drive the search by earliest
/// achievement times measured either in duration or in landing cost. The
/// other quantity is always computed alongside on the returned plan.
enum class SearchStrategy { Makespan, Cost };

struct SubplannerBudget {
    int max_nodes = 100; // hard cap on node expansions per sub-problem
};

struct SolveStats {
    std::uint64_t expanded = 0;
    std::uint64_t generated = 0;
};

struct SolveOutcome {
    enum class Status { Solved, BudgetExhausted, ProvedUnreachable };
    Status status = Status::ProvedUnreachable;
    Plan plan;         // sequential start times; meaningful when Solved
    AtomSet end_state; // state after executing plan from `from`
    SolveStats stats;

    bool solved() const { return status == Status::Solved; }
};

/// Sub-optimal forward searcher: greedy best-first on h (sum of relaxed
/// achievement times of unsatisfied goal atoms), one lookahead successor per
/// expansion built by greedily applying the relaxed plan, deterministic
/// seeded tie-breaking. One instance per worker; instances share only the
/// immutable task.
class Subplanner {
public:
    explicit Subplanner(const PlanningTask& task);

    SolveOutcome solve(const AtomSet& from, const AtomSet& to, SearchStrategy strategy,
                       SubplannerBudget budget, std::uint64_t seed);

    /// Delete-relaxation plan extracted by backchaining over the earliest-time
    /// fixed point; empty when `to` already holds, nullopt when a goal atom is
    /// unreachable. Action ids ordered by relaxed firing time.
    std::optional<std::vector<int>> relaxed_plan(const AtomSet& from, const AtomSet& to,
                                                 SearchStrategy strategy = SearchStrategy::Makespan);

    /// Cumulative node expansions across all solve calls; feeds the
    /// deterministic virtual clock of the evolutionary loop.
    std::uint64_t work() const { return work_; }

private:
    double metric(int action, SearchStrategy strategy) const;
    void compute_reach(const AtomSet& from, SearchStrategy strategy);
    double goal_heuristic(const AtomSet& state, const AtomSet& goal);

    const PlanningTask& task_;
    std::vector<int> actions_by_name_; // lexicographic successor ordering
    std::vector<std::vector<int>> consumers_;
    std::vector<int> pre_count_;
    std::uint64_t work_ = 0;

    // reach scratch (reused across calls)
    std::vector<double> atom_time_;
    std::vector<int> supporter_;
    std::vector<double> action_fire_;
    std::vector<int> pending_;
    std::vector<std::pair<double, int>> heap_;
    std::vector<char> settled_;
};

} // namespace zenoplan
