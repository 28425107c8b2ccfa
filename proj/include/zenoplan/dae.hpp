#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "zenoplan/planning.hpp"
#include "zenoplan/rng.hpp"
#include "zenoplan/trace.hpp"
#include "zenoplan/yahsp.hpp"

namespace zenoplan {

/// Infeasible individuals score PENALTY_BASE + number of unsolved
/// sub-problems, far above any reachable aggregated fitness on this family,
/// so feasible individuals always rank first.
inline const Rat kPenaltyBase(1000000);

/// Deterministic virtual clock: one work unit = one node expansion of the
/// embedded planner; t_virtual = work / kWorkUnitsPerSecond. Budgets, trace
/// timestamps and hitting times all use this clock, which is what makes
/// campaign reruns byte-identical. The rate is calibrated so a virtual
/// second is roughly a real second of single-threaded search on commodity
/// hardware.
inline constexpr std::int64_t kWorkUnitsPerSecond = 40000;

/// Table-1 parameter vector. Values must lie on the published grids (see
/// check()); W-makespan + W-cost must be positive.
struct DaEConfig {
    int w_makespan = 3;
    int w_cost = 3;
    int pop_size = 30;
    Rat proba_cross{4, 5};  // population-level crossover probability
    Rat proba_mut{4, 5};    // population-level mutation probability
    int w_add_atom = 1;
    int w_add_goal = 1;
    int w_del_atom = 1;
    int w_del_goal = 1;
    Rat proba_change{1, 5};   // per-atom swap probability inside addAtom
    Rat proba_delatom{1, 2};  // per-atom removal probability inside delAtom
    int radius = 3;           // addGoal neighborhood radius

    void check() const; // throws std::invalid_argument off the grid

    bool operator==(const DaEConfig&) const = default;
};

/// Per-atom earliest-time keys and mutex data shared by all genome
/// operations on one task.
struct TaskContext {
    const PlanningTask& task;
    std::vector<std::optional<Rat>> earliest;
    std::vector<AtomId> reachable; // finite earliest time, ascending id

    explicit TaskContext(const PlanningTask& t);
    const Rat& key(AtomId a) const { return *earliest[a]; }
};

/// A partial state: some atoms constraining an intermediate goal, with the
/// station key = minimum earliest-time over its atoms.
struct PartialState {
    std::vector<AtomId> atoms;
    Rat key;
};

/// Variable-length, time-consistent sequence of mutex-free partial states.
struct Genome {
    std::vector<PartialState> stations;
};

bool genome_valid(const TaskContext& ctx, const Genome& g);

/// Random genome: 1..max_stations stations (0 allowed when max_stations is
/// 0), each a random mutex-free atom set keyed by earliest times, stations
/// sorted by key.
Genome init_genome(const TaskContext& ctx, Rng& rng, int max_stations);

/// One-point crossover for variable length: prefix of `a`, suffix of `b`,
/// cut points independent; retried (bounded) until the seam keeps keys
/// nondecreasing, else a copy of `a`.
Genome crossover(const Genome& a, const Genome& b, Rng& rng);

/// One of addAtom/addGoal/delAtom/delGoal drawn by the w-* weights.
Genome mutate(const TaskContext& ctx, const Genome& g, const DaEConfig& cfg, Rng& rng);

struct EvaluatedIndividual {
    Genome genome;
    bool feasible = false;
    Rat makespan;
    Rat cost;
    Rat fitness;
    int unsolved = 0; // sub-problems left unsolved (failure included)
};

/// Optional objective normalization divisors for the aggregated fitness
/// (off by default: the published scheme aggregates raw objectives).
struct ObjectiveScale {
    Rat makespan_div{1};
    Rat cost_div{1};
};

struct StrategyCounters {
    std::uint64_t makespan_draws = 0;
    std::uint64_t cost_draws = 0;
};

/// Solves the station chain with the embedded planner (one strategy draw by
/// W-makespan/W-cost per individual, applied to every sub-problem),
/// compresses and validates the concatenation, and aggregates
/// F = alpha * makespan + (1 - alpha) * cost. Deterministic given the seed.
EvaluatedIndividual evaluate(const TaskContext& ctx, Subplanner& planner, const Genome& genome,
                             const DaEConfig& cfg, const Rat& alpha, SubplannerBudget sub_budget,
                             std::uint64_t seed, StrategyCounters* counters = nullptr,
                             const ObjectiveScale& scale = {});

struct RunBudget {
    std::optional<std::uint64_t> max_evals;    // offspring evaluations
    std::optional<Rat> max_virtual_seconds;    // deterministic clock budget

    static RunBudget evals(std::uint64_t n) { return {n, std::nullopt}; }
    static RunBudget virtual_seconds(Rat t) { return {std::nullopt, std::move(t)}; }
};

struct RunResult {
    std::vector<EvaluatedIndividual> population; // final generation, best first
    EvaluatedIndividual best;
    RunTrace trace;
    StrategyCounters strategies;
    std::uint64_t evals = 0;
    Rat virtual_seconds{0};
};

/// Generational loop: size-2 tournaments, independent crossover/mutation
/// gates per offspring, elitist (mu + lambda) replacement. One trace
/// snapshot per generation (and one for the initial population).
RunResult run_dae(const PlanningTask& task, const DaEConfig& cfg, const Rat& alpha,
                  const RunBudget& budget, std::uint64_t seed,
                  SubplannerBudget sub_budget = {}, const ObjectiveScale& scale = {});

} // namespace zenoplan
