#include "zenoplan/aggregation.hpp"

#include <stdexcept>

#include "zenoplan/metrics.hpp"

namespace zenoplan {

void AlphaSchedule::check() const {
    if (alphas.empty()) throw std::invalid_argument("AlphaSchedule: empty");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i] < Rat(0) || alphas[i] > Rat(1))
            throw std::invalid_argument("AlphaSchedule: alpha outside [0, 1]");
        if (i > 0 && !(alphas[i - 1] < alphas[i]))
            throw std::invalid_argument("AlphaSchedule: alphas must be strictly increasing");
    }
}

Rat scalar_fitness(const Rat& alpha, const ObjectivePoint& p) {
    if (alpha < Rat(0) || alpha > Rat(1))
        throw std::invalid_argument("scalar_fitness: alpha outside [0, 1]");
    return alpha * p.makespan + (Rat(1) - alpha) * p.cost;
}

ParetoFront merge_final_populations(const std::vector<RunResult>& runs) {
    std::vector<ObjectivePoint> pool;
    for (const RunResult& run : runs) {
        for (const EvaluatedIndividual& ind : run.population)
            if (ind.feasible) pool.push_back({ind.makespan, ind.cost});
        if (run.best.feasible) pool.push_back({run.best.makespan, run.best.cost});
    }
    return nondominated(pool);
}

AggregatedOutcome run_aggregated(const PlanningTask& task, const std::vector<DaEConfig>& configs,
                                 const AlphaSchedule& schedule, const RunBudget& budget,
                                 const std::vector<std::uint64_t>& seeds,
                                 SubplannerBudget sub_budget, const ObjectiveScale& scale) {
    schedule.check();
    if (configs.size() != schedule.alphas.size() || seeds.size() != schedule.alphas.size())
        throw std::invalid_argument("run_aggregated: one config and one seed per alpha");

    AggregatedOutcome out;
    for (std::size_t i = 0; i < schedule.alphas.size(); ++i)
        out.runs.push_back(
            run_dae(task, configs[i], schedule.alphas[i], budget, seeds[i], sub_budget, scale));
    out.merged = merge_final_populations(out.runs);
    return out;
}

} // namespace zenoplan
