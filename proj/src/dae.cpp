#include "zenoplan/dae.hpp"

#include <algorithm>
#include <stdexcept>

namespace zenoplan {

namespace {

template <class T>
bool on_grid(const T& value, std::initializer_list<T> grid) {
    for (const T& g : grid)
        if (value == g) return true;
    return false;
}

const std::initializer_list<Rat> kProbaGrid = {Rat(0),      Rat(1, 10), Rat(1, 5),
                                               Rat(1, 2),   Rat(4, 5),  Rat(1)};
const std::initializer_list<int> kWeightGrid = {0, 1, 3, 5, 7, 10};

} // namespace

void DaEConfig::check() const {
    auto fail = [](const std::string& what) {
        throw std::invalid_argument("DaEConfig: " + what + " off the parameter grid");
    };
    if (w_makespan < 0 || w_makespan > 5) fail("W-makespan");
    if (w_cost < 0 || w_cost > 5) fail("W-cost");
    if (w_makespan + w_cost == 0)
        throw std::invalid_argument("DaEConfig: W-makespan + W-cost must be positive");
    if (!on_grid(pop_size, {30, 50, 100, 200, 300})) fail("Pop-size");
    if (!on_grid(proba_cross, kProbaGrid)) fail("Proba-cross");
    if (!on_grid(proba_mut, kProbaGrid)) fail("Proba-mut");
    if (!on_grid(w_add_atom, kWeightGrid)) fail("w-addAtom");
    if (!on_grid(w_add_goal, kWeightGrid)) fail("w-addGoal");
    if (!on_grid(w_del_atom, kWeightGrid)) fail("w-delAtom");
    if (!on_grid(w_del_goal, kWeightGrid)) fail("w-delGoal");
    if (w_add_atom + w_add_goal + w_del_atom + w_del_goal == 0)
        throw std::invalid_argument("DaEConfig: all mutation weights are zero");
    if (!on_grid(proba_change, kProbaGrid)) fail("Proba-change");
    if (!on_grid(proba_delatom, kProbaGrid)) fail("Proba-delatom");
    if (!on_grid(radius, {1, 3, 5, 7, 10})) fail("Radius");
}

TaskContext::TaskContext(const PlanningTask& t) : task(t), earliest(earliest_times(t)) {
    for (AtomId a = 0; a < t.universe_size(); ++a)
        if (earliest[a]) reachable.push_back(a);
}

bool genome_valid(const TaskContext& ctx, const Genome& g) {
    for (std::size_t i = 0; i < g.stations.size(); ++i) {
        const PartialState& st = g.stations[i];
        if (st.atoms.empty()) return false;
        Rat key = ctx.key(st.atoms[0]);
        for (std::size_t x = 0; x < st.atoms.size(); ++x) {
            if (!ctx.earliest[st.atoms[x]]) return false;
            key = min(key, ctx.key(st.atoms[x]));
            for (std::size_t y = x + 1; y < st.atoms.size(); ++y)
                if (mutex(ctx.task, st.atoms[x], st.atoms[y])) return false;
        }
        if (key != st.key) return false;
        if (i > 0 && st.key < g.stations[i - 1].key) return false;
    }
    return true;
}

namespace {

Rat station_key(const TaskContext& ctx, const std::vector<AtomId>& atoms) {
    Rat key = ctx.key(atoms[0]);
    for (AtomId a : atoms) key = min(key, ctx.key(a));
    return key;
}

bool compatible(const TaskContext& ctx, const std::vector<AtomId>& atoms, AtomId candidate) {
    for (AtomId a : atoms) {
        if (a == candidate) return false;
        if (ctx.task.mutex_with[candidate].test(a)) return false;
    }
    return true;
}

void sort_stations(Genome& g) {
    std::stable_sort(g.stations.begin(), g.stations.end(),
                     [](const PartialState& a, const PartialState& b) { return a.key < b.key; });
}

// Random mutex-free station from `candidates` (atom ids with finite keys).
// Every draw is by rejection against the already chosen atoms.
PartialState random_station(const TaskContext& ctx, Rng& rng,
                            const std::vector<AtomId>& candidates, int max_atoms) {
    PartialState st;
    int want = static_cast<int>(rng.range(1, max_atoms));
    int tries = 8 * want;
    while (static_cast<int>(st.atoms.size()) < want && tries-- > 0) {
        AtomId cand = candidates[rng.below(candidates.size())];
        if (st.atoms.empty() || compatible(ctx, st.atoms, cand)) st.atoms.push_back(cand);
    }
    if (st.atoms.empty()) st.atoms.push_back(candidates[rng.below(candidates.size())]);
    st.key = station_key(ctx, st.atoms);
    return st;
}

constexpr int kMaxAtomsPerStation = 3;
constexpr int kCrossoverRetries = 10;

} // namespace

Genome init_genome(const TaskContext& ctx, Rng& rng, int max_stations) {
    Genome g;
    if (max_stations <= 0) return g;
    int count = static_cast<int>(rng.range(1, max_stations));
    for (int i = 0; i < count; ++i)
        g.stations.push_back(random_station(ctx, rng, ctx.reachable, kMaxAtomsPerStation));
    sort_stations(g);
    return g;
}

Genome crossover(const Genome& a, const Genome& b, Rng& rng) {
    for (int attempt = 0; attempt < kCrossoverRetries; ++attempt) {
        std::size_t cut_a = rng.below(a.stations.size() + 1);
        std::size_t cut_b = rng.below(b.stations.size() + 1);
        // seam must keep station keys nondecreasing
        if (cut_a > 0 && cut_b < b.stations.size() &&
            b.stations[cut_b].key < a.stations[cut_a - 1].key)
            continue;
        Genome child;
        child.stations.assign(a.stations.begin(), a.stations.begin() + cut_a);
        child.stations.insert(child.stations.end(), b.stations.begin() + cut_b, b.stations.end());
        return child;
    }
    return a;
}

namespace {

void mutate_add_atom(const TaskContext& ctx, Genome& g, const DaEConfig& cfg, Rng& rng) {
    if (g.stations.empty()) return;
    PartialState& st = g.stations[rng.below(g.stations.size())];
    // swap existing atoms first, then grow by one compatible atom
    for (std::size_t i = 0; i < st.atoms.size(); ++i) {
        if (!rng.bernoulli(cfg.proba_change)) continue;
        for (int tries = 0; tries < 8; ++tries) {
            AtomId cand = ctx.reachable[rng.below(ctx.reachable.size())];
            std::vector<AtomId> others = st.atoms;
            others.erase(others.begin() + i);
            if ((others.empty() || compatible(ctx, others, cand)) && cand != st.atoms[i]) {
                st.atoms[i] = cand;
                break;
            }
        }
    }
    for (int tries = 0; tries < 8; ++tries) {
        AtomId cand = ctx.reachable[rng.below(ctx.reachable.size())];
        if (compatible(ctx, st.atoms, cand)) {
            st.atoms.push_back(cand);
            break;
        }
    }
    st.key = station_key(ctx, st.atoms);
    sort_stations(g);
}

void mutate_add_goal(const TaskContext& ctx, Genome& g, const DaEConfig& cfg, Rng& rng) {
    // a new station keyed near a chosen position: candidate atoms are drawn
    // from the key window spanned by the Radius nearest stations
    std::vector<AtomId> window = ctx.reachable;
    if (!g.stations.empty()) {
        int pos = static_cast<int>(rng.below(g.stations.size()));
        int lo = std::max(0, pos - cfg.radius);
        int hi = std::min(static_cast<int>(g.stations.size()) - 1, pos + cfg.radius);
        const Rat key_lo = g.stations[lo].key;
        const Rat key_hi = g.stations[hi].key;
        std::vector<AtomId> in_window;
        for (AtomId a : ctx.reachable)
            if (key_lo <= ctx.key(a) && ctx.key(a) <= key_hi) in_window.push_back(a);
        if (!in_window.empty()) window = std::move(in_window);
    }
    g.stations.push_back(random_station(ctx, rng, window, kMaxAtomsPerStation));
    sort_stations(g);
}

void mutate_del_atom(const TaskContext& ctx, Genome& g, const DaEConfig& cfg, Rng& rng) {
    if (g.stations.empty()) return;
    std::size_t si = rng.below(g.stations.size());
    PartialState& st = g.stations[si];
    std::vector<AtomId> kept;
    for (AtomId a : st.atoms)
        if (!rng.bernoulli(cfg.proba_delatom)) kept.push_back(a);
    if (kept.size() == st.atoms.size())
        kept.erase(kept.begin() + rng.below(kept.size())); // at least one removal
    if (kept.empty()) {
        g.stations.erase(g.stations.begin() + si);
        return;
    }
    st.atoms = std::move(kept);
    st.key = station_key(ctx, st.atoms);
    sort_stations(g);
}

void mutate_del_goal(Genome& g, Rng& rng) {
    if (g.stations.empty()) return;
    g.stations.erase(g.stations.begin() + rng.below(g.stations.size()));
}

} // namespace

Genome mutate(const TaskContext& ctx, const Genome& g, const DaEConfig& cfg, Rng& rng) {
    Genome out = g;
    const int weights[4] = {cfg.w_add_atom, cfg.w_add_goal, cfg.w_del_atom, cfg.w_del_goal};
    switch (rng.weighted_pick(std::span<const int>(weights, 4))) {
    case 0: mutate_add_atom(ctx, out, cfg, rng); break;
    case 1: mutate_add_goal(ctx, out, cfg, rng); break;
    case 2: mutate_del_atom(ctx, out, cfg, rng); break;
    case 3: mutate_del_goal(out, rng); break;
    }
    return out;
}

EvaluatedIndividual evaluate(const TaskContext& ctx, Subplanner& planner, const Genome& genome,
                             const DaEConfig& cfg, const Rat& alpha, SubplannerBudget sub_budget,
                             std::uint64_t seed, StrategyCounters* counters,
                             const ObjectiveScale& scale) {
    EvaluatedIndividual ind;
    ind.genome = genome;

    Rng rng(mix_seed(seed, {kSeedEvaluation}));
    const Rat p_makespan(cfg.w_makespan, cfg.w_makespan + cfg.w_cost);
    const SearchStrategy strategy =
        rng.bernoulli(p_makespan) ? SearchStrategy::Makespan : SearchStrategy::Cost;
    if (counters) {
        if (strategy == SearchStrategy::Makespan) ++counters->makespan_draws;
        else ++counters->cost_draws;
    }

    const int subproblems = static_cast<int>(genome.stations.size()) + 1;
    AtomSet current = ctx.task.initial;
    std::vector<Plan> pieces;
    for (int k = 0; k < subproblems; ++k) {
        AtomSet to(ctx.task.universe_size());
        if (k < static_cast<int>(genome.stations.size())) {
            for (AtomId a : genome.stations[k].atoms) to.set(a);
        } else {
            to = ctx.task.goal;
        }
        SolveOutcome sub = planner.solve(current, to, strategy, sub_budget,
                                         mix_seed(seed, {kSeedEvaluation, static_cast<std::uint64_t>(k)}));
        if (!sub.solved()) {
            ind.feasible = false;
            ind.unsolved = subproblems - k;
            ind.fitness = kPenaltyBase + Rat(ind.unsolved);
            return ind;
        }
        pieces.push_back(std::move(sub.plan));
        current = std::move(sub.end_state);
    }

    Plan whole = compress(ctx.task, pieces);
    ValidationResult check = validate_plan(ctx.task, whole);
    if (!check.valid)
        throw std::logic_error("evaluate: compressed plan failed validation: " + check.violation);
    ind.feasible = true;
    ind.makespan = check.makespan;
    ind.cost = check.cost;
    ind.fitness = alpha * (ind.makespan / scale.makespan_div) +
                  (Rat(1) - alpha) * (ind.cost / scale.cost_div);
    return ind;
}

namespace {

void sort_population(std::vector<EvaluatedIndividual>& pop) {
    std::stable_sort(pop.begin(), pop.end(),
                     [](const EvaluatedIndividual& a, const EvaluatedIndividual& b) {
                         return a.fitness < b.fitness;
                     });
}

const EvaluatedIndividual& tournament2(const std::vector<EvaluatedIndividual>& pop, Rng& rng) {
    std::size_t i = rng.below(pop.size());
    std::size_t j = rng.below(pop.size());
    if (pop[j].fitness < pop[i].fitness) return pop[j];
    return pop[i];
}

TraceSnapshot snapshot(const std::vector<EvaluatedIndividual>& pop, std::uint64_t evals,
                       const Rat& t) {
    TraceSnapshot s;
    s.t = t;
    s.evals = evals;
    s.best_fitness = pop.front().fitness;
    for (const EvaluatedIndividual& ind : pop)
        if (ind.feasible) s.points.push_back({ind.makespan, ind.cost});
    return s;
}

} // namespace

RunResult run_dae(const PlanningTask& task, const DaEConfig& cfg, const Rat& alpha,
                  const RunBudget& budget, std::uint64_t seed, SubplannerBudget sub_budget,
                  const ObjectiveScale& scale) {
    cfg.check();
    if (alpha < Rat(0) || alpha > Rat(1))
        throw std::invalid_argument("run_dae: alpha must lie in [0, 1]");

    TaskContext ctx(task);
    Subplanner planner(task);
    RunResult result;

    Rng init_rng(mix_seed(seed, {kSeedInit}));
    Rng var_rng(mix_seed(seed, {kSeedVariation}));
    const int max_stations = task.goal.count() + 2;

    std::uint64_t eval_counter = 0;
    auto eval_genome = [&](const Genome& g) {
        return evaluate(ctx, planner, g, cfg, alpha, sub_budget,
                        mix_seed(seed, {kSeedEvaluation, eval_counter++}), &result.strategies,
                        scale);
    };
    auto vclock = [&] { return Rat(static_cast<std::int64_t>(planner.work()), kWorkUnitsPerSecond); };

    std::vector<EvaluatedIndividual> pop;
    pop.reserve(cfg.pop_size);
    for (int i = 0; i < cfg.pop_size; ++i)
        pop.push_back(eval_genome(init_genome(ctx, init_rng, max_stations)));
    sort_population(pop);
    result.trace.snapshots.push_back(snapshot(pop, eval_counter, vclock()));

    std::uint64_t offspring_evals = 0;
    while (true) {
        if (budget.max_evals && offspring_evals + cfg.pop_size > *budget.max_evals) break;
        if (budget.max_virtual_seconds && !(vclock() < *budget.max_virtual_seconds)) break;

        std::vector<EvaluatedIndividual> offspring;
        offspring.reserve(cfg.pop_size);
        for (int i = 0; i < cfg.pop_size; ++i) {
            Genome child = tournament2(pop, var_rng).genome;
            if (var_rng.bernoulli(cfg.proba_cross))
                child = crossover(child, tournament2(pop, var_rng).genome, var_rng);
            if (var_rng.bernoulli(cfg.proba_mut)) child = mutate(ctx, child, cfg, var_rng);
            offspring.push_back(eval_genome(child));
            ++offspring_evals;
        }
        // elitist (mu + lambda): parents first, stable sort keeps them on ties
        pop.insert(pop.end(), std::make_move_iterator(offspring.begin()),
                   std::make_move_iterator(offspring.end()));
        sort_population(pop);
        pop.resize(cfg.pop_size);
        result.trace.snapshots.push_back(snapshot(pop, eval_counter, vclock()));
    }

    result.best = pop.front();
    result.population = std::move(pop);
    result.evals = eval_counter;
    result.virtual_seconds = vclock();
    return result;
}

} // namespace zenoplan
