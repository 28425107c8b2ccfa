#include "zenoplan/paramils.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace zenoplan {

double ParamSpace::size() const {
    double n = 1.0;
    for (const ParamDomain& d : domains) n *= static_cast<double>(d.values.size());
    return n;
}

namespace {

std::vector<Rat> rats(std::initializer_list<const char*> texts) {
    std::vector<Rat> out;
    for (const char* t : texts) out.push_back(Rat::parse(t));
    return out;
}

const std::vector<Rat> kProba = rats({"0.0", "0.1", "0.2", "0.5", "0.8", "1.0"});
const std::vector<Rat> kWeights = rats({"0", "1", "3", "5", "7", "10"});
const std::vector<Rat> kStrategyWeights = rats({"0", "1", "2", "3", "4", "5"});

int index_of(const std::vector<Rat>& values, const Rat& v, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == v) return static_cast<int>(i);
    throw std::invalid_argument(std::string("ParamSpace: ") + what + " not on the grid");
}

} // namespace

ParamSpace ParamSpace::table1() {
    ParamSpace space;
    space.domains = {
        {"W-makespan", kStrategyWeights},
        {"W-cost", kStrategyWeights},
        {"Pop-size", rats({"30", "50", "100", "200", "300"})},
        {"Proba-cross", kProba},
        {"Proba-mut", kProba},
        {"w-addAtom", kWeights},
        {"w-addGoal", kWeights},
        {"w-delAtom", kWeights},
        {"w-delGoal", kWeights},
        {"Proba-change", kProba},
        {"Proba-delatom", kProba},
        {"Radius", rats({"1", "3", "5", "7", "10"})},
    };
    space.valid = [](const ConfigChoice& c) {
        if (c[0] + c[1] == 0) return false;                     // W-makespan + W-cost > 0
        return c[5] + c[6] + c[7] + c[8] > 0;                   // some mutation enabled
    };
    return space;
}

DaEConfig ParamSpace::table1_config(const ConfigChoice& c) {
    const ParamSpace space = table1();
    if (c.size() != space.domains.size())
        throw std::invalid_argument("table1_config: wrong arity");
    auto value = [&](int i) { return space.domains[i].values[c[i]]; };
    DaEConfig cfg;
    cfg.w_makespan = static_cast<int>(value(0).num());
    cfg.w_cost = static_cast<int>(value(1).num());
    cfg.pop_size = static_cast<int>(value(2).num());
    cfg.proba_cross = value(3);
    cfg.proba_mut = value(4);
    cfg.w_add_atom = static_cast<int>(value(5).num());
    cfg.w_add_goal = static_cast<int>(value(6).num());
    cfg.w_del_atom = static_cast<int>(value(7).num());
    cfg.w_del_goal = static_cast<int>(value(8).num());
    cfg.proba_change = value(9);
    cfg.proba_delatom = value(10);
    cfg.radius = static_cast<int>(value(11).num());
    return cfg;
}

ConfigChoice ParamSpace::table1_choice(const DaEConfig& cfg) {
    const ParamSpace space = table1();
    ConfigChoice c(space.domains.size());
    c[0] = index_of(space.domains[0].values, Rat(cfg.w_makespan), "W-makespan");
    c[1] = index_of(space.domains[1].values, Rat(cfg.w_cost), "W-cost");
    c[2] = index_of(space.domains[2].values, Rat(cfg.pop_size), "Pop-size");
    c[3] = index_of(space.domains[3].values, cfg.proba_cross, "Proba-cross");
    c[4] = index_of(space.domains[4].values, cfg.proba_mut, "Proba-mut");
    c[5] = index_of(space.domains[5].values, Rat(cfg.w_add_atom), "w-addAtom");
    c[6] = index_of(space.domains[6].values, Rat(cfg.w_add_goal), "w-addGoal");
    c[7] = index_of(space.domains[7].values, Rat(cfg.w_del_atom), "w-delAtom");
    c[8] = index_of(space.domains[8].values, Rat(cfg.w_del_goal), "w-delGoal");
    c[9] = index_of(space.domains[9].values, cfg.proba_change, "Proba-change");
    c[10] = index_of(space.domains[10].values, cfg.proba_delatom, "Proba-delatom");
    c[11] = index_of(space.domains[11].values, Rat(cfg.radius), "Radius");
    return c;
}

Rat evaluate_config(const PlanningTask& task, const DaEConfig& cfg, const Rat& alpha,
                    const RunBudget& budget, const QualityMeasure& measure, int n_runs,
                    std::uint64_t seed_root, SubplannerBudget sub_budget) {
    if (n_runs < 1) throw std::invalid_argument("evaluate_config: n_runs must be >= 1");
    Rat total(0);
    for (int r = 0; r < n_runs; ++r) {
        RunResult run = run_dae(task, cfg, alpha, budget,
                                mix_seed(seed_root, {kSeedRun, static_cast<std::uint64_t>(r)}),
                                sub_budget);
        if (measure.kind == QualityMeasure::Kind::Fitness) {
            total += run.best.fitness;
        } else {
            std::vector<ObjectivePoint> pts;
            for (const EvaluatedIndividual& ind : run.population)
                if (ind.feasible) pts.push_back({ind.makespan, ind.cost});
            total += unary_hypervolume(pts, measure.reference, measure.ref_point);
        }
    }
    return total / Rat(n_runs);
}

namespace {

/// Budgeted, cached evaluation bookkeeping shared by the ILS phases.
struct Evaluator {
    const std::function<Rat(const ConfigChoice&)>& objective;
    int budget_left;
    std::map<ConfigChoice, Rat> cache;
    TuneResult result;

    struct OutOfBudget {};

    Rat eval(const ConfigChoice& c) {
        auto it = cache.find(c);
        if (it != cache.end()) return it->second;
        if (budget_left == 0) throw OutOfBudget{};
        --budget_left;
        Rat q = objective(c);
        cache.emplace(c, q);
        if (result.log.empty() || q < result.incumbent_quality) {
            result.incumbent = c;
            result.incumbent_quality = q;
        }
        result.log.push_back({static_cast<int>(result.log.size()), c, q, result.incumbent_quality});
        return q;
    }
};

ConfigChoice random_choice(const ParamSpace& space, Rng& rng) {
    for (int tries = 0; tries < 1000; ++tries) {
        ConfigChoice c(space.domains.size());
        for (std::size_t i = 0; i < space.domains.size(); ++i)
            c[i] = static_cast<int>(rng.below(space.domains[i].values.size()));
        if (space.is_valid(c)) return c;
    }
    throw std::runtime_error("tune: could not sample a valid configuration");
}

ConfigChoice random_one_exchange(const ParamSpace& space, const ConfigChoice& c, Rng& rng) {
    for (int tries = 0; tries < 1000; ++tries) {
        ConfigChoice next = c;
        std::size_t p = rng.below(space.domains.size());
        int alt = static_cast<int>(rng.below(space.domains[p].values.size() - 1));
        if (alt >= c[p]) ++alt;
        next[p] = alt;
        if (space.is_valid(next)) return next;
    }
    return c;
}

// first-improvement descent over the one-exchange neighborhood, neighborhood
// order reshuffled after every accepted move
ConfigChoice local_search(const ParamSpace& space, Evaluator& ev, ConfigChoice current, Rng& rng) {
    Rat current_q = ev.eval(current);
    bool improved = true;
    while (improved) {
        improved = false;
        std::vector<std::pair<int, int>> moves;
        for (std::size_t p = 0; p < space.domains.size(); ++p)
            for (int v = 0; v < static_cast<int>(space.domains[p].values.size()); ++v)
                if (v != current[p]) moves.push_back({static_cast<int>(p), v});
        rng.shuffle(moves);
        for (auto [p, v] : moves) {
            ConfigChoice neighbor = current;
            neighbor[p] = v;
            if (!space.is_valid(neighbor)) continue;
            Rat q = ev.eval(neighbor);
            if (q < current_q) {
                current = std::move(neighbor);
                current_q = q;
                improved = true;
                break;
            }
        }
    }
    return current;
}

} // namespace

TuneResult tune(const ParamSpace& space, const std::function<Rat(const ConfigChoice&)>& objective,
                const TuneOptions& options, const ConfigChoice& start) {
    if (options.budget < 1) throw std::invalid_argument("tune: budget must be >= 1");
    if (!space.is_valid(start)) throw std::invalid_argument("tune: invalid start configuration");

    Rng rng(mix_seed(options.seed, {kSeedTune}));
    Evaluator ev{objective, options.budget, {}, {}};

    try {
        ConfigChoice ils = start;
        Rat ils_q = ev.eval(ils);
        for (int r = 0; r < options.random_starts; ++r) {
            ConfigChoice c = random_choice(space, rng);
            Rat q = ev.eval(c);
            if (q < ils_q) {
                ils = std::move(c);
                ils_q = q;
            }
        }
        ils = local_search(space, ev, ils, rng);
        ils_q = ev.eval(ils);

        while (static_cast<double>(ev.cache.size()) < space.size()) {
            ConfigChoice probe = ils;
            for (int s = 0; s < options.perturb_steps; ++s)
                probe = random_one_exchange(space, probe, rng);
            probe = local_search(space, ev, probe, rng);
            if (ev.eval(probe) <= ils_q) {
                ils = probe;
                ils_q = ev.eval(probe);
            }
            if (rng.bernoulli(options.p_restart)) {
                ils = random_choice(space, rng);
                ils_q = ev.eval(ils);
            }
        }
    } catch (const Evaluator::OutOfBudget&) {
        // budget spent; the incumbent and log are complete
    }
    return std::move(ev.result);
}

TuneResult tune(const ParamSpace& space, const std::function<Rat(const ConfigChoice&)>& objective,
                const TuneOptions& options) {
    ConfigChoice start(space.domains.size(), 0);
    if (!space.is_valid(start)) {
        Rng rng(mix_seed(options.seed, {kSeedTune, 7}));
        start = random_choice(space, rng);
    }
    return tune(space, objective, options, start);
}

} // namespace zenoplan
