#pragma once

#include <functional>
#include <string>
#include <vector>

#include "zenoplan/dae.hpp"
#include "zenoplan/metrics.hpp"

namespace zenoplan {

/// A discretized parameter: a name and its finite value list.
struct ParamDomain {
    std::string name;
    std::vector<Rat> values;
};

/// Configurations are value-index vectors over the domains; every emitted
/// configuration lies exactly on the grid by construction.
using ConfigChoice = std::vector<int>;

struct ParamSpace {
    std::vector<ParamDomain> domains;
    // invalid choices are skipped by the tuner (e.g. both strategy weights 0)
    std::function<bool(const ConfigChoice&)> valid;

    double size() const;
    bool is_valid(const ConfigChoice& c) const { return !valid || valid(c); }

    /// The published 12-parameter space (about 1.5e9 configurations).
    static ParamSpace table1();
    static DaEConfig table1_config(const ConfigChoice& c);
    static ConfigChoice table1_choice(const DaEConfig& cfg);
};

/// Quality of a configuration, lower is better for both kinds.
struct QualityMeasure {
    enum class Kind { Fitness, Hypervolume };
    Kind kind = Kind::Fitness;
    ParetoFront reference;     // Hypervolume only
    ReferencePoint ref_point;  // Hypervolume only

    static QualityMeasure fitness() { return {}; }
    static QualityMeasure hypervolume(ParetoFront ref) {
        QualityMeasure m;
        m.kind = Kind::Hypervolume;
        m.ref_point = ReferencePoint::for_front(ref);
        m.reference = std::move(ref);
        return m;
    }
};

/// Mean quality over n seeded target runs: best final aggregated fitness, or
/// the unary hypervolume of the final population against the reference
/// front. Deterministic given seed_root.
Rat evaluate_config(const PlanningTask& task, const DaEConfig& cfg, const Rat& alpha,
                    const RunBudget& budget, const QualityMeasure& measure, int n_runs,
                    std::uint64_t seed_root, SubplannerBudget sub_budget = {});

struct TuneLogEntry {
    int eval_index = 0;
    ConfigChoice config;
    Rat quality;
    Rat incumbent_quality;
};

struct TuneResult {
    ConfigChoice incumbent;
    Rat incumbent_quality;
    std::vector<TuneLogEntry> log;
};

struct TuneOptions {
    int budget = 60;          // configuration evaluations
    int random_starts = 10;   // r
    int perturb_steps = 3;    // s
    Rat p_restart{1, 100};
    std::uint64_t seed = 1;
};

/// BasicILS over the space: default + r random starts, iterated
/// first-improvement one-exchange local search, s-step perturbations,
/// random restarts with probability p_restart, evaluation cache, fixed
/// evaluation budget. The incumbent-quality sequence is nonincreasing.
TuneResult tune(const ParamSpace& space, const std::function<Rat(const ConfigChoice&)>& objective,
                const TuneOptions& options, const ConfigChoice& start);
TuneResult tune(const ParamSpace& space, const std::function<Rat(const ConfigChoice&)>& objective,
                const TuneOptions& options);

} // namespace zenoplan
