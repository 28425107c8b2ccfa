#pragma once

#include <optional>
#include <span>
#include <vector>

#include "zenoplan/objectives.hpp"
#include "zenoplan/trace.hpp"

namespace zenoplan {

/// Maximal mutually nondominated subset (minimization on both axes);
/// duplicates collapse.
ParetoFront nondominated(std::span<const ObjectivePoint> points);

/// Upper corner of the hypervolume box; must be strictly worse than every
/// reference-front point on both axes.
struct ReferencePoint {
    Rat makespan_bound;
    Rat cost_bound;

    /// Default corner: 1.05 x the reference front's extremes, keeping the
    /// extreme points contributing.
    static ReferencePoint for_front(const ParetoFront& front);
};

/// Exact 2-D hypervolume by ascending-makespan sweep. Throws
/// std::invalid_argument if a front point falls outside the reference box.
Rat hypervolume_2d(const ParetoFront& front, const ReferencePoint& ref);

/// Unary hypervolume indicator I_H^-: the hypervolume deficit of point set
/// `a` with respect to reference front `r`. Points outside the box are
/// clipped (contribute nothing); 0 means the front is fully attained.
Rat unary_hypervolume(std::span<const ObjectivePoint> a, const ParetoFront& r,
                      const ReferencePoint& ref);

/// First time each reference point shows up, exactly, in any snapshot of a
/// run's traces (a "run" may span several traces, e.g. all alpha-runs of one
/// aggregated repetition). nullopt = never hit.
struct TracesOfRun {
    int run_id = 0;
    std::vector<const RunTrace*> traces;
};
struct HitEntry {
    int run_id = 0;
    std::optional<Rat> first_hit;
};
struct HittingTable {
    // hits[i] lists one entry per run for reference point i (front order)
    std::vector<ObjectivePoint> points;
    std::vector<std::vector<HitEntry>> hits;
};
HittingTable hitting_table(const std::vector<TracesOfRun>& runs, const ParetoFront& reference);

/// Paired Wilcoxon signed-rank test. Zero differences are dropped, ties get
/// average ranks. Exact null distribution by enumeration for n <= 20 (or
/// when forced), normal approximation with tie correction above. The
/// reported p-value is one-sided for the observed direction
/// (statistic = min(W+, W-)); reject at p <= 1 - confidence.
struct WilcoxonResult {
    double w_plus = 0;
    double w_minus = 0;
    double statistic = 0;
    double p_value = 1.0;
    bool reject = false;
    bool exact = false;
    int n_effective = 0;
};
WilcoxonResult wilcoxon_signed_rank(std::span<const Rat> x, std::span<const Rat> y,
                                    double confidence = 0.95);
WilcoxonResult wilcoxon_signed_rank_forced(std::span<const Rat> x, std::span<const Rat> y,
                                           double confidence, bool force_normal_approximation);

} // namespace zenoplan
