#include "zenoplan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zenoplan {

ParetoFront nondominated(std::span<const ObjectivePoint> points) {
    std::vector<ObjectivePoint> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end(), lex_less);
    std::vector<ObjectivePoint> kept;
    for (const ObjectivePoint& p : sorted) {
        // ascending (makespan, cost): p survives iff it strictly improves
        // the best cost seen, which also collapses duplicates
        if (kept.empty() || p.cost < kept.back().cost) kept.push_back(p);
    }
    return ParetoFront(std::move(kept));
}

ReferencePoint ReferencePoint::for_front(const ParetoFront& front) {
    if (front.empty()) throw std::invalid_argument("ReferencePoint: empty front");
    Rat max_m = front.points().front().makespan;
    Rat max_c = front.points().front().cost;
    for (const auto& p : front.points()) {
        max_m = max(max_m, p.makespan);
        max_c = max(max_c, p.cost);
    }
    const Rat margin(21, 20);
    return {max_m * margin, max_c * margin};
}

Rat hypervolume_2d(const ParetoFront& front, const ReferencePoint& ref) {
    Rat volume(0);
    const auto& pts = front.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].makespan > ref.makespan_bound || pts[i].cost > ref.cost_bound)
            throw std::invalid_argument("hypervolume_2d: point outside the reference box");
        const Rat right = i + 1 < pts.size() ? pts[i + 1].makespan : ref.makespan_bound;
        volume += (right - pts[i].makespan) * (ref.cost_bound - pts[i].cost);
    }
    return volume;
}

Rat unary_hypervolume(std::span<const ObjectivePoint> a, const ParetoFront& r,
                      const ReferencePoint& ref) {
    std::vector<ObjectivePoint> boxed;
    for (const ObjectivePoint& p : a)
        if (p.makespan <= ref.makespan_bound && p.cost <= ref.cost_bound) boxed.push_back(p);
    Rat deficit = hypervolume_2d(r, ref) - hypervolume_2d(nondominated(boxed), ref);
    return deficit < Rat(0) ? Rat(0) : deficit;
}

HittingTable hitting_table(const std::vector<TracesOfRun>& runs, const ParetoFront& reference) {
    HittingTable table;
    table.points = reference.points();
    table.hits.resize(table.points.size());
    for (std::size_t pi = 0; pi < table.points.size(); ++pi) {
        const ObjectivePoint& target = table.points[pi];
        for (const TracesOfRun& run : runs) {
            HitEntry entry;
            entry.run_id = run.run_id;
            for (const RunTrace* trace : run.traces)
                for (const TraceSnapshot& snap : trace->snapshots) {
                    bool found = false;
                    for (const ObjectivePoint& p : snap.points)
                        if (p == target) { found = true; break; }
                    if (found && (!entry.first_hit || snap.t < *entry.first_hit))
                        entry.first_hit = snap.t;
                }
            table.hits[pi].push_back(entry);
        }
    }
    return table;
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace

WilcoxonResult wilcoxon_signed_rank_forced(std::span<const Rat> x, std::span<const Rat> y,
                                           double confidence, bool force_normal_approximation) {
    if (x.size() != y.size())
        throw std::invalid_argument("wilcoxon: samples must be paired (equal length)");

    std::vector<Rat> diffs;
    for (std::size_t i = 0; i < x.size(); ++i) {
        Rat d = x[i] - y[i];
        if (d != Rat(0)) diffs.push_back(d);
    }
    WilcoxonResult res;
    res.n_effective = static_cast<int>(diffs.size());
    if (diffs.empty()) return res; // p = 1, no rejection

    // average ranks of |d|, exact comparisons; doubled to stay integral
    const int n = res.n_effective;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return abs(diffs[i]) < abs(diffs[j]); });
    std::vector<int> rank2(n);
    std::vector<int> tie_sizes;
    for (int i = 0; i < n;) {
        int j = i;
        while (j < n && abs(diffs[order[j]]) == abs(diffs[order[i]])) ++j;
        int r2 = (i + 1) + j; // 2 * average of ranks i+1 .. j
        for (int t = i; t < j; ++t) rank2[order[t]] = r2;
        tie_sizes.push_back(j - i);
        i = j;
    }

    long w2_plus = 0, w2_total = 0;
    for (int i = 0; i < n; ++i) {
        w2_total += rank2[i];
        if (diffs[i] > Rat(0)) w2_plus += rank2[i];
    }
    long w2_minus = w2_total - w2_plus;
    res.w_plus = w2_plus / 2.0;
    res.w_minus = w2_minus / 2.0;
    long w2_min = std::min(w2_plus, w2_minus);
    res.statistic = w2_min / 2.0;

    if (n <= 20 && !force_normal_approximation) {
        // exact null: distribution of the doubled rank sum over 2^n signings
        res.exact = true;
        std::vector<double> count(static_cast<std::size_t>(w2_total) + 1, 0.0);
        count[0] = 1.0;
        for (int i = 0; i < n; ++i)
            for (long s = w2_total; s >= rank2[i]; --s)
                count[s] += count[s - rank2[i]];
        double below = 0.0;
        for (long s = 0; s <= w2_min; ++s) below += count[s];
        res.p_value = below / std::pow(2.0, n);
    } else {
        double mean = n * (n + 1) / 4.0;
        double var = n * (n + 1) * (2.0 * n + 1) / 24.0;
        for (int t : tie_sizes) var -= (static_cast<double>(t) * t * t - t) / 48.0;
        if (var <= 0) {
            res.p_value = 1.0;
            return res;
        }
        double z = (res.statistic + 0.5 - mean) / std::sqrt(var);
        res.p_value = normal_cdf(z);
    }
    res.p_value = std::min(1.0, res.p_value);
    res.reject = res.p_value <= 1.0 - confidence;
    return res;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const Rat> x, std::span<const Rat> y,
                                    double confidence) {
    return wilcoxon_signed_rank_forced(x, y, confidence, false);
}

} // namespace zenoplan
