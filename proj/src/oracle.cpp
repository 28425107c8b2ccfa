#include "zenoplan/oracle.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace zenoplan {

namespace {

/// Running nondominated set of achieved objective points. dominated_or_equal
/// is the pruning test: a partial schedule whose lower bounds are dominated
/// by (or equal to) an achieved point cannot contribute a new front point.
struct FrontCollector {
    std::vector<ObjectivePoint> points;

    bool dominated_or_equal(const Rat& m, const Rat& c) const {
        for (const auto& p : points)
            if (p.makespan <= m && p.cost <= c) return true;
        return false;
    }
    void add(const ObjectivePoint& q) {
        for (const auto& p : points)
            if (p.dominates(q)) return;
        std::erase_if(points, [&](const ObjectivePoint& p) { return q.dominates(p); });
        points.push_back(q);
    }
};

// Leg-level exhaustive scheduler for one routing pattern. Nodes are states
// between legs: plane positions and free times, per-city up/down counts, and
// the sorted arrival times of passengers waiting at central cities. Every
// leg departs as early as its plane and (for deliveries) a passenger allow;
// all interleavings are explored, so waiting for a future arrival is covered
// by the branch that schedules the feeding leg first. Duplicate and hopeless
// states are cut by a per-(positions, counts) dominance memo and by cost and
// makespan lower bounds against the points achieved so far.
class PatternSearch {
public:
    PatternSearch(const std::vector<Rat>& dur, const std::vector<Rat>& tax,
                  const std::vector<int>& need, FrontCollector& front,
                  std::uint64_t& nodes_left, bool end_at_far)
        : k_(static_cast<int>(dur.size())), dur_(dur), tax_(tax), need_(need), front_(front),
          nodes_left_(nodes_left), end_at_far_(end_at_far) {
        total_ = 0;
        for (int n : need_) total_ += n;
        max_empties_ = 2 * total_ + 2;
        far_ = k_ + 1;
        min_dur_ = dur_[0];
        for (const Rat& d : dur_) min_dur_ = min(min_dur_, d);
    }

    void run() {
        pos_[0] = pos_[1] = 0;
        free_[0] = free_[1] = Rat(0);
        ups_.assign(k_, 0);
        downs_.assign(k_, 0);
        waiting_.assign(k_, {});
        cost_ = Rat(0);
        horizon_ = Rat(0);
        empties_ = 0;
        delivered_ = 0;
        dfs();
    }

private:
    struct Label {
        Rat f0, f1, cost, horizon;
        std::vector<Rat> waits; // per-city concatenation; sizes fixed by the memo key
        int empties;

        bool le(const Label& o) const {
            if (!(f0 <= o.f0 && f1 <= o.f1 && cost <= o.cost && horizon <= o.horizon)) return false;
            if (empties > o.empties) return false;
            for (std::size_t i = 0; i < waits.size(); ++i)
                if (!(waits[i] <= o.waits[i])) return false;
            return true;
        }
    };

    int k_, total_, far_, max_empties_;
    const std::vector<Rat>& dur_;
    const std::vector<Rat>& tax_;
    std::vector<int> need_;
    FrontCollector& front_;
    std::uint64_t& nodes_left_;
    bool end_at_far_;
    Rat min_dur_;

    // mutable search state (do/undo)
    int pos_[2];
    Rat free_[2];
    std::vector<int> ups_, downs_;
    std::vector<std::vector<Rat>> waiting_;
    Rat cost_, horizon_;
    int empties_ = 0;
    int delivered_ = 0;

    std::unordered_map<std::uint64_t, std::vector<Label>> memo_;

    std::uint64_t memo_key() const {
        int a = pos_[0], b = pos_[1];
        if (b < a || (b == a && free_[1] < free_[0])) std::swap(a, b);
        std::uint64_t key = static_cast<std::uint64_t>(a) | (static_cast<std::uint64_t>(b) << 4);
        int shift = 8;
        for (int i = 0; i < k_; ++i) {
            key |= static_cast<std::uint64_t>(ups_[i]) << shift;
            key |= static_cast<std::uint64_t>(downs_[i]) << (shift + 4);
            shift += 8;
        }
        return key;
    }

    // true when the state is new or undominated (and worth expanding)
    bool memo_admit() {
        Label lab;
        const bool swap = pos_[1] < pos_[0] || (pos_[1] == pos_[0] && free_[1] < free_[0]);
        lab.f0 = free_[swap ? 1 : 0];
        lab.f1 = free_[swap ? 0 : 1];
        lab.cost = cost_;
        lab.horizon = horizon_;
        lab.empties = empties_;
        for (int i = 0; i < k_; ++i)
            for (const Rat& w : waiting_[i]) lab.waits.push_back(w);

        auto& labels = memo_[memo_key()];
        for (const Label& old : labels)
            if (old.le(lab)) return false;
        std::erase_if(labels, [&](const Label& old) { return lab.le(old); });
        labels.push_back(std::move(lab));
        return true;
    }

    bool hopeless() const {
        Rat lb_cost = cost_;
        Rat rem_time(0);
        int ups_remaining = 0;
        for (int i = 0; i < k_; ++i) {
            const int rem_up = need_[i] - ups_[i];
            ups_remaining += rem_up;
            lb_cost += tax_[i] * Rat(rem_up);
            rem_time += dur_[i] * Rat(rem_up + (need_[i] - downs_[i]));
            // waiting passengers beyond the planes already parked here each
            // need one more taxed arrival (a relay leg) to get picked up
            const int parked = (pos_[0] == i + 1) + (pos_[1] == i + 1);
            const int relays = ups_[i] - downs_[i] - parked;
            if (relays > 0) {
                lb_cost += tax_[i] * Rat(relays);
                rem_time += dur_[i] * Rat(relays);
            }
        }
        // every remaining loaded leg out of the near hub needs a plane there
        const int at_hub = (pos_[0] == 0) + (pos_[1] == 0);
        if (ups_remaining > at_hub) rem_time += min_dur_ * Rat(ups_remaining - at_hub);

        Rat lb_mk = max(horizon_, (free_[0] + free_[1] + rem_time) / Rat(2));
        return front_.dominated_or_equal(lb_mk, lb_cost);
    }

    // one leg of plane p toward `to`, departing at `dep`; returns the undo data
    struct LegUndo {
        int pos;
        Rat free_at;
        Rat horizon;
        Rat cost;
        int empties;
    };
    LegUndo apply_leg(int p, int to, Rat dep, const Rat& leg_dur, const Rat& land_cost,
                      bool empty_leg) {
        LegUndo undo{pos_[p], free_[p], horizon_, cost_, empties_};
        Rat arr = dep + leg_dur;
        pos_[p] = to;
        free_[p] = arr;
        horizon_ = max(horizon_, arr);
        cost_ += land_cost;
        if (empty_leg) ++empties_;
        return undo;
    }
    void undo_leg(int p, const LegUndo& undo) {
        pos_[p] = undo.pos;
        free_[p] = undo.free_at;
        horizon_ = undo.horizon;
        cost_ = undo.cost;
        empties_ = undo.empties;
    }

    void dfs() {
        if (nodes_left_ == 0) throw OracleTimeout("pattern oracle: node budget exhausted");
        --nodes_left_;

        if (delivered_ == total_) {
            if (!end_at_far_) {
                front_.add({horizon_, cost_});
                return;
            }
            if (pos_[0] == far_ && pos_[1] == far_) front_.add({horizon_, cost_});
            return; // with the end constraint there is no useful move left
        }
        if (hopeless()) return;
        if (!memo_admit()) return;

        int ups_remaining = 0;
        for (int i = 0; i < k_; ++i) ups_remaining += need_[i] - ups_[i];

        for (int p = 0; p < 2; ++p) {
            const int at = pos_[p];
            if (at == 0) {
                for (int i = 0; i < k_; ++i) {
                    if (ups_[i] < need_[i]) { // loaded leg toward the far hub
                        auto undo = apply_leg(p, i + 1, free_[p], dur_[i], tax_[i], false);
                        ups_[i] += 1;
                        auto& w = waiting_[i];
                        auto it = std::upper_bound(w.begin(), w.end(), free_[p]);
                        std::size_t slot = static_cast<std::size_t>(it - w.begin());
                        w.insert(it, free_[p]);
                        dfs();
                        w.erase(w.begin() + slot);
                        ups_[i] -= 1;
                        undo_leg(p, undo);
                    }
                    if (downs_[i] < need_[i] && empties_ < max_empties_) { // relay run
                        auto undo = apply_leg(p, i + 1, free_[p], dur_[i], tax_[i], true);
                        dfs();
                        undo_leg(p, undo);
                    }
                }
            } else if (at == far_) {
                for (int i = 0; i < k_; ++i) {
                    // back toward a central city: pick up there or pass through
                    if ((downs_[i] < need_[i] || ups_remaining > 0) && empties_ < max_empties_) {
                        auto undo = apply_leg(p, i + 1, free_[p], dur_[i], tax_[i], true);
                        dfs();
                        undo_leg(p, undo);
                    }
                }
            } else {
                const int i = at - 1;
                auto& w = waiting_[i];
                if (!w.empty()) { // deliver a waiting (or aboard) passenger
                    Rat dep = max(free_[p], w.front());
                    // take the latest passenger already available; earlier
                    // arrivals stay behind for tighter future departures
                    auto it = std::upper_bound(w.begin(), w.end(), dep);
                    std::size_t slot = static_cast<std::size_t>(it - w.begin()) - 1;
                    Rat taken = w[slot];
                    w.erase(w.begin() + slot);
                    downs_[i] += 1;
                    ++delivered_;
                    auto undo = apply_leg(p, far_, dep, dur_[i], Rat(0), false);
                    dfs();
                    undo_leg(p, undo);
                    --delivered_;
                    downs_[i] -= 1;
                    w.insert(w.begin() + slot, taken);
                }
                if (empties_ < max_empties_) { // reposition to the near hub
                    auto undo = apply_leg(p, 0, free_[p], dur_[i], Rat(0), true);
                    dfs();
                    undo_leg(p, undo);
                }
                // an empty leg from a central city to the far hub is always
                // matched by the near-hub variant (same time, same cost,
                // strictly more follow-up moves), so it is never generated
            }
        }
    }
};

void enumerate_patterns(int cities, int passengers, std::vector<int>& pattern,
                        const std::function<void(const std::vector<int>&)>& fn) {
    if (cities == 1) {
        pattern.push_back(passengers);
        fn(pattern);
        pattern.pop_back();
        return;
    }
    for (int here = 0; here <= passengers; ++here) {
        pattern.push_back(here);
        enumerate_patterns(cities - 1, passengers - here, pattern, fn);
        pattern.pop_back();
    }
}

ParetoFront search_front(const ZenoSpec& spec, int passengers, bool end_at_far,
                         const std::vector<ObjectivePoint>& seeds, std::uint64_t& nodes_left) {
    const int k = static_cast<int>(spec.central.size());
    std::vector<Rat> dur, tax;
    for (const auto& c : spec.central) {
        dur.push_back(c.leg_duration);
        tax.push_back(c.landing_tax);
    }

    FrontCollector front;
    for (const auto& s : seeds) front.add(s);

    std::vector<int> scratch;
    enumerate_patterns(k, passengers, scratch, [&](const std::vector<int>& pattern) {
        PatternSearch search(dur, tax, pattern, front, nodes_left, end_at_far);
        search.run();
    });

    std::sort(front.points.begin(), front.points.end(), lex_less);
    return ParetoFront(front.points);
}

// Constructively achievable anchors: all bunches shuttled through one city
// with the two-plane relay (see shuttle_plan). Seeds the collector so the
// search prunes against real schedules from the start.
std::vector<ObjectivePoint> shuttle_seeds(const ZenoSpec& spec, int passengers) {
    std::vector<ObjectivePoint> seeds;
    const Rat trips(6 * (passengers / 3) - 2);
    for (const auto& c : spec.central)
        seeds.push_back({trips * c.leg_duration, trips * c.landing_tax});
    return seeds;
}

} // namespace

ParetoFront stored_reference_front(const ZenoSpec& spec) {
    if (!spec.is_canonical_shape() || spec.central[1].landing_tax != Rat(2)) return {};
    // Canonical fronts are arithmetic chains; each point steps one bunch leg
    // from the fast expensive relay toward the slow cheap one.
    auto chain = [](int m0, int c0, int count) {
        std::vector<ObjectivePoint> pts;
        for (int i = 0; i < count; ++i)
            pts.push_back({Rat(m0 + 4 * i), Rat(c0 - 2 * i)});
        return ParetoFront(std::move(pts));
    };
    switch (spec.passengers) {
    case 3: return chain(8, 12, 5);
    case 6: return chain(20, 30, 11);
    case 9: return chain(32, 48, 17);
    default: return {};
    }
}

namespace {

void check_oracle_spec(const ZenoSpec& spec) {
    spec.check();
    if (spec.planes != 2)
        throw std::invalid_argument("pattern oracle: reference fronts are defined for two planes");
    if (spec.central.size() > 6)
        throw std::invalid_argument("pattern oracle: at most six central cities supported");
}

std::vector<ObjectivePoint> compose_bunches(const ZenoSpec& spec, int passengers,
                                            std::uint64_t& nodes_left) {
    ParetoFront bunch =
        search_front(spec, 3, /*end_at_far=*/true, shuttle_seeds(spec, 3), nodes_left);
    std::vector<ObjectivePoint> returns;
    for (std::size_t i = 0; i < spec.central.size(); ++i)
        for (std::size_t j = i; j < spec.central.size(); ++j)
            returns.push_back(
                {Rat(2) * max(spec.central[i].leg_duration, spec.central[j].leg_duration),
                 spec.central[i].landing_tax + spec.central[j].landing_tax});

    std::vector<ObjectivePoint> composed = bunch.points();
    for (int b = 3; b < passengers; b += 3) {
        FrontCollector next;
        for (const auto& acc : composed)
            for (const auto& ret : returns)
                for (const auto& add : bunch.points())
                    next.add({acc.makespan + ret.makespan + add.makespan,
                              acc.cost + ret.cost + add.cost});
        composed = std::move(next.points);
    }
    return composed;
}

} // namespace

ParetoFront bunch_composition_front(const ZenoSpec& spec, const OracleLimits& limits) {
    check_oracle_spec(spec);
    std::uint64_t nodes_left = limits.max_nodes;
    std::vector<ObjectivePoint> pts = compose_bunches(spec, spec.passengers, nodes_left);
    std::sort(pts.begin(), pts.end(), lex_less);
    return ParetoFront(std::move(pts));
}

ParetoFront pattern_oracle_front(const ZenoSpec& spec, const OracleLimits& limits) {
    check_oracle_spec(spec);

    std::uint64_t nodes_left = limits.max_nodes;
    std::vector<ObjectivePoint> seeds = shuttle_seeds(spec, spec.passengers);

    if (spec.passengers > 3) {
        // every composed point is achievable, which makes them sound seeds
        std::vector<ObjectivePoint> composed = compose_bunches(spec, spec.passengers, nodes_left);
        seeds.insert(seeds.end(), composed.begin(), composed.end());
    }

    return search_front(spec, spec.passengers, /*end_at_far=*/false, seeds, nodes_left);
}

ParetoFront exact_front(const ZenoSpec& spec, const OracleLimits& limits) {
    spec.check();
    ParetoFront stored = stored_reference_front(spec);
    if (!stored.empty()) return stored;
    return pattern_oracle_front(spec, limits);
}

} // namespace zenoplan
