#include "zenoplan/yahsp.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <unordered_map>

#include "zenoplan/rng.hpp"

namespace zenoplan {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Subplanner::Subplanner(const PlanningTask& task) : task_(task) {
    const int n_actions = static_cast<int>(task.actions.size());
    actions_by_name_.resize(n_actions);
    for (int i = 0; i < n_actions; ++i) actions_by_name_[i] = i;
    std::sort(actions_by_name_.begin(), actions_by_name_.end(),
              [&](int a, int b) { return task.actions[a].name < task.actions[b].name; });

    consumers_.resize(task.universe_size());
    pre_count_.resize(n_actions);
    for (int ai = 0; ai < n_actions; ++ai) {
        pre_count_[ai] = task.actions[ai].pre.count();
        task.actions[ai].pre.for_each([&](AtomId a) { consumers_[a].push_back(ai); });
    }
    atom_time_.resize(task.universe_size());
    supporter_.resize(task.universe_size());
    action_fire_.resize(n_actions);
    pending_.resize(n_actions);
    settled_.resize(task.universe_size());
}

double Subplanner::metric(int action, SearchStrategy strategy) const {
    const Action& act = task_.actions[action];
    return strategy == SearchStrategy::Makespan ? act.duration.to_double()
                                                : act.landing_cost.to_double();
}

void Subplanner::compute_reach(const AtomSet& from, SearchStrategy strategy) {
    std::fill(atom_time_.begin(), atom_time_.end(), kInf);
    std::fill(supporter_.begin(), supporter_.end(), -1);
    std::fill(action_fire_.begin(), action_fire_.end(), kInf);
    std::fill(settled_.begin(), settled_.end(), 0);
    pending_ = pre_count_;
    heap_.clear();

    auto push = [&](double t, AtomId a) {
        heap_.emplace_back(-t, a); // max-heap on negated time = min-heap
        std::push_heap(heap_.begin(), heap_.end());
    };
    from.for_each([&](AtomId a) {
        atom_time_[a] = 0.0;
        push(0.0, a);
    });

    while (!heap_.empty()) {
        std::pop_heap(heap_.begin(), heap_.end());
        auto [neg_t, a] = heap_.back();
        heap_.pop_back();
        if (settled_[a]) continue;
        settled_[a] = 1;
        const double t = -neg_t;
        for (int ai : consumers_[a]) {
            if (--pending_[ai] == 0) {
                // t equals the max over preconditions: settle order is nondecreasing
                const double fire = t + metric(ai, strategy);
                action_fire_[ai] = fire;
                task_.actions[ai].add.for_each([&](AtomId eff) {
                    if (!settled_[eff] && fire < atom_time_[eff]) {
                        atom_time_[eff] = fire;
                        supporter_[eff] = ai;
                        push(fire, eff);
                    }
                });
            }
        }
    }
}

double Subplanner::goal_heuristic(const AtomSet& state, const AtomSet& goal) {
    double h = 0.0;
    bool dead = false;
    goal.for_each([&](AtomId a) {
        if (state.test(a)) return;
        if (atom_time_[a] == kInf) dead = true;
        else h += atom_time_[a];
    });
    return dead ? kInf : h;
}

std::optional<std::vector<int>> Subplanner::relaxed_plan(const AtomSet& from, const AtomSet& to,
                                                         SearchStrategy strategy) {
    compute_reach(from, strategy);

    std::vector<char> visited(task_.universe_size(), 0);
    std::vector<char> chosen(task_.actions.size(), 0);
    std::vector<AtomId> stack;
    bool unreachable = false;
    to.for_each([&](AtomId a) {
        if (!from.test(a)) stack.push_back(a);
    });
    std::vector<int> plan;
    while (!stack.empty()) {
        AtomId a = stack.back();
        stack.pop_back();
        if (visited[a]) continue;
        visited[a] = 1;
        if (atom_time_[a] == kInf || supporter_[a] < 0) {
            unreachable = true;
            break;
        }
        int act = supporter_[a];
        if (chosen[act]) continue;
        chosen[act] = 1;
        plan.push_back(act);
        task_.actions[act].pre.for_each([&](AtomId p) {
            if (!from.test(p) && !visited[p]) stack.push_back(p);
        });
    }
    if (unreachable) return std::nullopt;
    // execution order: relaxed firing time, ties by action name
    std::sort(plan.begin(), plan.end(), [&](int x, int y) {
        if (action_fire_[x] != action_fire_[y]) return action_fire_[x] < action_fire_[y];
        return task_.actions[x].name < task_.actions[y].name;
    });
    return plan;
}

SolveOutcome Subplanner::solve(const AtomSet& from, const AtomSet& to, SearchStrategy strategy,
                               SubplannerBudget budget, std::uint64_t seed) {
    struct Node {
        AtomSet state;
        int parent;
        std::vector<int> via; // actions appended to the parent's path
    };
    struct OpenEntry {
        double h;
        std::uint64_t tie;
        int node;
        bool operator>(const OpenEntry& o) const {
            if (h != o.h) return h > o.h;
            if (tie != o.tie) return tie > o.tie;
            return node > o.node;
        }
    };

    Rng rng(seed);
    std::vector<Node> nodes;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<OpenEntry>> open;
    std::unordered_map<std::size_t, std::vector<int>> seen; // state hash -> node ids

    auto known = [&](const AtomSet& s) {
        auto it = seen.find(s.hash());
        if (it == seen.end()) return false;
        for (int idx : it->second)
            if (nodes[idx].state == s) return true;
        return false;
    };
    auto remember = [&](const AtomSet& s, int idx) { seen[s.hash()].push_back(idx); };

    SolveOutcome out;
    auto push_node = [&](Node&& node, double h) {
        if (h == kInf) return;
        int idx = static_cast<int>(nodes.size());
        nodes.push_back(std::move(node));
        remember(nodes[idx].state, idx);
        open.push({h, rng.next_u64(), idx});
        ++out.stats.generated;
    };

    compute_reach(from, strategy);
    push_node({from, -1, {}}, goal_heuristic(from, to));

    auto reconstruct = [&](int idx) {
        std::vector<int> actions;
        for (int k = idx; k >= 0; k = nodes[k].parent)
            actions.insert(actions.begin(), nodes[k].via.begin(), nodes[k].via.end());
        Plan plan;
        Rat clock(0);
        for (int act : actions) {
            plan.steps.push_back({act, clock});
            clock += task_.actions[act].duration;
            plan.total_cost += task_.actions[act].landing_cost;
        }
        plan.makespan = clock;
        out.status = SolveOutcome::Status::Solved;
        out.plan = std::move(plan);
        out.end_state = nodes[idx].state;
    };

    while (!open.empty()) {
        OpenEntry top = open.top();
        open.pop();
        const AtomSet state = nodes[top.node].state;
        if (state.contains_all(to)) {
            reconstruct(top.node);
            return out;
        }
        if (out.stats.expanded >= static_cast<std::uint64_t>(budget.max_nodes)) {
            out.status = SolveOutcome::Status::BudgetExhausted;
            return out;
        }
        ++out.stats.expanded;
        ++work_;

        // regular successors, lexicographic action order
        for (int act : actions_by_name_) {
            const Action& a = task_.actions[act];
            if (!state.contains_all(a.pre)) continue;
            AtomSet succ = state;
            succ.remove_all(a.del);
            succ.add_all(a.add);
            if (known(succ)) continue;
            compute_reach(succ, strategy);
            push_node({std::move(succ), top.node, {act}}, goal_heuristic(succ, to));
        }

        // lookahead successor: greedily apply the relaxed plan
        if (auto rp = relaxed_plan(state, to, strategy)) {
            AtomSet cur = state;
            std::vector<int> applied;
            for (int act : *rp) {
                const Action& a = task_.actions[act];
                if (!cur.contains_all(a.pre)) continue;
                cur.remove_all(a.del);
                cur.add_all(a.add);
                applied.push_back(act);
            }
            if (!applied.empty() && !known(cur)) {
                compute_reach(cur, strategy);
                push_node({std::move(cur), top.node, std::move(applied)},
                          goal_heuristic(cur, to));
            }
        }
    }
    out.status = SolveOutcome::Status::ProvedUnreachable;
    return out;
}

} // namespace zenoplan
