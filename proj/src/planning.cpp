#include "zenoplan/planning.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace zenoplan {

int AtomSet::count() const {
    int n = 0;
    for (auto w : bits_) n += __builtin_popcountll(w);
    return n;
}

std::vector<AtomId> AtomSet::to_vector() const {
    std::vector<AtomId> out;
    out.reserve(count());
    for_each([&](AtomId a) { out.push_back(a); });
    return out;
}

std::size_t AtomSet::hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto w : bits_) {
        h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

AtomId PlanningTask::atom_id(const Atom& a) const {
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i] == a) return static_cast<AtomId>(i);
    return -1;
}

std::string PlanningTask::atom_name(AtomId a) const {
    const Atom& at = atoms[a];
    switch (at.pred) {
    case Pred::At:
        return "at(" + objects.mobile_name(at.arg0) + "," + objects.cities[at.arg1] + ")";
    case Pred::In:
        return "in(" + objects.passengers[at.arg0] + "," + objects.planes[at.arg1] + ")";
    case Pred::Empty:
        return "empty(" + objects.planes[at.arg0] + ")";
    }
    return "?";
}

void PlanningTask::finalize() {
    mutex_with.assign(atoms.size(), AtomSet(universe_size()));
    for (AtomId a = 0; a < universe_size(); ++a)
        for (AtomId b = a + 1; b < universe_size(); ++b)
            if (mutex(*this, a, b)) {
                mutex_with[a].set(b);
                mutex_with[b].set(a);
            }
}

bool mutex(const PlanningTask& task, AtomId a, AtomId b) {
    return mutex(task, task.atoms[a], task.atoms[b]);
}

bool mutex(const PlanningTask& task, const Atom& a, const Atom& b) {
    if (a == b) return false;
    int passenger_count = static_cast<int>(task.objects.passengers.size());
    auto is_passenger = [&](std::int16_t mobile) { return mobile < passenger_count; };

    // same mobile located in two different cities
    if (a.pred == Pred::At && b.pred == Pred::At)
        return a.arg0 == b.arg0 && a.arg1 != b.arg1;
    // same passenger in two different planes
    if (a.pred == Pred::In && b.pred == Pred::In) {
        if (a.arg0 == b.arg0 && a.arg1 != b.arg1) return true;
        // two passengers in the same capacity-one plane
        return a.arg1 == b.arg1 && a.arg0 != b.arg0;
    }
    // a passenger both located and aboard
    if (a.pred == Pred::At && b.pred == Pred::In)
        return is_passenger(a.arg0) && a.arg0 == b.arg0;
    if (a.pred == Pred::In && b.pred == Pred::At)
        return is_passenger(b.arg0) && b.arg0 == a.arg0;
    // a plane both empty and occupied
    if (a.pred == Pred::Empty && b.pred == Pred::In) return a.arg0 == b.arg1;
    if (a.pred == Pred::In && b.pred == Pred::Empty) return b.arg0 == a.arg1;
    return false;
}

namespace {

// Steps in simulation order: stable sort by start time keeps listed order
// for simultaneous starts.
std::vector<PlanStep> simulation_order(const Plan& plan) {
    std::vector<PlanStep> steps = plan.steps;
    std::stable_sort(steps.begin(), steps.end(),
                     [](const PlanStep& x, const PlanStep& y) { return x.start < y.start; });
    return steps;
}

} // namespace

ValidationResult validate_plan(const PlanningTask& task, const Plan& plan,
                               const AtomSet& from, const AtomSet& goal) {
    ValidationResult res;
    AtomSet state = from;
    Rat makespan(0), cost(0);
    for (const PlanStep& step : simulation_order(plan)) {
        if (step.action < 0 || step.action >= static_cast<int>(task.actions.size())) {
            res.violation = "unknown action id " + std::to_string(step.action);
            return res;
        }
        if (step.start < Rat(0)) {
            res.violation = "negative start time for " + task.actions[step.action].name;
            return res;
        }
        const Action& act = task.actions[step.action];
        if (!state.contains_all(act.pre)) {
            std::string missing;
            act.pre.for_each([&](AtomId a) {
                if (!state.test(a) && missing.empty()) missing = task.atom_name(a);
            });
            res.violation = "precondition " + missing + " of " + act.name + " unsatisfied at t=" +
                            step.start.to_string();
            return res;
        }
        state.remove_all(act.del);
        state.add_all(act.add);
        cost += act.landing_cost;
        makespan = max(makespan, step.start + act.duration);
    }
    if (!state.contains_all(goal)) {
        std::string missing;
        goal.for_each([&](AtomId a) {
            if (!state.test(a) && missing.empty()) missing = task.atom_name(a);
        });
        res.violation = "goal atom " + missing + " not achieved";
        return res;
    }
    res.valid = true;
    res.makespan = makespan;
    res.cost = cost;
    return res;
}

ValidationResult validate_plan(const PlanningTask& task, const Plan& plan) {
    return validate_plan(task, plan, task.initial, task.goal);
}

namespace {

bool conflicting(const Action& a, const Action& b) {
    // shared mobile object (both vectors are sorted)
    std::size_t i = 0, j = 0;
    while (i < a.mobiles.size() && j < b.mobiles.size()) {
        if (a.mobiles[i] == b.mobiles[j]) return true;
        if (a.mobiles[i] < b.mobiles[j]) ++i; else ++j;
    }
    // contradicting effects or clobbered preconditions
    if (a.del.intersects(b.pre) || a.del.intersects(b.add)) return true;
    if (b.del.intersects(a.pre) || b.del.intersects(a.add)) return true;
    return false;
}

bool supports(const Action& producer, const Action& consumer) {
    return producer.add.intersects(consumer.pre);
}

} // namespace

Plan compress(const PlanningTask& task, const std::vector<Plan>& subplans) {
    std::vector<int> seq;
    for (const Plan& p : subplans)
        for (const PlanStep& s : p.steps) {
            if (s.action < 0 || s.action >= static_cast<int>(task.actions.size()))
                throw std::invalid_argument("compress: unknown action id");
            seq.push_back(s.action);
        }

    // the concatenation must be applicable in listed order
    AtomSet state = task.initial;
    for (int id : seq) {
        const Action& act = task.actions[id];
        if (!state.contains_all(act.pre))
            throw std::invalid_argument("compress: input not sequentially valid at " + act.name);
        state.remove_all(act.del);
        state.add_all(act.add);
    }

    Plan out;
    std::vector<Rat> finish(seq.size());
    Rat makespan(0), cost(0);
    for (std::size_t k = 0; k < seq.size(); ++k) {
        const Action& act = task.actions[seq[k]];
        Rat start(0);
        for (std::size_t j = 0; j < k; ++j) {
            const Action& prev = task.actions[seq[j]];
            if (supports(prev, act) || conflicting(prev, act))
                start = max(start, finish[j]);
        }
        finish[k] = start + act.duration;
        makespan = max(makespan, finish[k]);
        cost += act.landing_cost;
        out.steps.push_back({seq[k], start});
    }
    std::stable_sort(out.steps.begin(), out.steps.end(),
                     [](const PlanStep& x, const PlanStep& y) { return x.start < y.start; });
    out.makespan = makespan;
    out.total_cost = cost;
    return out;
}

std::vector<std::optional<Rat>> earliest_times(const PlanningTask& task, const AtomSet& from) {
    const int n = task.universe_size();
    std::vector<std::optional<Rat>> t(n);

    // Dijkstra over the relaxed achievement graph: an action fires once all
    // its preconditions are settled, at max(pre) + duration. Settled order is
    // nondecreasing, so each action fires at most once.
    using Entry = std::pair<Rat, AtomId>;
    auto cmp = [](const Entry& a, const Entry& b) { return b.first < a.first; };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> open(cmp);

    std::vector<std::vector<int>> consumers(n); // atom -> actions with that precondition
    std::vector<int> pending(task.actions.size());
    for (std::size_t ai = 0; ai < task.actions.size(); ++ai) {
        pending[ai] = task.actions[ai].pre.count();
        task.actions[ai].pre.for_each([&](AtomId a) { consumers[a].push_back(static_cast<int>(ai)); });
    }

    std::vector<char> settled(n, 0);
    std::vector<std::optional<Rat>> action_ready(task.actions.size());

    auto reach = [&](AtomId a, const Rat& when) {
        if (!t[a] || when < *t[a]) {
            t[a] = when;
            open.push({when, a});
        }
    };
    from.for_each([&](AtomId a) { reach(a, Rat(0)); });
    for (std::size_t ai = 0; ai < task.actions.size(); ++ai)
        if (pending[ai] == 0) {
            // no preconditions: effects available after the duration
            task.actions[ai].add.for_each([&](AtomId a) { reach(a, task.actions[ai].duration); });
        }

    while (!open.empty()) {
        auto [when, a] = open.top();
        open.pop();
        if (settled[a]) continue;
        settled[a] = 1;
        for (int ai : consumers[a]) {
            if (--pending[ai] == 0) {
                Rat fire = when + task.actions[ai].duration; // when == max over preconditions
                task.actions[ai].add.for_each([&](AtomId eff) {
                    if (!settled[eff]) reach(eff, fire);
                });
            }
        }
    }
    return t;
}

std::vector<std::optional<Rat>> earliest_times(const PlanningTask& task) {
    return earliest_times(task, task.initial);
}

std::string to_string(const PlanningTask& task, const Plan& plan) {
    std::ostringstream os;
    for (const PlanStep& s : plan.steps)
        os << "[" << s.start.to_string() << "] " << task.actions[s.action].name << " ("
           << task.actions[s.action].duration.to_string() << ")\n";
    return os.str();
}

} // namespace zenoplan
