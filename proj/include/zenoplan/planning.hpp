#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zenoplan/rational.hpp"

namespace zenoplan {

/// Ground temporal planning model. States are sets of boolean atoms over a
/// fixed universe, actions are grounded STRIPS operators with a duration and
/// a landing cost, and plans are (action, start time) schedules. All values
/// are immutable after task construction and safe to share across threads.

enum class Pred : std::uint8_t {
    At,    // at(mobile, city): a passenger or plane located in a city
    In,    // in(passenger, plane): passenger aboard
    Empty, // empty(plane): no passenger aboard (capacity-one boarding guard)
};

using AtomId = int;

struct Atom {
    Pred pred;
    std::int16_t arg0; // At: mobile id; In: passenger id; Empty: plane id
    std::int16_t arg1; // At: city id; In: plane id; Empty: unused (-1)

    bool operator==(const Atom&) const = default;
};

/// Fixed-universe bitset of atoms.
class AtomSet {
public:
    AtomSet() = default;
    explicit AtomSet(int universe_size) : size_(universe_size), bits_((universe_size + 63) / 64, 0) {}

    int universe_size() const { return size_; }
    void set(AtomId a) { bits_[a >> 6] |= 1ull << (a & 63); }
    void clear(AtomId a) { bits_[a >> 6] &= ~(1ull << (a & 63)); }
    bool test(AtomId a) const { return (bits_[a >> 6] >> (a & 63)) & 1; }

    bool contains_all(const AtomSet& o) const {
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if ((o.bits_[i] & ~bits_[i]) != 0) return false;
        return true;
    }
    bool intersects(const AtomSet& o) const {
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if ((bits_[i] & o.bits_[i]) != 0) return true;
        return false;
    }
    void add_all(const AtomSet& o) {
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
    }
    void remove_all(const AtomSet& o) {
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= ~o.bits_[i];
    }
    int count() const;
    bool empty() const {
        for (auto w : bits_)
            if (w) return false;
        return true;
    }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            std::uint64_t w = bits_[i];
            while (w) {
                int b = __builtin_ctzll(w);
                fn(static_cast<AtomId>(i * 64 + b));
                w &= w - 1;
            }
        }
    }
    std::vector<AtomId> to_vector() const;

    bool operator==(const AtomSet&) const = default;
    std::size_t hash() const;

private:
    int size_ = 0;
    std::vector<std::uint64_t> bits_;
};

struct Action {
    std::string name;
    AtomSet pre, add, del;
    Rat duration;
    Rat landing_cost;
    // Mobile objects (passenger/plane ids) this action touches; two actions
    // sharing a mobile can never overlap in a compressed schedule.
    std::vector<std::int16_t> mobiles;
};

struct ObjectTable {
    std::vector<std::string> passengers; // mobile ids [0, P)
    std::vector<std::string> planes;     // mobile ids [P, P+A)
    std::vector<std::string> cities;

    int mobile_count() const { return static_cast<int>(passengers.size() + planes.size()); }
    std::string mobile_name(int id) const {
        return id < static_cast<int>(passengers.size())
                   ? passengers[id]
                   : planes[id - static_cast<int>(passengers.size())];
    }
};

struct PlanningTask {
    ObjectTable objects;
    std::vector<Atom> atoms; // universe; AtomId indexes this
    std::vector<Action> actions;
    AtomSet initial;
    AtomSet goal;

    int universe_size() const { return static_cast<int>(atoms.size()); }
    AtomId atom_id(const Atom& a) const; // -1 when not in the universe
    std::string atom_name(AtomId a) const;

    // Precomputed structural mutex partners per atom; built by finalize().
    std::vector<AtomSet> mutex_with;
    void finalize();
};

struct PlanStep {
    int action; // index into task.actions
    Rat start;
};

struct Plan {
    std::vector<PlanStep> steps;
    Rat makespan;
    Rat total_cost;
};

struct ValidationResult {
    bool valid = false;
    Rat makespan;
    Rat cost;
    std::string violation; // empty when valid
};

/// Simulates steps in start-time order (ties: listed order) from `from` and
/// checks every precondition at the action's start plus `goal` at the end.
/// Makespan and cost are recomputed from the task, never trusted from input.
ValidationResult validate_plan(const PlanningTask& task, const Plan& plan,
                               const AtomSet& from, const AtomSet& goal);
ValidationResult validate_plan(const PlanningTask& task, const Plan& plan);

/// Earliest-start list scheduling of the concatenated subplans: each action
/// starts once all earlier causal supports and all earlier conflicting
/// actions (shared mobile, or contradicting effects) have finished. Input
/// must be sequentially valid from the initial state, else
/// std::invalid_argument. Deterministic; ties keep input order.
Plan compress(const PlanningTask& task, const std::vector<Plan>& subplans);

/// Structural mutex: one mobile in two places, one passenger in two planes,
/// aboard and located at once, or a plane both empty and occupied.
/// Symmetric, irreflexive.
bool mutex(const PlanningTask& task, const Atom& a, const Atom& b);
bool mutex(const PlanningTask& task, AtomId a, AtomId b);

/// Fixed point of t(a) = 0 for initial atoms, else min over achievers of
/// duration + max over preconditions; nullopt marks unreachable atoms.
/// Lower bounds on real achievement times; orders DaE genome stations.
std::vector<std::optional<Rat>> earliest_times(const PlanningTask& task);
std::vector<std::optional<Rat>> earliest_times(const PlanningTask& task, const AtomSet& from);

/// One step per line: "[start] name (duration)".
std::string to_string(const PlanningTask& task, const Plan& plan);

} // namespace zenoplan
