#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "zenoplan/rational.hpp"

namespace zenoplan {

/// A point in objective space: (makespan, cost), both minimized.
struct ObjectivePoint {
    Rat makespan;
    Rat cost;

    bool operator==(const ObjectivePoint&) const = default;
    /// Weak dominance for minimization (equal points dominate each other).
    bool dominates(const ObjectivePoint& o) const {
        return makespan <= o.makespan && cost <= o.cost;
    }
};

inline bool lex_less(const ObjectivePoint& a, const ObjectivePoint& b) {
    if (a.makespan != b.makespan) return a.makespan < b.makespan;
    return a.cost < b.cost;
}

/// A set of mutually nondominated points, kept sorted by ascending makespan
/// (hence strictly descending cost). The constructor enforces the invariant.
class ParetoFront {
public:
    ParetoFront() = default;
    explicit ParetoFront(std::vector<ObjectivePoint> points) : points_(std::move(points)) {
        std::sort(points_.begin(), points_.end(), lex_less);
        for (std::size_t i = 1; i < points_.size(); ++i) {
            if (!(points_[i - 1].makespan < points_[i].makespan) ||
                !(points_[i].cost < points_[i - 1].cost))
                throw std::invalid_argument("ParetoFront: points are not mutually nondominated");
        }
    }

    const std::vector<ObjectivePoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    bool contains(const ObjectivePoint& p) const {
        for (const auto& q : points_)
            if (q == p) return true;
        return false;
    }

    bool operator==(const ParetoFront&) const = default;

private:
    std::vector<ObjectivePoint> points_;
};

} // namespace zenoplan
