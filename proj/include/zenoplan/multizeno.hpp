#pragma once

#include <string>
#include <vector>

#include "zenoplan/objectives.hpp"
#include "zenoplan/planning.hpp"

namespace zenoplan {

/// One central city of the star topology: both legs (hub0 <-> city and
/// city <-> hub4) share the leg duration, and every landing in the city is
/// taxed. The two hub endpoints are untaxed.
struct CentralCity {
    Rat leg_duration;
    Rat landing_tax;
};

/// Instance family descriptor. Canonical settings: legs (2,4,6), taxes
/// (3, tax2, 1) with tax2 in {1.1, 2, 2.9}; passengers a multiple of 3.
struct ZenoSpec {
    int passengers = 3;
    int planes = 2;
    std::vector<CentralCity> central;

    static ZenoSpec canonical(int passengers, Rat tax2 = Rat(2)) {
        ZenoSpec s;
        s.passengers = passengers;
        s.central = {{Rat(2), Rat(3)}, {Rat(4), tax2}, {Rat(6), Rat(1)}};
        return s;
    }

    bool is_canonical_shape() const;
    void check() const; // throws std::invalid_argument on an unsupported spec
};

/// Grounds the instance: fly actions over the star topology, zero-duration
/// board/debark, capacity-one planes guarded by empty(plane) preconditions,
/// goal = all passengers at the far hub.
PlanningTask build_task(const ZenoSpec& spec);

struct PddlDocuments {
    std::string domain_pddl;
    std::string problem_pddl;
};

/// PDDL 2.1 durative-actions export; the landing tax accrues on a
/// total-cost fluent so external planners can minimize it as a metric.
PddlDocuments export_pddl(const ZenoSpec& spec);

/// Hand-built reference plan: all passengers delivered through central city
/// `city_index` using both planes and the no-idle-plane relay. Sequential
/// step order (start times cumulative); compress() parallelizes it.
Plan shuttle_plan(const PlanningTask& task, const ZenoSpec& spec, int city_index);

/// General composed schedule: bunch b (three passengers) is relayed through
/// bunch_cities[b]; between bunches the planes reposition through
/// return_cities[b] = (city for a1, city for a2). Compressed, the plan
/// realizes makespan = sum of 4*d(bunch) + max leg pair per return, cost =
/// 4*tax(bunch) + both return taxes - the arithmetic the composition oracle
/// enumerates.
Plan composed_shuttle_plan(const PlanningTask& task, const ZenoSpec& spec,
                           const std::vector<int>& bunch_cities,
                           const std::vector<std::pair<int, int>>& return_cities);

} // namespace zenoplan
