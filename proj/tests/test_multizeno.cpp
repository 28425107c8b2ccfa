#include <doctest.h>

#include "zenoplan/multizeno.hpp"
#include "zenoplan/planning.hpp"

using namespace zenoplan;

TEST_CASE("zeno3 grounding: objects, goal, capacity guard") {
    ZenoSpec spec = ZenoSpec::canonical(3);
    PlanningTask task = build_task(spec);
    CHECK(task.objects.passengers.size() == 3);
    CHECK(task.objects.planes.size() == 2);
    CHECK(task.objects.cities.size() == 5);
    CHECK(task.goal.count() == 3);
    for (int p = 0; p < 3; ++p)
        CHECK(task.goal.test(task.atom_id({Pred::At, static_cast<std::int16_t>(p), 4})));

    // every board action requires an empty plane
    int boards = 0;
    for (const Action& a : task.actions) {
        if (a.name.rfind("board", 0) != 0) continue;
        ++boards;
        bool requires_empty = false;
        a.pre.for_each([&](AtomId id) {
            if (task.atoms[id].pred == Pred::Empty) requires_empty = true;
        });
        CHECK(requires_empty);
    }
    CHECK(boards == 3 * 2 * 5);
}

TEST_CASE("spec validation rejects unsupported families") {
    CHECK_THROWS_AS(build_task(ZenoSpec::canonical(4)), std::invalid_argument);
    CHECK_THROWS_AS(build_task(ZenoSpec::canonical(0)), std::invalid_argument);
    ZenoSpec bad = ZenoSpec::canonical(3);
    bad.central[1].landing_tax = Rat(0);
    CHECK_THROWS_AS(build_task(bad), std::invalid_argument);
    ZenoSpec unordered = ZenoSpec::canonical(3);
    unordered.central[2].leg_duration = Rat(1);
    CHECK_THROWS_AS(build_task(unordered), std::invalid_argument);
}

TEST_CASE("tax override lands on the second central city") {
    ZenoSpec spec = ZenoSpec::canonical(3, Rat::parse("1.1"));
    PlanningTask task = build_task(spec);
    for (const Action& a : task.actions)
        if (a.name == "fly a1 city0 city2") CHECK(a.landing_cost == Rat::parse("1.1"));
}

TEST_CASE("pddl export reflects the instance") {
    PddlDocuments z3 = export_pddl(ZenoSpec::canonical(3));
    PddlDocuments z6 = export_pddl(ZenoSpec::canonical(6));

    // the domain is instance independent
    CHECK(z3.domain_pddl == z6.domain_pddl);
    CHECK(z3.domain_pddl.find(":durative-action fly") != std::string::npos);
    CHECK(z3.domain_pddl.find("(landing-tax ?to)") != std::string::npos);

    CHECK(z3.problem_pddl.find(" p3") != std::string::npos);
    CHECK(z3.problem_pddl.find(" p4") == std::string::npos);
    CHECK(z6.problem_pddl.find(" p6") != std::string::npos);
    for (int p = 1; p <= 3; ++p)
        CHECK(z3.problem_pddl.find("(at p" + std::to_string(p) + " city4)") != std::string::npos);

    // balanced parentheses in both documents
    for (const std::string& doc : {z3.domain_pddl, z3.problem_pddl}) {
        int depth = 0;
        for (char c : doc) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            CHECK(depth >= 0);
        }
        CHECK(depth == 0);
    }
}

TEST_CASE("export round trip: the canonical plan validates on the grounded task") {
    ZenoSpec spec = ZenoSpec::canonical(3);
    PlanningTask task = build_task(spec);
    Plan packed = compress(task, {shuttle_plan(task, spec, 1)});
    ValidationResult res = validate_plan(task, packed);
    CHECK(res.valid);
    CHECK(res.makespan == Rat(8));
}

TEST_CASE("shuttle plans scale by bunches") {
    ZenoSpec spec = ZenoSpec::canonical(6);
    PlanningTask task = build_task(spec);
    Plan packed = compress(task, {shuttle_plan(task, spec, 1)});
    ValidationResult res = validate_plan(task, packed);
    REQUIRE(res.valid);
    CHECK(res.makespan == Rat(20));
    CHECK(res.cost == Rat(30));

    Plan cheap = compress(task, {shuttle_plan(task, spec, 3)});
    ValidationResult res3 = validate_plan(task, cheap);
    REQUIRE(res3.valid);
    CHECK(res3.makespan == Rat(60));
    CHECK(res3.cost == Rat(10));
}
