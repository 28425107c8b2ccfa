#include <doctest.h>

#include "zenoplan/oracle.hpp"
#include "zenoplan/planning.hpp"

using namespace zenoplan;

// Revalidation of the stored reference tables. The full search oracle
// terminates up to six passengers; the nine-passenger table is checked two
// ways: the bunch-composition enumeration must reproduce it, and every
// stored point must be realized by an actual plan accepted by the validator.

TEST_CASE("search oracle revalidates the stored zeno6 front") {
    ParetoFront searched = pattern_oracle_front(ZenoSpec::canonical(6));
    CHECK(searched == stored_reference_front(ZenoSpec::canonical(6)));
}

TEST_CASE("bunch composition reproduces the search oracle at three and six") {
    for (int n : {3, 6}) {
        ZenoSpec spec = ZenoSpec::canonical(n);
        CHECK(bunch_composition_front(spec) == pattern_oracle_front(spec));
    }
    // and off the canonical tax as well
    for (const char* tax2 : {"1.1", "2.9"}) {
        ZenoSpec spec = ZenoSpec::canonical(6, Rat::parse(tax2));
        CHECK(bunch_composition_front(spec) == pattern_oracle_front(spec));
    }
}

TEST_CASE("zeno9: composition matches the stored table") {
    CHECK(bunch_composition_front(ZenoSpec::canonical(9)) ==
          stored_reference_front(ZenoSpec::canonical(9)));
}

TEST_CASE("zeno9: every stored point is realized by a validated plan") {
    ZenoSpec spec = ZenoSpec::canonical(9);
    PlanningTask task = build_task(spec);
    ParetoFront stored = stored_reference_front(spec);

    // relay bunches through any city mix, joined by any return pair mix
    std::vector<ObjectivePoint> achieved;
    for (int b1 = 1; b1 <= 3; ++b1)
        for (int b2 = b1; b2 <= 3; ++b2)
            for (int b3 = b2; b3 <= 3; ++b3)
                for (int r1a = 1; r1a <= 3; ++r1a)
                    for (int r1b = r1a; r1b <= 3; ++r1b)
                        for (int r2a = 1; r2a <= 3; ++r2a)
                            for (int r2b = r2a; r2b <= 3; ++r2b) {
                                Plan plan = composed_shuttle_plan(
                                    task, spec, {b1, b2, b3}, {{r1a, r1b}, {r2a, r2b}});
                                Plan packed = compress(task, {plan});
                                ValidationResult res = validate_plan(task, packed);
                                REQUIRE(res.valid);
                                achieved.push_back({res.makespan, res.cost});
                            }
    for (const ObjectivePoint& p : stored.points()) {
        bool found = false;
        for (const ObjectivePoint& a : achieved)
            if (a == p) { found = true; break; }
        CHECK(found);
    }
}
