#include <doctest.h>

#include "zenoplan/oracle.hpp"

using namespace zenoplan;

namespace {

ObjectivePoint pt(const char* m, const char* c) { return {Rat::parse(m), Rat::parse(c)}; }

} // namespace

TEST_CASE("zeno3 canonical front matches the published anchors exactly") {
    ParetoFront front = exact_front(ZenoSpec::canonical(3));
    std::vector<ObjectivePoint> expected = {pt("8", "12"), pt("12", "10"), pt("16", "8"),
                                            pt("20", "6"), pt("24", "4")};
    CHECK(front.points() == expected);
}

TEST_CASE("zeno3 search oracle agrees with the stored table") {
    ParetoFront searched = pattern_oracle_front(ZenoSpec::canonical(3));
    CHECK(searched == stored_reference_front(ZenoSpec::canonical(3)));
}

TEST_CASE("zeno6 canonical front: 11 points including the published ones") {
    ParetoFront front = exact_front(ZenoSpec::canonical(6));
    CHECK(front.size() == 11);
    for (const char* m : {"20", "24", "28", "56", "60"}) (void)m;
    CHECK(front.contains(pt("20", "30")));
    CHECK(front.contains(pt("24", "28")));
    CHECK(front.contains(pt("28", "26")));
    CHECK(front.contains(pt("56", "12")));
    CHECK(front.contains(pt("60", "10")));
}

TEST_CASE("zeno9 canonical front has 17 points") {
    ParetoFront front = exact_front(ZenoSpec::canonical(9));
    CHECK(front.size() == 17);
}

TEST_CASE("fronts are mutually nondominated by construction") {
    for (int n : {3, 6, 9}) {
        ParetoFront front = exact_front(ZenoSpec::canonical(n));
        const auto& pts = front.points();
        for (std::size_t i = 1; i < pts.size(); ++i) {
            CHECK(pts[i - 1].makespan < pts[i].makespan);
            CHECK(pts[i].cost < pts[i - 1].cost);
        }
    }
}

TEST_CASE("scaling all taxes scales the cost coordinate only") {
    ZenoSpec base = ZenoSpec::canonical(3);
    ZenoSpec scaled = base;
    for (CentralCity& c : scaled.central) c.landing_tax = c.landing_tax * Rat(7, 2);

    ParetoFront f_base = pattern_oracle_front(base);
    ParetoFront f_scaled = pattern_oracle_front(scaled);
    REQUIRE(f_base.size() == f_scaled.size());
    for (std::size_t i = 0; i < f_base.size(); ++i) {
        CHECK(f_scaled.points()[i].makespan == f_base.points()[i].makespan);
        CHECK(f_scaled.points()[i].cost == f_base.points()[i].cost * Rat(7, 2));
    }
}

TEST_CASE("zeno3 oracle under the figure tax variants") {
    // tax2 = 1.1 bends the front toward the middle city
    ParetoFront low = pattern_oracle_front(ZenoSpec::canonical(3, Rat::parse("1.1")));
    CHECK(low.contains(pt("8", "12")));
    CHECK(low.contains(pt("16", "4.4")));
    CHECK(low.contains(pt("24", "4")));

    // tax2 = 2.9 keeps the relay points; the middle city barely matters
    ParetoFront high = pattern_oracle_front(ZenoSpec::canonical(3, Rat::parse("2.9")));
    CHECK(high.contains(pt("8", "12")));
    CHECK(high.contains(pt("24", "4")));
    CHECK(high.contains(pt("16", "8")));
}

TEST_CASE("oracle rejects unsupported plane counts") {
    ZenoSpec spec = ZenoSpec::canonical(3);
    spec.planes = 3;
    CHECK_THROWS_AS(pattern_oracle_front(spec), std::invalid_argument);
}

TEST_CASE("node budget exhaustion raises OracleTimeout") {
    OracleLimits limits;
    limits.max_nodes = 10;
    CHECK_THROWS_AS(pattern_oracle_front(ZenoSpec::canonical(3), limits), OracleTimeout);
}
