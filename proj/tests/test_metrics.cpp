#include <doctest.h>

#include "zenoplan/metrics.hpp"
#include "zenoplan/oracle.hpp"
#include "zenoplan/rng.hpp"

using namespace zenoplan;

namespace {

ObjectivePoint pt(const char* m, const char* c) { return {Rat::parse(m), Rat::parse(c)}; }

// O(n^2) reference filter: keep points not weakly dominated by a distinct one
std::vector<ObjectivePoint> brute_nondominated(const std::vector<ObjectivePoint>& pts) {
    std::vector<ObjectivePoint> out;
    for (const ObjectivePoint& p : pts) {
        bool dominated = false;
        for (const ObjectivePoint& q : pts)
            if (!(q == p) && q.dominates(p)) dominated = true;
        bool dup = false;
        for (const ObjectivePoint& q : out)
            if (q == p) dup = true;
        if (!dominated && !dup) out.push_back(p);
    }
    return out;
}

// column-sum grid integration; inputs snapped to the same 0.01 grid make it exact
Rat grid_hypervolume(const std::vector<ObjectivePoint>& pts, const ReferencePoint& ref) {
    const Rat cell(1, 100);
    Rat volume(0);
    for (Rat x(0); x < ref.makespan_bound; x += cell) {
        Rat best_c = ref.cost_bound;
        for (const ObjectivePoint& p : pts)
            if (p.makespan <= x && p.cost < best_c) best_c = p.cost;
        if (best_c < ref.cost_bound) volume += cell * (ref.cost_bound - best_c);
    }
    return volume;
}

std::vector<ObjectivePoint> random_points(Rng& rng, int count) {
    std::vector<ObjectivePoint> pts;
    for (int i = 0; i < count; ++i)
        pts.push_back({Rat(rng.range(0, 800), 100), Rat(rng.range(0, 800), 100)});
    return pts;
}

ParetoFront zeno3_front() { return exact_front(ZenoSpec::canonical(3)); }

} // namespace

TEST_CASE("nondominated: duplicates, weak dominance, interior points") {
    ParetoFront a = nondominated(std::vector<ObjectivePoint>{pt("8", "12"), pt("8", "12")});
    CHECK(a.points() == std::vector<ObjectivePoint>{pt("8", "12")});

    ParetoFront b = nondominated(std::vector<ObjectivePoint>{pt("8", "12"), pt("9", "12")});
    CHECK(b.points() == std::vector<ObjectivePoint>{pt("8", "12")});

    std::vector<ObjectivePoint> pts = zeno3_front().points();
    pts.push_back(pt("13", "11")); // dominated by (12, 10)
    CHECK(nondominated(pts) == zeno3_front());
}

TEST_CASE("nondominated is idempotent and matches the quadratic filter") {
    Rng rng(424242);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<ObjectivePoint> pts = random_points(rng, static_cast<int>(rng.range(0, 50)));
        ParetoFront fast = nondominated(pts);
        std::vector<ObjectivePoint> slow = brute_nondominated(pts);
        std::sort(slow.begin(), slow.end(), lex_less);
        CHECK(fast.points() == slow);
        CHECK(nondominated(fast.points()) == fast);
    }
}

TEST_CASE("hypervolume: single rectangle, empty front, zeno3 value") {
    ReferencePoint ref{Rat(26), Rat(14)};
    ParetoFront single(std::vector<ObjectivePoint>{pt("8", "12")});
    CHECK(hypervolume_2d(single, ref) == Rat(36));
    CHECK(hypervolume_2d(ParetoFront{}, ref) == Rat(0));
    CHECK(hypervolume_2d(zeno3_front(), ref) == Rat(100));

    ParetoFront outside(std::vector<ObjectivePoint>{pt("30", "2")});
    CHECK_THROWS_AS(hypervolume_2d(outside, ref), std::invalid_argument);
}

TEST_CASE("hypervolume agrees with grid integration on random fronts") {
    Rng rng(7777);
    const ReferencePoint ref{Rat(9), Rat(9)};
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ObjectivePoint> pts = random_points(rng, static_cast<int>(rng.range(1, 50)));
        std::vector<ObjectivePoint> boxed;
        for (const auto& p : pts)
            if (p.makespan <= ref.makespan_bound && p.cost <= ref.cost_bound) boxed.push_back(p);
        ParetoFront front = nondominated(boxed);
        CHECK(hypervolume_2d(front, ref) == grid_hypervolume(boxed, ref));
    }
}

TEST_CASE("unary hypervolume: attainment, emptiness, single missing point") {
    ParetoFront reference = zeno3_front();
    ReferencePoint ref{Rat(26), Rat(14)};
    CHECK(unary_hypervolume(reference.points(), reference, ref) == Rat(0));
    CHECK(unary_hypervolume({}, reference, ref) == hypervolume_2d(reference, ref));

    std::vector<ObjectivePoint> missing;
    for (const auto& p : reference.points())
        if (!(p == pt("12", "10"))) missing.push_back(p);
    // the exclusive rectangle of (12,10) spans to (16, 12)
    CHECK(unary_hypervolume(missing, reference, ref) == Rat(8));

    // far outside points are clipped, contributing nothing
    std::vector<ObjectivePoint> far = {pt("100", "100")};
    CHECK(unary_hypervolume(far, reference, ref) == hypervolume_2d(reference, ref));
}

TEST_CASE("unary hypervolume is monotone in added points") {
    ParetoFront reference = zeno3_front();
    ReferencePoint ref = ReferencePoint::for_front(reference);
    Rng rng(31337);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ObjectivePoint> a;
        for (int i = 0; i < 10; ++i)
            a.push_back({Rat(rng.range(8, 26)), Rat(rng.range(4, 14))});
        Rat before = unary_hypervolume(a, reference, ref);
        a.push_back({Rat(rng.range(8, 26)), Rat(rng.range(4, 14))});
        CHECK(unary_hypervolume(a, reference, ref) <= before);
    }
}

TEST_CASE("default reference point keeps extremes contributing") {
    ParetoFront reference = zeno3_front();
    ReferencePoint ref = ReferencePoint::for_front(reference);
    CHECK(ref.makespan_bound == Rat::parse("25.2")); // 1.05 * 24
    CHECK(ref.cost_bound == Rat::parse("12.6"));     // 1.05 * 12
    CHECK(unary_hypervolume(reference.points(), reference, ref) == Rat(0));
}

TEST_CASE("hitting table: full hit, empty traces, synthetic time") {
    ParetoFront reference = zeno3_front();

    RunTrace full;
    full.snapshots.push_back({Rat(1), 10, Rat(8), reference.points()});
    RunTrace empty;
    RunTrace late;
    late.snapshots.push_back({Rat(2), 5, Rat(9), {}});
    late.snapshots.push_back({Rat::parse("3.5"), 9, Rat(8), {pt("8", "12")}});

    std::vector<TracesOfRun> runs;
    runs.push_back({0, {&full}});
    runs.push_back({1, {&empty}});
    runs.push_back({2, {&late}});
    HittingTable table = hitting_table(runs, reference);

    REQUIRE(table.points.size() == 5);
    for (std::size_t pi = 0; pi < table.points.size(); ++pi) {
        CHECK(table.hits[pi][0].first_hit == Rat(1));
        CHECK_FALSE(table.hits[pi][1].first_hit.has_value());
    }
    CHECK(table.hits[0][2].first_hit == Rat::parse("3.5")); // (8,12) found at 3.5
    CHECK_FALSE(table.hits[1][2].first_hit.has_value());
}

TEST_CASE("wilcoxon: identical samples never reject") {
    std::vector<Rat> x = {Rat(1), Rat(2), Rat(3), Rat(4), Rat(5)};
    WilcoxonResult res = wilcoxon_signed_rank(x, x);
    CHECK(res.p_value == 1.0);
    CHECK_FALSE(res.reject);
    CHECK(res.n_effective == 0);
}

TEST_CASE("wilcoxon: six positive unit differences give exact p of 1/64") {
    std::vector<Rat> x, y;
    for (int i = 1; i <= 6; ++i) {
        x.push_back(Rat(i + 10));
        y.push_back(Rat(10));
    }
    WilcoxonResult res = wilcoxon_signed_rank(x, y);
    CHECK(res.exact);
    CHECK(res.statistic == 0.0); // W- is the smaller sum
    CHECK(res.p_value == doctest::Approx(1.0 / 64));
    CHECK(res.reject);
}

TEST_CASE("wilcoxon: enumeration and approximation agree on clear separation") {
    std::vector<Rat> x, y;
    Rng rng(11);
    for (int i = 0; i < 11; ++i) {
        Rat base(static_cast<std::int64_t>(rng.range(0, 10)));
        x.push_back(base);
        y.push_back(base + Rat(static_cast<std::int64_t>(rng.range(30, 40)), 10));
    }
    WilcoxonResult exact = wilcoxon_signed_rank(x, y);
    WilcoxonResult approx = wilcoxon_signed_rank_forced(x, y, 0.95, true);
    CHECK(exact.exact);
    CHECK_FALSE(approx.exact);
    CHECK(exact.reject);
    CHECK(approx.reject);
    CHECK(exact.reject == approx.reject);
}

TEST_CASE("wilcoxon: ties get average ranks and a corrected variance") {
    std::vector<Rat> x = {Rat(1), Rat(1), Rat(1), Rat(5), Rat(5), Rat(6)};
    std::vector<Rat> y = {Rat(0), Rat(0), Rat(0), Rat(4), Rat(4), Rat(0)};
    WilcoxonResult res = wilcoxon_signed_rank(x, y);
    // |d| = {1,1,1,1,1,6}: the five ties share rank (1+5)/2 = 3
    CHECK(res.w_plus == doctest::Approx(21.0));
    CHECK(res.w_minus == doctest::Approx(0.0));
    WilcoxonResult approx = wilcoxon_signed_rank_forced(x, y, 0.95, true);
    CHECK(approx.p_value > 0.0);
    CHECK(approx.p_value < 0.2);
}

TEST_CASE("wilcoxon rejects unpaired input") {
    std::vector<Rat> x = {Rat(1)};
    std::vector<Rat> y = {Rat(1), Rat(2)};
    CHECK_THROWS_AS(wilcoxon_signed_rank(x, y), std::invalid_argument);
}
