#include "zenoplan/multizeno.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace zenoplan {

bool ZenoSpec::is_canonical_shape() const {
    return planes == 2 && central.size() == 3 && central[0].leg_duration == Rat(2) &&
           central[1].leg_duration == Rat(4) && central[2].leg_duration == Rat(6) &&
           central[0].landing_tax == Rat(3) && central[2].landing_tax == Rat(1);
}

void ZenoSpec::check() const {
    if (passengers <= 0 || passengers % 3 != 0)
        throw std::invalid_argument("ZenoSpec: unsupported passenger count " +
                                    std::to_string(passengers) + " (multiples of 3 only)");
    if (planes < 1) throw std::invalid_argument("ZenoSpec: need at least one plane");
    if (central.empty()) throw std::invalid_argument("ZenoSpec: need at least one central city");
    for (std::size_t i = 0; i < central.size(); ++i) {
        if (!(central[i].landing_tax > Rat(0)))
            throw std::invalid_argument("ZenoSpec: landing taxes must be positive");
        if (!(central[i].leg_duration > Rat(0)))
            throw std::invalid_argument("ZenoSpec: leg durations must be positive");
        if (i > 0 && !(central[i - 1].leg_duration < central[i].leg_duration))
            throw std::invalid_argument("ZenoSpec: leg durations must be strictly increasing");
    }
}

namespace {

struct UniverseLayout {
    int passengers, planes, cities;
    int at_base = 0;
    int in_base;
    int empty_base;

    UniverseLayout(int p, int a, int c) : passengers(p), planes(a), cities(c) {
        in_base = (p + a) * c;
        empty_base = in_base + p * a;
    }
    int size() const { return empty_base + planes; }
    AtomId at(int mobile, int city) const { return at_base + mobile * cities + city; }
    AtomId in(int passenger, int plane) const { return in_base + passenger * planes + plane; }
    AtomId empty(int plane) const { return empty_base + plane; }
};

} // namespace

PlanningTask build_task(const ZenoSpec& spec) {
    spec.check();
    const int n = spec.passengers;
    const int m = spec.planes;
    const int k = static_cast<int>(spec.central.size());
    const int cities = k + 2; // hub0, central 1..k, far hub k+1
    const int far = k + 1;

    PlanningTask task;
    for (int i = 0; i < n; ++i) task.objects.passengers.push_back("p" + std::to_string(i + 1));
    for (int j = 0; j < m; ++j) task.objects.planes.push_back("a" + std::to_string(j + 1));
    for (int c = 0; c < cities; ++c) task.objects.cities.push_back("city" + std::to_string(c));

    UniverseLayout u(n, m, cities);
    task.atoms.reserve(u.size());
    for (int mob = 0; mob < n + m; ++mob)
        for (int c = 0; c < cities; ++c)
            task.atoms.push_back({Pred::At, static_cast<std::int16_t>(mob), static_cast<std::int16_t>(c)});
    for (int p = 0; p < n; ++p)
        for (int j = 0; j < m; ++j)
            task.atoms.push_back({Pred::In, static_cast<std::int16_t>(p), static_cast<std::int16_t>(j)});
    for (int j = 0; j < m; ++j)
        task.atoms.push_back({Pred::Empty, static_cast<std::int16_t>(j), -1});

    auto make_set = [&](std::initializer_list<AtomId> ids) {
        AtomSet s(u.size());
        for (AtomId a : ids) s.set(a);
        return s;
    };
    auto& cities_names = task.objects.cities;

    // fly actions over the star edges; landing in a central city is taxed
    for (int j = 0; j < m; ++j) {
        int plane_mobile = n + j;
        const std::string plane = task.objects.planes[j];
        for (int c = 1; c <= k; ++c) {
            const Rat& dur = spec.central[c - 1].leg_duration;
            const Rat& tax = spec.central[c - 1].landing_tax;
            struct Edge { int from, to; Rat cost; };
            for (const Edge& e : {Edge{0, c, tax}, Edge{c, 0, Rat(0)},
                                  Edge{c, far, Rat(0)}, Edge{far, c, tax}}) {
                Action act;
                act.name = "fly " + plane + " " + cities_names[e.from] + " " + cities_names[e.to];
                act.pre = make_set({u.at(plane_mobile, e.from)});
                act.del = make_set({u.at(plane_mobile, e.from)});
                act.add = make_set({u.at(plane_mobile, e.to)});
                act.duration = dur;
                act.landing_cost = e.cost;
                act.mobiles = {static_cast<std::int16_t>(plane_mobile)};
                task.actions.push_back(std::move(act));
            }
        }
    }
    // zero-duration board/debark; boarding requires the plane to be empty
    for (int p = 0; p < n; ++p)
        for (int j = 0; j < m; ++j)
            for (int c = 0; c < cities; ++c) {
                int plane_mobile = n + j;
                Action board;
                board.name = "board " + task.objects.passengers[p] + " " + task.objects.planes[j] +
                             " " + cities_names[c];
                board.pre = make_set({u.at(p, c), u.at(plane_mobile, c), u.empty(j)});
                board.add = make_set({u.in(p, j)});
                board.del = make_set({u.at(p, c), u.empty(j)});
                board.duration = Rat(0);
                board.landing_cost = Rat(0);
                board.mobiles = {static_cast<std::int16_t>(p), static_cast<std::int16_t>(plane_mobile)};
                task.actions.push_back(std::move(board));

                Action debark;
                debark.name = "debark " + task.objects.passengers[p] + " " + task.objects.planes[j] +
                              " " + cities_names[c];
                debark.pre = make_set({u.in(p, j), u.at(plane_mobile, c)});
                debark.add = make_set({u.at(p, c), u.empty(j)});
                debark.del = make_set({u.in(p, j)});
                debark.duration = Rat(0);
                debark.landing_cost = Rat(0);
                debark.mobiles = {static_cast<std::int16_t>(p), static_cast<std::int16_t>(plane_mobile)};
                task.actions.push_back(std::move(debark));
            }

    task.initial = AtomSet(u.size());
    for (int p = 0; p < n; ++p) task.initial.set(u.at(p, 0));
    for (int j = 0; j < m; ++j) {
        task.initial.set(u.at(n + j, 0));
        task.initial.set(u.empty(j));
    }
    task.goal = AtomSet(u.size());
    for (int p = 0; p < n; ++p) task.goal.set(u.at(p, far));

    task.finalize();
    return task;
}

namespace {

int action_index(const PlanningTask& task, const std::string& name) {
    for (std::size_t i = 0; i < task.actions.size(); ++i)
        if (task.actions[i].name == name) return static_cast<int>(i);
    throw std::invalid_argument("no such action: " + name);
}

} // namespace

Plan composed_shuttle_plan(const PlanningTask& task, const ZenoSpec& spec,
                           const std::vector<int>& bunch_cities,
                           const std::vector<std::pair<int, int>>& return_cities) {
    const int bunches = spec.passengers / 3;
    if (static_cast<int>(bunch_cities.size()) != bunches ||
        static_cast<int>(return_cities.size()) != bunches - 1)
        throw std::invalid_argument("composed_shuttle_plan: need one city per bunch and one "
                                    "return pair per gap");
    if (spec.planes != 2)
        throw std::invalid_argument("composed_shuttle_plan: needs exactly two planes");
    auto central_name = [&](int index) {
        if (index < 1 || index > static_cast<int>(spec.central.size()))
            throw std::invalid_argument("composed_shuttle_plan: central city index out of range");
        return "city" + std::to_string(index);
    };
    const std::string hub = "city0";
    const std::string far = "city" + std::to_string(spec.central.size() + 1);
    const std::string a1 = "a1", a2 = "a2";

    Plan plan;
    Rat clock(0);
    auto emit = [&](const std::string& name) {
        int idx = action_index(task, name);
        plan.steps.push_back({idx, clock});
        clock += task.actions[idx].duration;
        plan.total_cost += task.actions[idx].landing_cost;
    };

    for (int b = 0; b < bunches; ++b) {
        const std::string c = central_name(bunch_cities[b]);
        if (b > 0) {
            // both planes reposition from the far hub for the next bunch
            const std::string r1 = central_name(return_cities[b - 1].first);
            const std::string r2 = central_name(return_cities[b - 1].second);
            emit("fly " + a1 + " " + far + " " + r1);
            emit("fly " + a1 + " " + r1 + " " + hub);
            emit("fly " + a2 + " " + far + " " + r2);
            emit("fly " + a2 + " " + r2 + " " + hub);
        }
        const std::string p1 = "p" + std::to_string(3 * b + 1);
        const std::string p2 = "p" + std::to_string(3 * b + 2);
        const std::string p3 = "p" + std::to_string(3 * b + 3);
        // relay: a1 drops p1 at the central city and goes back for p3 while
        // a2 delivers p2, returns, and carries p1 the rest of the way
        emit("board " + p1 + " " + a1 + " " + hub);
        emit("fly " + a1 + " " + hub + " " + c);
        emit("debark " + p1 + " " + a1 + " " + c);
        emit("board " + p2 + " " + a2 + " " + hub);
        emit("fly " + a2 + " " + hub + " " + c);
        emit("fly " + a1 + " " + c + " " + hub);
        emit("fly " + a2 + " " + c + " " + far);
        emit("debark " + p2 + " " + a2 + " " + far);
        emit("board " + p3 + " " + a1 + " " + hub);
        emit("fly " + a1 + " " + hub + " " + c);
        emit("fly " + a2 + " " + far + " " + c);
        emit("board " + p1 + " " + a2 + " " + c);
        emit("fly " + a2 + " " + c + " " + far);
        emit("debark " + p1 + " " + a2 + " " + far);
        emit("fly " + a1 + " " + c + " " + far);
        emit("debark " + p3 + " " + a1 + " " + far);
    }
    plan.makespan = clock;
    return plan;
}

Plan shuttle_plan(const PlanningTask& task, const ZenoSpec& spec, int city_index) {
    const int bunches = spec.passengers / 3;
    std::vector<int> cities(bunches, city_index);
    std::vector<std::pair<int, int>> returns(bunches - 1, {city_index, city_index});
    return composed_shuttle_plan(task, spec, cities, returns);
}

PddlDocuments export_pddl(const ZenoSpec& spec) {
    spec.check();
    const int k = static_cast<int>(spec.central.size());
    const int far = k + 1;
    auto city = [](int c) { return "city" + std::to_string(c); };

    std::ostringstream dom;
    dom << "(define (domain multizeno)\n"
        << "  (:requirements :strips :typing :durative-actions :numeric-fluents)\n"
        << "  (:types aircraft person - locatable city - object locatable - object)\n"
        << "  (:predicates (at ?x - locatable ?c - city)\n"
        << "               (in ?p - person ?a - aircraft)\n"
        << "               (empty ?a - aircraft)\n"
        << "               (connected ?c1 ?c2 - city))\n"
        << "  (:functions (total-cost)\n"
        << "              (flight-time ?c1 ?c2 - city)\n"
        << "              (landing-tax ?c - city))\n"
        << "  (:durative-action fly\n"
        << "    :parameters (?a - aircraft ?from ?to - city)\n"
        << "    :duration (= ?duration (flight-time ?from ?to))\n"
        << "    :condition (and (at start (at ?a ?from)) (at start (connected ?from ?to)))\n"
        << "    :effect (and (at start (not (at ?a ?from)))\n"
        << "                 (at end (at ?a ?to))\n"
        << "                 (at end (increase (total-cost) (landing-tax ?to)))))\n"
        << "  (:durative-action board\n"
        << "    :parameters (?p - person ?a - aircraft ?c - city)\n"
        << "    :duration (= ?duration 0)\n"
        << "    :condition (and (at start (at ?p ?c)) (at start (at ?a ?c)) (at start (empty ?a)))\n"
        << "    :effect (and (at start (not (at ?p ?c))) (at start (not (empty ?a)))\n"
        << "                 (at end (in ?p ?a))))\n"
        << "  (:durative-action debark\n"
        << "    :parameters (?p - person ?a - aircraft ?c - city)\n"
        << "    :duration (= ?duration 0)\n"
        << "    :condition (and (at start (in ?p ?a)) (over all (at ?a ?c)))\n"
        << "    :effect (and (at start (not (in ?p ?a)))\n"
        << "                 (at end (at ?p ?c)) (at end (empty ?a))))\n"
        << ")\n";

    std::ostringstream prob;
    prob << "(define (problem multizeno-" << spec.passengers << ")\n"
         << "  (:domain multizeno)\n"
         << "  (:objects";
    for (int p = 1; p <= spec.passengers; ++p) prob << " p" << p;
    prob << " - person\n           ";
    for (int j = 1; j <= spec.planes; ++j) prob << " a" << j;
    prob << " - aircraft\n           ";
    for (int c = 0; c <= far; ++c) prob << " " << city(c);
    prob << " - city)\n"
         << "  (:init\n";
    for (int p = 1; p <= spec.passengers; ++p) prob << "    (at p" << p << " city0)\n";
    for (int j = 1; j <= spec.planes; ++j)
        prob << "    (at a" << j << " city0) (empty a" << j << ")\n";
    prob << "    (= (total-cost) 0)\n";
    for (int c = 1; c <= k; ++c) {
        const Rat& d = spec.central[c - 1].leg_duration;
        const Rat& tax = spec.central[c - 1].landing_tax;
        prob << "    (connected city0 " << city(c) << ") (connected " << city(c) << " city0)\n"
             << "    (connected " << city(c) << " " << city(far) << ") (connected " << city(far)
             << " " << city(c) << ")\n"
             << "    (= (flight-time city0 " << city(c) << ") " << d.to_string() << ")"
             << " (= (flight-time " << city(c) << " city0) " << d.to_string() << ")\n"
             << "    (= (flight-time " << city(c) << " " << city(far) << ") " << d.to_string() << ")"
             << " (= (flight-time " << city(far) << " " << city(c) << ") " << d.to_string() << ")\n"
             << "    (= (landing-tax " << city(c) << ") " << tax.to_string() << ")\n";
    }
    prob << "    (= (landing-tax city0) 0) (= (landing-tax " << city(far) << ") 0)\n"
         << "  )\n"
         << "  (:goal (and";
    for (int p = 1; p <= spec.passengers; ++p) prob << " (at p" << p << " " << city(far) << ")";
    prob << "))\n"
         << "  (:metric minimize (total-cost))\n"
         << ")\n";

    return {dom.str(), prob.str()};
}

} // namespace zenoplan
