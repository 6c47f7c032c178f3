#include "doctest.h"
#include "helpers.hpp"

#include "waitnet/oracle.hpp"
#include "waitnet/scta.hpp"

#include <random>

using namespace waitnet;

TEST_CASE("deadline automaton fires t1 at date 20") {
    Net n = fixture("deadline20");
    TimedAutomaton ta = build_scta(n);
    for (int k = 0; k <= 40; k += 3) {
        Rational d0(k, 2);
        CAPTURE(to_string(d0));
        CHECK(ta_accepts(ta, {{"t0", d0}, {"t1", R(20)}}));
        CHECK_FALSE(ta_accepts(ta, {{"t0", d0}, {"t1", R(19)}}));
        CHECK_FALSE(ta_accepts(ta, {{"t0", d0}, {"t1", R(41, 2)}}));
    }
    CHECK_FALSE(ta_accepts(ta, {{"t0", R(21)}}));
    CHECK(ta_accepts(ta, {}));
}

TEST_CASE("race automaton has an urgent location for t1") {
    Net n = fixture("race");
    TimedAutomaton ta = build_scta(n);
    int t1 = tid(n, "t1");
    bool found = false;
    for (const auto& loc : ta.locations) {
        if (!contains(loc.urgent, t1)) continue;
        int x = loc.clock_of(t1);
        REQUIRE(x >= 0);
        for (const auto& a : loc.invariant)
            if (a.clock == x && a.cmp == Cmp::Le && a.bound == Rational(0)) found = true;
    }
    CHECK(found);
    // t0 at 4 leaves t1 saturated: it must follow immediately.
    CHECK(ta_accepts(ta, {{"t0", R(4)}, {"t1", R(4)}}));
    CHECK_FALSE(ta_accepts(ta, {{"t0", R(4)}, {"t1", R(5)}}));
    CHECK(ta_accepts(ta, {{"t0", R(1)}, {"t1", R(3)}}));
    CHECK_FALSE(ta_accepts(ta, {{"t0", R(1)}, {"t2", R(6)}}));
    CHECK(ta_accepts(ta, {{"t0", R(7)}, {"t2", R(7)}}));
}

TEST_CASE("a lone transition becomes one guarded edge") {
    Net n = parse_net("net one\nplace p init 1\nplace q\ntrans a interval [2,5]\narc p -> a\narc a -> q\n");
    TimedAutomaton ta = build_scta(n);
    CHECK(ta.locations.size() == 2);
    REQUIRE(ta.edges.size() == 1);
    REQUIRE(ta.edges[0].guard.size() == 1);
    CHECK(ta.edges[0].guard[0].cmp == Cmp::Ge);
    CHECK(ta.edges[0].guard[0].bound == Rational(2));
    REQUIRE(ta.locations[ta.initial].invariant.size() == 1);
    CHECK(ta.locations[ta.initial].invariant[0].bound == Rational(5));
    CHECK(ta_accepts(ta, {{"a", R(2)}}));
    CHECK(ta_accepts(ta, {{"a", R(5)}}));
    CHECK_FALSE(ta_accepts(ta, {{"a", R(11, 2)}}));
}

TEST_CASE("silent edges") {
    Net n = fixture("ta_split_eps");
    TimedAutomaton ta = build_scta(n);
    CHECK(ta_accepts(ta, {{"a", R(2)}}));
    CHECK(ta_accepts(ta, {{"a", R(3)}}));
    CHECK(ta_accepts(ta, {{"b", R(4)}}));
    CHECK_FALSE(ta_accepts(ta, {{"a", R(4)}}));
    CHECK_FALSE(ta_accepts(ta, {{"b", R(3)}}));
    CHECK_THROWS_AS(ta_accepts(ta, {{"a", R(2)}}, 0), SearchBudgetExceeded);
}

TEST_CASE("repeated labels") {
    Net n = fixture("noninjective");
    TimedAutomaton ta = build_scta(n);
    CHECK(ta_accepts(ta, {{"a", R(0)}, {"b", R(4)}}));
    CHECK(ta_accepts(ta, {{"a", R(1)}, {"b", R(9)}}));
    CHECK_FALSE(ta_accepts(ta, {{"a", R(0)}, {"b", R(6)}}));
    CHECK_FALSE(ta_accepts(ta, {{"b", R(4)}}));
}

TEST_CASE("automaton shape on every bounded fixture") {
    for (const auto& name : bounded_fixtures()) {
        CAPTURE(name);
        Net n = fixture(name);
        TimedAutomaton ta = build_scta(n);
        CHECK(shape_violations(n, ta).empty());
        CHECK(ta.clocks <= static_cast<int>(n.size()) + 1);
        for (bool acc : ta.accepting) CHECK(acc);
    }
}

TEST_CASE("property: the automaton and the net accept the same words") {
    RandomNetSpec spec;
    spec.max_transitions = 3;
    auto grid = delay_grid(Rational(5), {1, 2});
    std::mt19937_64 rng(99);
    int compared = 0;
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
        Net n = random_net(spec, seed);
        TimedAutomaton ta;
        try {
            ta = build_scta(n, {3, 2000, 1});
        } catch (const BoundExceeded&) {
            continue;
        } catch (const ClassBudgetExceeded&) {
            continue;
        }
        for (int r = 0; r < 6; ++r) {
            Run run = random_run(n, seed * 31 + r, 3, grid);
            TimedWord w = timed_word_of(n, run);
            CAPTURE(print_net(n));
            CHECK(ta_accepts(ta, w));
            if (w.empty()) continue;
            // Perturb one date.
            std::size_t i = rng() % w.size();
            Rational shift = Rational(static_cast<long>(rng() % 5) - 2, 2);
            if (w[i].date + shift < Rational(0)) continue;
            w[i].date += shift;
            bool sorted = true;
            for (std::size_t k = 1; k < w.size(); ++k) sorted = sorted && w[k - 1].date <= w[k].date;
            if (!sorted) continue;
            CHECK(ta_accepts(ta, w) == net_accepts(n, w));
            ++compared;
        }
    }
    CHECK(compared > 100);
}
