#include "doctest.h"
#include "helpers.hpp"

#include "waitnet/oracle.hpp"
#include "waitnet/semantics.hpp"

using namespace waitnet;

namespace {

std::vector<Rational> small_grid() { return delay_grid(Rational(6), {1, 2, 3}); }

}  // namespace

TEST_CASE("initial configuration starts every enabled clock at zero") {
    Net n = fixture("race");
    Configuration c = initial_configuration(n);
    for (int t = 0; t < 3; ++t) CHECK(c.clocks[t] == Rational(0));

    Net offer = fixture("offer");
    Configuration o = initial_configuration(offer);
    CHECK(o.clocks[tid(offer, "Ad")] == Rational(0));
    CHECK_FALSE(o.clocks[tid(offer, "So")].has_value());
}

TEST_CASE("waiting clocks saturate at beta") {
    Net n = fixture("race");
    Configuration c = timed_move(n, initial_configuration(n), Rational(4));
    CHECK(c.clocks[tid(n, "t0")] == Rational(4));
    CHECK(c.clocks[tid(n, "t1")] == Rational(3));
    CHECK(c.clocks[tid(n, "t2")] == Rational(4));

    Configuration later = timed_move(n, c, Rational(10));
    CHECK(later.clocks[tid(n, "t1")] == Rational(3));
    CHECK(later.clocks[tid(n, "t2")] == Rational(6));
}

TEST_CASE("a saturated transition that becomes fully enabled is urgent") {
    Net n = fixture("race");
    Configuration c = timed_move(n, initial_configuration(n), Rational(4));
    c = discrete_move(n, c, tid(n, "t0"));
    CHECK(c.clocks[tid(n, "t1")] == Rational(3));
    CHECK(max_delay(n, c) == Rational(0));
    CHECK_THROWS_AS(timed_move(n, c, R(1, 10)), UrgencyViolation);
    CHECK(can_fire(n, c, tid(n, "t1")));
    CHECK_FALSE(can_fire(n, c, tid(n, "t2")));
    Configuration end = discrete_move(n, c, tid(n, "t1"));
    CHECK(format_marking(n, end.marking) == "{p3,p4}.{}");
}

TEST_CASE("discrete move errors") {
    Net n = fixture("race");
    Configuration c0 = initial_configuration(n);
    CHECK_THROWS_AS(discrete_move(n, c0, tid(n, "t1")), NotFullyEnabled);

    Net k = fixture("kernel");
    CHECK_THROWS_AS(discrete_move(k, initial_configuration(k), tid(k, "t0")), ClockOutOfInterval);
    CHECK_THROWS_AS(timed_move(k, initial_configuration(k), Rational(-1)), Error);
}

TEST_CASE("alternator words") {
    Net n = fixture("alternator");
    int t1 = tid(n, "t1"), t2 = tid(n, "t2"), tc3 = tid(n, "tc3"), tc4 = tid(n, "tc4");

    Run run = replay(n, {{R(1), t1}, {R(1), t1}, {R(0), tc3}, {R(1, 2), t2}});
    TimedWord w = timed_word_of(n, run);
    TimedWord expect{{"t1", R(1)}, {"t1", R(2)}, {"tc3", R(2)}, {"t2", R(5, 2)}};
    CHECK(w == expect);
    CHECK(net_accepts(n, w));

    // tc3 is fully enabled from date 0 with interval [2,2], so it cannot wait
    // until date 3.
    CHECK_FALSE(net_accepts(n, {{"t1", R(1)}, {"t1", R(2)}, {"tc3", R(3)}, {"t2", R(16, 5)}}));

    // The clock of t1 keeps running while c3 is away.
    Run r2 = replay(n, {{R(1), t1}, {R(1), t1}, {R(0), tc3}, {R(1), tc4}, {R(0), t1}, {R(1), t1}, {R(1), t1}});
    CHECK(timed_word_of(n, r2).back() == TimedEvent{"t1", R(5)});
}

TEST_CASE("epsilon events are hidden from timed words") {
    Net n = fixture("ta_split_eps");
    Run run = replay(n, {{R(0), tid(n, "t2")}, {R(5, 2), tid(n, "t3")}});
    CHECK(timed_word_of(n, run) == TimedWord{{"a", R(5, 2)}});
    CHECK(timed_word_of(n, run, true).size() == 2);
    CHECK_THROWS_AS(net_accepts(n, {}), Error);
}

TEST_CASE("deadline: t1 fires at date 20 whatever the date of t0") {
    Net n = fixture("deadline20");
    int t0 = tid(n, "t0"), t1 = tid(n, "t1");
    for (int k = 0; k <= 40; ++k) {
        Rational d0(k, 2);
        Configuration c = discrete_move(n, timed_move(n, initial_configuration(n), d0), t0);
        CHECK(max_delay(n, c) == Rational(20) - d0);
        CHECK(can_fire(n, timed_move(n, c, Rational(20) - d0), t1));
        if (d0 <= Rational(19)) CHECK_FALSE(can_fire(n, timed_move(n, c, Rational(19) - d0), t1));
    }
}

TEST_CASE("delay grid") {
    auto g = delay_grid(Rational(1), {2, 3});
    std::vector<Rational> expect{R(0), R(1, 3), R(1, 2), R(2, 3), R(1)};
    CHECK(g == expect);
}

TEST_CASE("random runs are reproducible and legal") {
    Net n = fixture("offer_expiry");
    Run a = random_run(n, 42, 8, small_grid());
    Run b = random_run(n, 42, 8, small_grid());
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i) CHECK(a.steps[i].result == b.steps[i].result);
    CHECK(random_run(n, 42, 0, small_grid()).steps.empty());

    std::vector<std::pair<Rational, int>> moves;
    for (const auto& s : a.steps) moves.emplace_back(s.delay, s.transition);
    CHECK(replay(n, moves).last() == a.last());
}

TEST_CASE("property: time additivity, continuity and the clock invariants") {
    RandomNetSpec spec;
    auto grid = small_grid();
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
        Net n = random_net(spec, seed);
        Run run = random_run(n, seed * 7 + 1, 6, grid);
        std::vector<Configuration> configs{run.initial};
        for (const auto& s : run.steps) configs.push_back(s.result);
        for (const auto& c : configs) {
            for (std::size_t t = 0; t < n.size(); ++t) {
                bool en = is_enabled(n, c.marking, static_cast<int>(t));
                CHECK(c.clocks[t].has_value() == en);
                if (en) CHECK(Bound(*c.clocks[t]) <= n.transitions[t].beta);
            }
            auto cap = max_delay(n, c);
            for (int a = 0; a <= 4; ++a)
                for (int b = 0; b <= 4; ++b) {
                    Rational d1(a, 2), d2(b, 3);
                    if (cap && d1 + d2 > *cap) {
                        CHECK_THROWS_AS(timed_move(n, c, d1 + d2), UrgencyViolation);
                        continue;
                    }
                    CHECK(timed_move(n, timed_move(n, c, d1), d2) == timed_move(n, c, d1 + d2));
                }
            CHECK(timed_move(n, c, Rational(0)) == c);
        }
    }
}
