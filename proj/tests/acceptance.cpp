// Acceptance checks.  One PASS/FAIL line per criterion; `--only N` runs one.
// Exit status is non-zero when any selected criterion fails.

#include "waitnet/oracle.hpp"
#include "waitnet/scta.hpp"
#include "waitnet/semantics.hpp"
#include "waitnet/stateclass.hpp"
#include "waitnet/textio.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace waitnet;

namespace {

using Clock = std::chrono::steady_clock;

Net fixture(const std::string& name) { return load_net(std::string(NETS_DIR) + "/" + name + ".wnet"); }

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        notes.push_back(what + (ok ? " ok" : " FAILED"));
    }
};

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt_ms(double ms) {
    std::ostringstream os;
    os.precision(ms < 10 ? 2 : 0);
    os << std::fixed << ms << " ms";
    return os.str();
}

FiringDomain domain(std::vector<std::tuple<int, Rational, Bound>> bounds,
                    std::vector<std::tuple<int, int, Rational>> diffs = {}) {
    std::vector<int> vars;
    for (auto& [v, lo, hi] : bounds) vars.push_back(v);
    FiringDomain d(vars);
    for (auto& [v, lo, hi] : bounds) {
        d = add_constraint(d, kZero, v, Bound(-lo));
        d = add_constraint(d, v, kZero, hi);
    }
    for (auto& [a, b, c] : diffs) d = add_constraint(d, a, b, Bound(c));
    return canonical(d);
}

int target_of(const StateClassGraph& g, int source, const std::string& interval) {
    for (int e : g.out[source])
        if (format_interval(g.edges[e].lo, g.edges[e].hi) == interval) return g.edges[e].target;
    return -1;
}

// Race net: classes, edges, three domains and the Cl0 intervals.
Outcome criterion1() {
    Outcome o;
    auto t0 = Clock::now();
    Net n = fixture("race");
    StateClassGraph g = build_scg(n);
    double ms = ms_since(t0);
    int t1 = n.find_transition("t1"), t2 = n.find_transition("t2");
    Rational z(0);

    o.check(g.classes.size() == 8, "classes " + std::to_string(g.classes.size()) + " == 8");
    o.check(g.edges.size() == 7, "edges " + std::to_string(g.edges.size()) + " == 7");

    std::vector<std::string> ivs;
    for (int e : g.out[0]) ivs.push_back(format_interval(g.edges[e].lo, g.edges[e].hi));
    o.check(ivs == std::vector<std::string>{"[0,3]", "[3,6]", "[6,inf)"}, "Cl0 intervals [0,3] [3,6] [6,inf)");

    int c1 = target_of(g, 0, "[0,3]"), c2 = target_of(g, 0, "[3,6]"), c3 = target_of(g, 0, "[6,inf)");
    auto same = [&](int c, const FiringDomain& want) {
        return c >= 0 && g.classes[c].timed_out.empty() && g.classes[c].domain == want;
    };
    o.check(same(c1, domain({{t1, z, Bound(3)}, {t2, Rational(2), Bound(6)}},
                            {{t1, t2, Rational(-2)}, {t2, t1, Rational(6)}})),
            "Cl1 {0<=t1<=3, 2<=t2<=6, t1-t2<=-2, t2-t1<=6}");
    o.check(same(c2, domain({{t1, z, Bound(0)}, {t2, Rational(2), Bound(3)}})), "Cl2 {t1=0, 2<=t2<=3}");
    o.check(same(c3, domain({{t1, z, Bound(0)}, {t2, z, Bound(0)}})), "Cl3 {t1=0, t2=0}");
    o.check(ms < 1000, "runtime " + fmt_ms(ms) + " < 1000 ms");
    return o;
}

// Longest number of t1 edges on a path from the initial class that uses no
// t2 edge; -1 when a t1 edge lies on a reachable t2-free cycle.
long max_t1_before_t2(const StateClassGraph& g, int t1, int t2) {
    std::size_t n = g.classes.size();
    std::vector<long> best(n, -1);
    best[0] = 0;
    for (std::size_t round = 0; round <= n; ++round) {
        bool changed = false;
        for (const auto& e : g.edges) {
            if (e.transition == t2 || best[e.source] < 0) continue;
            long v = best[e.source] + (e.transition == t1 ? 1 : 0);
            if (v > best[e.target]) {
                best[e.target] = v;
                changed = true;
            }
        }
        if (!changed) return *std::max_element(best.begin(), best.end());
    }
    return -1;
}

Outcome criterion2() {
    Outcome o;
    auto t0 = Clock::now();
    Net n = fixture("alternator");
    StateClassGraph g = build_scg(n);
    long streak = max_t1_before_t2(g, n.find_transition("t1"), n.find_transition("t2"));
    double ms = ms_since(t0);
    o.check(g.classes.size() == 44, "classes " + std::to_string(g.classes.size()) + " == 44");
    o.check(streak == 5, "t1 streak before first t2 " + std::to_string(streak) + " == 5");
    o.check(ms < 5000, "runtime " + fmt_ms(ms) + " < 5000 ms");
    return o;
}

Outcome criterion3() {
    Outcome o;
    Net n = fixture("offer");
    StateClassGraph g = build_scg(n);
    std::set<Marking> got, want;
    for (const auto& c : g.classes) got.insert(c.marking);
    for (const char* m : {"p0=1", "p1=1,p2=1", "p1=1,p3=1", "p5=1,p3=1", "p4=1", "p2=1,p5=1"})
        want.insert(parse_marking_spec(n, m));
    std::string listed;
    for (const auto& m : got) listed += " " + format_marking(n, m);
    o.check(got == want, std::to_string(got.size()) + " reachable markings:" + listed);
    return o;
}

Outcome criterion4() {
    Outcome o;
    Net n = fixture("deadline20");
    int t0 = n.find_transition("t0"), t1 = n.find_transition("t1");
    TimedAutomaton ta = build_scta(n);
    auto grid = delay_grid(Rational(25), {2});
    bool runs_ok = true, accept_ok = true, reject_ok = true;
    for (int k = 0; k <= 40; ++k) {
        Rational d0(k, 2);
        Configuration c = discrete_move(n, timed_move(n, initial_configuration(n), d0), t0);
        // Dates at which t1 can complete the run, over the delay grid.
        std::set<Rational> dates;
        for (const auto& d : grid) {
            Configuration later;
            try {
                later = timed_move(n, c, d);
            } catch (const UrgencyViolation&) {
                continue;
            }
            if (can_fire(n, later, t1)) dates.insert(d0 + d);
        }
        runs_ok = runs_ok && dates == std::set<Rational>{Rational(20)};
        Configuration end = discrete_move(n, timed_move(n, c, Rational(20) - d0), t1);
        runs_ok = runs_ok && fully_enabled(n, end.marking).empty();
        accept_ok = accept_ok && ta_accepts(ta, {{"t0", d0}, {"t1", Rational(20)}});
        reject_ok = reject_ok && !ta_accepts(ta, {{"t0", d0}, {"t1", Rational(19)}});
    }
    o.check(runs_ok, "t1 fires at date 20 for all d0 in {0,1/2,...,20}");
    o.check(accept_ok, "automaton accepts (t0,d0)(t1,20)");
    o.check(reject_ok, "automaton rejects (t0,d0)(t1,19)");
    return o;
}

Outcome criterion5() {
    Outcome o;
    Net n = fixture("kernel");
    int t0 = n.find_transition("t0"), t1 = n.find_transition("t1");
    FiringDomain d0 = initial_class(n).domain;
    bool unsat = false;
    try {
        canonical(add_constraint(d0, t1, t0, Bound(0)));
    } catch (const Unsatisfiable&) {
        unsat = true;
    }
    o.check(unsat, "D0 + {t1 <= t0} unsatisfiable");
    bool sat = satisfiable(d0);
    o.check(sat, "D0 satisfiable");
    o.check(sat && canonical(canonical(d0)) == canonical(d0), "canonical idempotent");
    return o;
}

Outcome criterion6() {
    Outcome o;
    auto t0 = Clock::now();
    FuzzSummary s = fuzz(RandomNetSpec{}, FuzzOptions{});
    double ms = ms_since(t0);
    o.check(s.trials == 1000, "trials " + std::to_string(s.trials) + " (" + std::to_string(s.skipped) +
                                  " skipped by limits, " + std::to_string(s.classes) + " classes)");
    o.check(s.failures_of("lemma") == 0, "(a) lemma ranges");
    o.check(s.failures_of("completeness") == 0, "(b) completeness over " + std::to_string(s.runs) + " runs");
    o.check(s.failures_of("soundness") == 0, "(c) soundness over " + std::to_string(s.paths) + " paths");
    o.check(s.failures_of("determinism") == 0,
            "(d) determinism over " + std::to_string(s.determinism_checks) + " control-free nets");
    o.check(s.failures_of("fm") == 0, "(e) Fourier-Motzkin on " + std::to_string(s.fm_systems) + " systems");
    for (std::size_t i = 0; i < s.failures.size() && i < 5; ++i)
        o.notes.push_back("  " + s.failures[i].check + " seed " + std::to_string(s.failures[i].seed) + ": " +
                          s.failures[i].detail);
    o.check(ms < 120000, "runtime " + fmt_ms(ms) + " < 120000 ms");
    return o;
}

// Syntactic scan, written independently of shape_violations.
Outcome criterion7() {
    Outcome o;
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(NETS_DIR))
        if (e.path().extension() == ".wnet") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    int built = 0;
    for (const auto& f : files) {
        Net n = load_net(f.string());
        TimedAutomaton ta;
        try {
            ta = build_scta(n);
        } catch (const BoundExceeded&) {
            o.notes.push_back(f.stem().string() + " unbounded, no automaton");
            continue;
        }
        ++built;
        bool ok = ta.clocks <= static_cast<int>(n.size()) + 1;
        ok = ok && ta.accepting.size() == ta.locations.size();
        for (bool a : ta.accepting) ok = ok && a;
        for (const auto& e : ta.edges)
            for (const auto& a : e.guard) ok = ok && a.cmp == Cmp::Ge && a.clock >= 0 && a.clock < ta.clocks;
        for (const auto& l : ta.locations)
            for (const auto& a : l.invariant) ok = ok && a.cmp == Cmp::Le && a.clock >= 0 && a.clock < ta.clocks;
        for (const auto& e : ta.edges)
            for (int r : e.resets) ok = ok && r >= 0 && r < ta.clocks;
        ok = ok && shape_violations(n, ta).empty();
        o.check(ok, f.stem().string() + " (" + std::to_string(ta.locations.size()) + " locations, " +
                        std::to_string(ta.clocks) + " clocks)");
    }
    o.check(built > 0, std::to_string(built) + " automata");
    return o;
}

const char* kTitles[] = {
    "",
    "race net state class graph",
    "alternating net state class graph",
    "job offer reachable markings",
    "deadline language",
    "kernel domain canonical form",
    "property suite",
    "automaton shape",
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--only" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--only N]\n";
            return 2;
        }
    }
    std::vector<std::function<Outcome()>> criteria{nullptr,    criterion1, criterion2, criterion3,
                                                   criterion4, criterion5, criterion6, criterion7};
    if (only < 0 || only >= static_cast<int>(criteria.size())) {
        std::cerr << "no criterion " << only << "\n";
        return 2;
    }
    bool all = true;
    for (int k = 1; k < static_cast<int>(criteria.size()); ++k) {
        if (only && k != only) continue;
        Outcome o;
        try {
            o = criteria[k]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.notes.push_back(std::string("exception: ") + e.what());
        }
        all = all && o.pass;
        std::cout << "criterion " << k << " " << (o.pass ? "PASS" : "FAIL") << ": " << kTitles[k] << "\n";
        for (const auto& n : o.notes) std::cout << "    " << n << "\n";
    }
    return all ? 0 : 1;
}
