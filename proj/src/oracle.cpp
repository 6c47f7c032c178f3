#include "waitnet/oracle.hpp"

#include "json.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>

namespace waitnet {

bool compatible(const Net& net, const Configuration& c, const StateClass& cls) {
    if (c.marking != cls.marking) return false;
    FiringDomain d = cls.domain;
    for (int t : cls.timed_out) {
        if (d.has(t)) return false;
        d = add_variable(std::move(d), t, Rational(0), Bound(0));
    }
    for (std::size_t u = 0; u < net.size(); ++u) {
        int t = static_cast<int>(u);
        if (!c.clocks[u]) {
            if (d.has(t)) return false;
            continue;
        }
        if (!d.has(t)) return false;
        const auto& tr = net.transitions[u];
        Rational v = *c.clocks[u];
        Rational lo = std::max(Rational(0), tr.alpha - v);
        d = add_constraint(std::move(d), kZero, t, Bound(-lo));
        d = add_constraint(std::move(d), t, kZero, tr.beta - v);
    }
    return satisfiable(d);
}

CoincidenceReport check_completeness(const Net& net, const StateClassGraph& g, const Run& run) {
    CoincidenceReport rep;
    if (g.classes.empty() || !compatible(net, run.initial, g.classes[0])) {
        rep.reason = "initial configuration not in the initial class";
        return rep;
    }
    std::vector<int> path{0}, edges;
    std::size_t deepest = 0;
    std::function<bool(std::size_t)> dfs = [&](std::size_t k) {
        deepest = std::max(deepest, k);
        if (k == run.steps.size()) return true;
        const Step& s = run.steps[k];
        for (int e : g.out[path.back()]) {
            const ScgEdge& ed = g.edges[e];
            if (ed.transition != s.transition) continue;
            if (s.delay < ed.lo || Bound(s.delay) > ed.hi) continue;
            if (!compatible(net, s.result, g.classes[ed.target])) continue;
            path.push_back(ed.target);
            edges.push_back(e);
            if (dfs(k + 1)) return true;
            path.pop_back();
            edges.pop_back();
        }
        return false;
    };
    if (dfs(0)) {
        rep.ok = true;
        rep.path = path;
        rep.edges = edges;
    } else {
        rep.reason = "no coinciding edge for step " + std::to_string(deepest) + " (" +
                     net.transitions[run.steps[deepest].transition].id + " after " +
                     to_string(run.steps[deepest].delay) + ")";
    }
    return rep;
}

namespace {

// One enabling of a transition: alive over steps start+1 .. end.
struct Instance {
    int t;
    int start;
    int end = -1;
    bool fired = false;
    std::vector<bool> full;  // per alive step, fully enabled before it
    std::vector<int> boundaries;  // steps where it turns fully enabled after waiting
};

}  // namespace

Run check_soundness(const Net& net, const StateClassGraph& g, const std::vector<int>& edge_path) {
    int n = static_cast<int>(edge_path.size());
    std::vector<Marking> ms{g.classes.at(0).marking};
    std::vector<int> ts;
    int cur = 0;
    for (int e : edge_path) {
        const ScgEdge& ed = g.edges.at(static_cast<std::size_t>(e));
        if (ed.source != cur) throw RealizationFailed("edge path is not connected");
        ts.push_back(ed.transition);
        ms.push_back(g.classes[ed.target].marking);
        cur = ed.target;
    }

    std::vector<Instance> insts;
    std::map<int, int> alive;  // transition -> instance
    for (int t : enabled(net, ms[0])) {
        alive[t] = static_cast<int>(insts.size());
        insts.push_back({t, 0, -1, false, {}, {}});
    }
    for (int k = 1; k <= n; ++k) {
        const Marking& m = ms[k - 1];
        int f = ts[k - 1];
        if (!alive.count(f) || !is_fully_enabled(net, m, f))
            throw RealizationFailed("transition " + net.transitions[f].id + " not fully enabled at step " +
                                    std::to_string(k));
        for (auto& [t, i] : alive) {
            auto& in = insts[i];
            bool full = is_fully_enabled(net, m, t);
            if (full && !in.full.empty() && !in.full.back()) in.boundaries.push_back(k);
            in.full.push_back(full);
        }
        Marking mid = intermediate_marking(net, m, f);
        TransitionSet fresh = newly_enabled(net, m, f);
        for (auto it = alive.begin(); it != alive.end();) {
            int t = it->first;
            if (t == f || !is_enabled(net, mid, t) || contains(fresh, t)) {
                insts[it->second].end = k;
                insts[it->second].fired = t == f;
                it = alive.erase(it);
            } else {
                ++it;
            }
        }
        for (int t : fresh) {
            alive[t] = static_cast<int>(insts.size());
            insts.push_back({t, k, -1, false, {}, {}});
        }
    }
    for (auto& [t, i] : alive) insts[i].end = n;

    // Options per instance: 0 = never saturated, j > 0 = saturated by
    // boundary j-1.  Only instances with finite beta can saturate.
    std::vector<int> radix;
    for (const auto& in : insts)
        radix.push_back(net.transitions[in.t].beta.finite() ? 1 + static_cast<int>(in.boundaries.size()) : 1);
    std::vector<int> pick(insts.size(), 0);
    auto date = [](int k) { return k == 0 ? kZero : k; };

    for (;;) {
        std::vector<int> vars;
        for (int k = 1; k <= n; ++k) vars.push_back(k);
        FiringDomain d(vars);
        for (int k = 1; k <= n; ++k) {
            const ScgEdge& ed = g.edges[static_cast<std::size_t>(edge_path[k - 1])];
            d = add_constraint(std::move(d), date(k - 1), date(k), Bound(-ed.lo));
            d = add_constraint(std::move(d), date(k), date(k - 1), ed.hi);
        }
        for (std::size_t i = 0; i < insts.size(); ++i) {
            const auto& in = insts[i];
            const auto& tr = net.transitions[in.t];
            int sat_at = pick[i] == 0 ? n + 1 : in.boundaries[static_cast<std::size_t>(pick[i] - 1)];
            if (pick[i] != 0)  // clock reached beta while waiting
                d = add_constraint(std::move(d), date(in.start), date(sat_at - 1), Bound(-tr.beta.value()));
            for (int k = in.start + 1; k <= in.end; ++k) {
                if (!in.full[static_cast<std::size_t>(k - in.start - 1)]) continue;
                if (k >= sat_at)
                    d = add_constraint(std::move(d), date(k), date(k - 1), Bound(0));
                else
                    d = add_constraint(std::move(d), date(k), date(in.start), tr.beta);
            }
            if (in.fired && in.end < sat_at)
                d = add_constraint(std::move(d), date(in.start), date(in.end), Bound(-tr.alpha));
        }
        if (satisfiable(d)) {
            d = canonical(std::move(d));
            std::vector<std::pair<Rational, int>> moves;
            Rational prev(0);
            for (int k = 1; k <= n; ++k) {
                Rational dk = d.lower(k);
                moves.emplace_back(dk - prev, ts[k - 1]);
                prev = dk;
            }
            Run run;
            try {
                run = replay(net, moves);
            } catch (const Error& e) {
                throw RealizationFailed(std::string("earliest dates do not replay: ") + e.what());
            }
            for (int k = 1; k <= n; ++k)
                if (run.steps[k - 1].result.marking != ms[k])
                    throw RealizationFailed("marking mismatch at step " + std::to_string(k));
            return run;
        }
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == radix[i]) pick[i++] = 0;
        if (i == pick.size()) break;
    }
    throw RealizationFailed("no run follows this path");
}

Net random_net(const RandomNetSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    std::bernoulli_distribution arc(spec.arc_density), inf(spec.unbounded_beta), token(0.5);
    Net net;
    net.name = "random_" + std::to_string(seed);
    int np = uni(1, std::max(1, spec.max_places));
    int nc = uni(0, std::max(0, spec.max_control));
    for (int i = 0; i < np; ++i) net.places.push_back({"p" + std::to_string(i), false, token(rng) ? 1 : 0});
    for (int i = 0; i < nc; ++i) net.places.push_back({"c" + std::to_string(i), true, token(rng) ? 1 : 0});
    int nt = uni(1, std::max(1, spec.max_transitions));
    for (int i = 0; i < nt; ++i) {
        Transition t;
        t.id = "t" + std::to_string(i);
        t.symbol = t.id;
        int a = uni(0, spec.max_bound);
        t.alpha = Rational(a);
        t.beta = inf(rng) ? Bound::infinity() : Bound(uni(a, spec.max_bound));
        for (std::size_t p = 0; p < net.places.size(); ++p) {
            if (arc(rng)) t.pre.push_back({static_cast<int>(p), 1});
            if (arc(rng)) t.post.push_back({static_cast<int>(p), 1});
        }
        net.transitions.push_back(std::move(t));
    }
    net.validate();
    return net;
}

Net without_control(const Net& net) {
    Net out = net;
    for (auto& p : out.places) p.control = false;
    return out;
}

std::size_t FuzzSummary::failures_of(const std::string& check) const {
    return static_cast<std::size_t>(std::count_if(failures.begin(), failures.end(),
                                                  [&](const FuzzFailure& f) { return f.check == check; }));
}

std::string FuzzSummary::to_json() const {
    nlohmann::ordered_json j;
    j["trials"] = trials;
    j["skipped"] = skipped;
    j["classes"] = classes;
    j["runs"] = runs;
    j["paths"] = paths;
    j["determinism_checks"] = determinism_checks;
    j["fm_systems"] = fm_systems;
    auto fs = nlohmann::ordered_json::array();
    for (const auto& f : failures) fs.push_back({{"check", f.check}, {"seed", f.seed}, {"detail", f.detail}});
    j["failures"] = fs;
    return j.dump(2) + "\n";
}

namespace {

std::string path_text(const Net& net, const StateClassGraph& g, const std::vector<int>& edges) {
    std::string s;
    for (int e : edges) {
        const auto& ed = g.edges[static_cast<std::size_t>(e)];
        if (!s.empty()) s += " ";
        s += net.transitions[ed.transition].id + format_interval(ed.lo, ed.hi) + "->" + std::to_string(ed.target);
    }
    return s;
}

void trial(const RandomNetSpec& spec, const FuzzOptions& opts, std::uint64_t seed, FuzzSummary& sum) {
    Net net = random_net(spec, seed);
    StateClassGraph g;
    try {
        g = build_scg(net, opts.limits);
    } catch (const BoundExceeded&) {
        ++sum.skipped;
        return;
    } catch (const ClassBudgetExceeded&) {
        ++sum.skipped;
        return;
    }
    auto fail = [&](const char* check, std::string detail) { sum.failures.push_back({check, seed, std::move(detail)}); };

    sum.classes += g.classes.size();
    for (std::size_t i = 0; i < g.classes.size(); ++i)
        for (const auto& v : lemma_violations(net, g.classes[i])) fail("lemma", "class " + std::to_string(i) + ": " + v);

    Rational horizon(spec.max_bound + 1);
    auto grid = delay_grid(horizon, {1, 2, 3});
    for (int r = 0; r < opts.runs_per_net; ++r) {
        Run run = random_run(net, seed * 1000003u + static_cast<std::uint64_t>(r), opts.run_length, grid);
        ++sum.runs;
        auto rep = check_completeness(net, g, run);
        if (!rep.ok) {
            std::string moves;
            for (const auto& s : run.steps)
                moves += "(" + to_string(s.delay) + "," + net.transitions[s.transition].id + ")";
            fail("completeness", "run " + moves + ": " + rep.reason);
        }
    }

    std::vector<int> edges;
    std::function<void(int)> walk = [&](int cls) {
        if (static_cast<int>(edges.size()) == opts.path_length) return;
        for (int e : g.out[static_cast<std::size_t>(cls)]) {
            edges.push_back(e);
            ++sum.paths;
            bool ok = true;
            try {
                check_soundness(net, g, edges);
            } catch (const RealizationFailed& ex) {
                fail("soundness", path_text(net, g, edges) + ": " + ex.what());
                ok = false;
            }
            if (ok) walk(g.edges[static_cast<std::size_t>(e)].target);
            edges.pop_back();
        }
    };
    walk(0);

    Net plain = without_control(net);
    try {
        StateClassGraph pg = build_scg(plain, opts.limits);
        ++sum.determinism_checks;
        auto st = domain_stats(plain, pg);
        if (st.max_successors > 1)
            fail("determinism", std::to_string(st.max_successors) + " successors for one transition without control places");
    } catch (const BoundExceeded&) {
    } catch (const ClassBudgetExceeded&) {
    }
}

}  // namespace

FuzzSummary fuzz(const RandomNetSpec& spec, const FuzzOptions& opts) {
    if (opts.trials < 1) throw Error("fuzz needs at least one trial");
    FuzzSummary sum;
    std::mt19937_64 seeds(opts.seed);
    for (int i = 0; i < opts.trials; ++i) {
        std::uint64_t s = seeds();
        ++sum.trials;
        try {
            trial(spec, opts, s, sum);
        } catch (const std::exception& e) {
            sum.failures.push_back({"error", s, e.what()});
        }
    }
    auto fm = fm_grid_check(opts.seed, opts.fm_systems);
    sum.fm_systems = static_cast<std::size_t>(opts.fm_systems);
    sum.failures.insert(sum.failures.end(), fm.begin(), fm.end());
    return sum;
}

std::vector<FuzzFailure> fm_grid_check(std::uint64_t seed, int systems) {
    std::vector<FuzzFailure> bad;
    std::mt19937_64 seeds(seed ^ 0x5eedf00dULL);
    for (int s = 0; s < systems; ++s) {
        std::uint64_t sd = seeds();
        std::mt19937_64 rng(sd);
        auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
        LinearSystem sys;
        for (int v = 0; v < 3; ++v) {
            sys.add({{v, Rational(1)}}, Rational(4));
            sys.add({{v, Rational(-1)}}, Rational(0));
        }
        int rows = uni(1, 5);
        for (int r = 0; r < rows; ++r) {
            std::map<int, Rational> c;
            for (int v = 0; v < 3; ++v) c[v] = Rational(uni(-1, 1));
            sys.add(std::move(c), Rational(uni(-4, 4)));
        }
        // Vertices of the slices have denominators dividing 2 (one variable
        // projected, remaining grid 1/2) or 8 (two projected, grid 1/4).
        auto grid = [](int den) {
            std::vector<Rational> g;
            for (int k = 0; k <= 4 * den; ++k) g.push_back(Rational(k, den));
            return g;
        };
        LinearSystem one = fm_eliminate(sys, 2);
        for (const auto& x : grid(2))
            for (const auto& y : grid(2)) {
                bool exists = false;
                for (const auto& z : grid(2))
                    if (sys.holds({{0, x}, {1, y}, {2, z}})) {
                        exists = true;
                        break;
                    }
                if (exists != one.holds({{0, x}, {1, y}}))
                    bad.push_back({"fm", sd,
                                   "eliminating x2 disagrees at (" + to_string(x) + "," + to_string(y) + ")"});
            }
        LinearSystem two = fm_eliminate(one, 1);
        auto fine = grid(8);
        for (const auto& x : grid(4)) {
            bool exists = false;
            for (const auto& y : fine) {
                for (const auto& z : fine)
                    if (sys.holds({{0, x}, {1, y}, {2, z}})) {
                        exists = true;
                        break;
                    }
                if (exists) break;
            }
            if (exists != two.holds({{0, x}}))
                bad.push_back({"fm", sd, "eliminating x1, x2 disagrees at " + to_string(x)});
        }
    }
    return bad;
}

}  // namespace waitnet
