#include "waitnet/stateclass.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <thread>

namespace waitnet {

std::string StateClass::key() const {
    std::string k;
    for (int n : marking.tokens) k += std::to_string(n) + ",";
    k += "|";
    for (int t : timed_out) k += std::to_string(t) + ",";
    return k + "|" + domain.key();
}

int StateClassGraph::find(const StateClass& c) const {
    auto it = index.find(c.key());
    return it == index.end() ? -1 : it->second;
}

std::vector<const ScgEdge*> StateClassGraph::out_edges(int source) const {
    std::vector<const ScgEdge*> es;
    if (source < 0 || static_cast<std::size_t>(source) >= out.size()) return es;
    for (int e : out[source]) es.push_back(&edges[e]);
    return es;
}

namespace {

std::vector<std::string> transition_names(const Net& net) {
    std::vector<std::string> names;
    for (const auto& t : net.transitions) names.push_back(t.id);
    return names;
}

// Waiting variables whose range has collapsed to 0 become timed out.
void normalise(const Net& net, StateClass& c) {
    c.domain = canonical(std::move(c.domain));
    std::vector<int> vars = c.domain.vars();
    for (int v : vars) {
        if (is_fully_enabled(net, c.marking, v)) continue;
        if (c.domain.upper(v) == Bound(0)) {
            c.domain = eliminate(c.domain, v);
            c.timed_out.push_back(v);
        }
    }
    std::sort(c.timed_out.begin(), c.timed_out.end());
}

// Timed-out transitions read as variables pinned to 0, so classes over the
// same marking can be compared as sets of remaining-time vectors.
FiringDomain expanded(const StateClass& c) {
    FiringDomain d = c.domain;
    for (int t : c.timed_out) d = add_variable(std::move(d), t, Rational(0), Bound(0));
    return canonical(std::move(d));
}

// Removes duplicates and classes included in a sibling; order is kept.
std::vector<StateClass> prune(std::vector<StateClass> cs) {
    std::vector<FiringDomain> ex;
    for (const auto& c : cs) ex.push_back(expanded(c));
    std::vector<bool> drop(cs.size(), false);
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = 0; j < cs.size() && !drop[i]; ++j) {
            if (i == j || drop[j] || cs[i].marking != cs[j].marking) continue;
            if (!includes(ex[j], ex[i])) continue;
            // Equal sets: keep the earlier one.
            if (includes(ex[i], ex[j]) && i < j) continue;
            drop[i] = true;
        }
    std::vector<StateClass> out;
    for (std::size_t i = 0; i < cs.size(); ++i)
        if (!drop[i]) out.push_back(std::move(cs[i]));
    return out;
}

std::optional<FiringDomain> closed(const FiringDomain& d) {
    try {
        return canonical(d);
    } catch (const Unsatisfiable&) {
        return std::nullopt;
    }
}

}  // namespace

StateClass initial_class(const Net& net) {
    StateClass c;
    c.marking = net.initial_marking();
    FiringDomain d;
    for (int t : enabled(net, c.marking))
        d = add_variable(std::move(d), t, net.transitions[t].alpha, net.transitions[t].beta);
    c.domain = canonical(std::move(d));
    return c;
}

FiringDomain project_full(const Net& net, const StateClass& c) {
    FiringDomain d = c.domain;
    for (int i : c.domain.vars()) {
        if (is_fully_enabled(net, c.marking, i)) continue;
        for (int j : c.domain.vars())
            if (i != j) {
                d.entry(d.slot(i), d.slot(j)) = Bound::infinity();
                d.entry(d.slot(j), d.slot(i)) = Bound::infinity();
            }
        d.entry(d.slot(i), 0) = Bound::infinity();
    }
    return d;
}

bool firable(const Net& net, const StateClass& c, int t) {
    if (!is_fully_enabled(net, c.marking, t) || !c.domain.has(t)) return false;
    FiringDomain d = project_full(net, c);
    for (int j : fully_enabled(net, c.marking))
        if (j != t && d.has(j)) d = add_constraint(std::move(d), t, j, Bound(0));
    return satisfiable(d);
}

BoundsLadder bounds_ladder(const Net& net, const StateClass& c, int t) {
    if (!firable(net, c, t))
        throw NotFirable(net.transitions[t].id + " is not firable from this class");
    Bound m = Bound::infinity();
    for (int j : c.domain.vars())
        if (is_fully_enabled(net, c.marking, j)) m = min(m, c.domain.upper(j));
    BoundsLadder l;
    if (m == Bound(0)) {
        l.points = {Bound(0), Bound(0)};
        return l;
    }
    std::set<Rational> inner;
    for (int j : c.domain.vars()) {
        Bound b = c.domain.upper(j);
        if (b.finite() && b > Bound(0) && b < m) inner.insert(b.value());
    }
    std::vector<Bound> pts{Bound(0)};
    for (const auto& b : inner) pts.push_back(Bound(b));
    pts.push_back(m);
    // An interval entirely below the earliest firing time of t is dropped.
    Bound a = Bound(c.domain.lower(t));
    std::size_t first = 0;
    while (first + 1 < pts.size() && pts[first + 1] < a) ++first;
    l.points.assign(pts.begin() + static_cast<std::ptrdiff_t>(first), pts.end());
    return l;
}

std::vector<StateClass> time_progress(const Net& net, const StateClass& c, const Rational& b) {
    std::vector<int> sure, split;
    for (int j : c.domain.vars()) {
        if (is_fully_enabled(net, c.marking, j)) continue;
        if (c.domain.upper(j) <= Bound(b))
            sure.push_back(j);
        else if (Bound(c.domain.lower(j)) < Bound(b))
            split.push_back(j);
    }
    std::vector<StateClass> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << split.size()); ++mask) {
        FiringDomain d = c.domain;
        std::vector<int> gone = sure;
        for (std::size_t k = 0; k < split.size(); ++k) {
            if (mask >> k & 1) {
                d = add_constraint(std::move(d), split[k], kZero, Bound(b));
                gone.push_back(split[k]);
            } else {
                d = add_constraint(std::move(d), kZero, split[k], Bound(-b));
            }
        }
        auto cd = closed(d);
        if (!cd) continue;
        d = *cd;
        for (int j : gone) d = eliminate(d, j);
        auto shifted = closed(d);
        if (!shifted) continue;
        StateClass n;
        n.marking = c.marking;
        try {
            n.domain = shift_constant(*shifted, b);
        } catch (const Unsatisfiable&) {
            continue;
        }
        n.timed_out = c.timed_out;
        n.timed_out.insert(n.timed_out.end(), gone.begin(), gone.end());
        normalise(net, n);
        out.push_back(std::move(n));
    }
    return prune(std::move(out));
}

std::vector<StateClass> next_r(const Net& net, const StateClass& c, int f, std::size_t r) {
    BoundsLadder ladder = bounds_ladder(net, c, f);
    if (r >= ladder.intervals())
        throw BadBoundIndex("interval " + std::to_string(r) + " out of range");
    Rational lo = ladder.lo(r);
    Bound hi = ladder.hi(r);

    TransitionSet full = fully_enabled(net, c.marking);
    FiringDomain d = c.domain;
    d = add_constraint(std::move(d), kZero, f, Bound(-lo));
    d = add_constraint(std::move(d), f, kZero, hi);
    for (int j : full)
        if (j != f && d.has(j)) d = add_constraint(std::move(d), f, j, Bound(0));
    auto cd = closed(d);
    if (!cd) return {};
    d = *cd;

    // Waiting variables: at the firing date each has either run out
    // (theta_j <= theta_f) or not (theta_j >= theta_f).
    std::vector<int> sure, split;
    for (int j : d.vars()) {
        if (contains(full, j)) continue;
        if (d.get(j, f) <= Bound(0))
            sure.push_back(j);
        else if (d.get(f, j) > Bound(0))
            split.push_back(j);
    }

    Marking mid = intermediate_marking(net, c.marking, f);
    Marking next = fire_marking(net, c.marking, f);
    TransitionSet fresh = newly_enabled(net, c.marking, f);

    std::vector<StateClass> results;
    for (std::size_t mask = 0; mask < (std::size_t{1} << split.size()); ++mask) {
        FiringDomain e = d;
        std::vector<int> gone = sure;
        for (std::size_t k = 0; k < split.size(); ++k) {
            if (mask >> k & 1) {
                e = add_constraint(std::move(e), split[k], f, Bound(0));
                gone.push_back(split[k]);
            } else {
                e = add_constraint(std::move(e), f, split[k], Bound(0));
            }
        }
        auto ce = closed(e);
        if (!ce) continue;
        e = *ce;
        for (int j : gone) e = eliminate(e, j);

        std::vector<int> rest;
        for (int v : e.vars())
            if (v != f) rest.push_back(v);
        LinearSystem sys = fm_eliminate(substitute_shift(e, f), f);
        auto cg = closed(from_linear(sys, rest));
        if (!cg) continue;
        FiringDomain g = *cg;
        for (int v : rest)
            if (!is_enabled(net, mid, v) || contains(fresh, v)) g = eliminate(g, v);

        StateClass n;
        n.marking = next;
        for (int v : fresh)
            g = add_variable(std::move(g), v, net.transitions[v].alpha, net.transitions[v].beta);
        std::vector<int> expired = c.timed_out;
        expired.insert(expired.end(), gone.begin(), gone.end());
        std::sort(expired.begin(), expired.end());
        for (int k : expired) {
            if (k == f || !is_enabled(net, mid, k) || contains(fresh, k)) continue;
            if (is_fully_enabled(net, next, k))
                g = add_variable(std::move(g), k, Rational(0), Bound(0));
            else
                n.timed_out.push_back(k);
        }
        n.domain = std::move(g);
        normalise(net, n);
        results.push_back(std::move(n));
    }
    return prune(std::move(results));
}

std::vector<Successor> post_set(const Net& net, const StateClass& c, int t) {
    std::vector<Successor> out;
    if (!firable(net, c, t)) return out;
    BoundsLadder l = bounds_ladder(net, c, t);
    for (std::size_t r = 0; r < l.intervals(); ++r)
        for (auto& n : next_r(net, c, t, r)) out.push_back({l.lo(r), l.hi(r), std::move(n)});
    return out;
}

std::vector<int> transition_order(const Net& net) {
    std::vector<int> order(net.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return net.transitions[a].id < net.transitions[b].id;
    });
    return order;
}

namespace {

struct Expansion {
    std::vector<std::pair<int, Successor>> succ;
};

Expansion expand(const Net& net, const StateClass& c, const std::vector<int>& order) {
    Expansion x;
    for (int t : order)
        for (auto& s : post_set(net, c, t)) x.succ.emplace_back(t, std::move(s));
    return x;
}

void check_tokens(const Net& net, const Marking& m, int limit) {
    for (std::size_t p = 0; p < m.tokens.size(); ++p)
        if (m.tokens[p] > limit) throw BoundExceeded(net.places[p].id, m.tokens[p]);
}

}  // namespace

StateClassGraph build_scg(const Net& net, const ExplorationLimits& limits) {
    if (limits.max_tokens_per_place <= 0 || limits.max_classes == 0)
        throw Error("exploration limits must be positive");
    StateClassGraph g;
    std::set<std::tuple<int, int, Rational, bool, Rational, int>> seen_edges;

    auto insert = [&](StateClass c) {
        std::string k = c.key();
        auto it = g.index.find(k);
        if (it != g.index.end()) return it->second;
        check_tokens(net, c.marking, limits.max_tokens_per_place);
        if (g.classes.size() >= limits.max_classes)
            throw ClassBudgetExceeded("more than " + std::to_string(limits.max_classes) +
                                      " state classes");
        int id = static_cast<int>(g.classes.size());
        g.index.emplace(std::move(k), id);
        g.classes.push_back(std::move(c));
        g.out.emplace_back();
        return id;
    };

    insert(initial_class(net));
    std::vector<int> order = transition_order(net);
    std::size_t begin = 0;
    while (begin < g.classes.size()) {
        std::size_t end = g.classes.size();
        std::vector<Expansion> xs(end - begin);
        int jobs = std::max(1, limits.jobs);
        if (jobs == 1 || end - begin == 1) {
            for (std::size_t i = begin; i < end; ++i) xs[i - begin] = expand(net, g.classes[i], order);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errs(static_cast<std::size_t>(jobs));
            for (int w = 0; w < jobs; ++w)
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t i = begin + static_cast<std::size_t>(w); i < end;
                             i += static_cast<std::size_t>(jobs))
                            xs[i - begin] = expand(net, g.classes[i], order);
                    } catch (...) {
                        errs[static_cast<std::size_t>(w)] = std::current_exception();
                    }
                });
            for (auto& th : pool) th.join();
            for (auto& e : errs)
                if (e) std::rethrow_exception(e);
        }
        // Insertion stays sequential so numbering matches plain BFS.
        for (std::size_t i = begin; i < end; ++i)
            for (auto& [t, s] : xs[i - begin].succ) {
                int target = insert(std::move(s.target));
                auto ek = std::make_tuple(static_cast<int>(i), t, s.lo, s.hi.is_inf(),
                                          s.hi.is_inf() ? Rational(0) : s.hi.value(), target);
                if (!seen_edges.insert(ek).second) continue;
                g.out[i].push_back(static_cast<int>(g.edges.size()));
                g.edges.push_back({static_cast<int>(i), t, s.lo, s.hi, target});
            }
        begin = end;
    }
    return g;
}

Verdict find_marking(const StateClassGraph& g, const Marking& target, bool cover) {
    Verdict v;
    if (g.classes.empty()) return v;
    auto hit = [&](const Marking& m) { return cover ? m.covers(target) : m == target; };
    std::vector<int> parent_edge(g.classes.size(), -2);
    std::deque<int> q{0};
    parent_edge[0] = -1;
    while (!q.empty()) {
        int c = q.front();
        q.pop_front();
        if (hit(g.classes[c].marking)) {
            v.yes = true;
            for (int x = c; x != 0;) {
                int e = parent_edge[x];
                v.path.push_back(x);
                v.edge_path.push_back(e);
                x = g.edges[e].source;
            }
            v.path.push_back(0);
            std::reverse(v.path.begin(), v.path.end());
            std::reverse(v.edge_path.begin(), v.edge_path.end());
            return v;
        }
        for (int e : g.out[c]) {
            int t = g.edges[e].target;
            if (parent_edge[t] != -2) continue;
            parent_edge[t] = e;
            q.push_back(t);
        }
    }
    return v;
}

Verdict reachable(const Net& net, const Marking& target, const ExplorationLimits& limits) {
    return find_marking(build_scg(net, limits), target, false);
}

Verdict coverable(const Net& net, const Marking& target, const ExplorationLimits& limits) {
    return find_marking(build_scg(net, limits), target, true);
}

std::vector<std::string> lemma_violations(const Net& net, const StateClass& c) {
    std::vector<std::string> bad;
    const auto& d = c.domain;
    auto name = [&](int t) { return net.transitions[t].id; };
    for (int i : d.vars()) {
        const auto& tr = net.transitions[i];
        Rational a = d.lower(i);
        Bound b = d.upper(i);
        if (a < 0 || a > tr.alpha)
            bad.push_back("lower bound of " + name(i) + " is " + to_string(a));
        if (b < Bound(0) || b > tr.beta)
            bad.push_back("upper bound of " + name(i) + " is " + to_string(b));
    }
    for (int j : d.vars())
        for (int k : d.vars()) {
            if (j == k) continue;
            Bound cjk = d.get(j, k);
            if (cjk > net.transitions[j].beta || cjk < Bound(-net.transitions[k].alpha))
                bad.push_back("difference " + name(j) + " - " + name(k) + " bounded by " +
                              to_string(cjk));
        }
    return bad;
}

DomainStats domain_stats(const Net& net, const StateClassGraph& g) {
    DomainStats s;
    s.classes = g.classes.size();
    s.edges = g.edges.size();
    std::set<std::string> doms;
    for (std::size_t i = 0; i < g.classes.size(); ++i) {
        const auto& c = g.classes[i];
        doms.insert(c.domain.key());
        std::size_t n = c.domain.dim() + 1;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (c.domain.entry(a, b).finite())
                    s.max_constant = std::max(s.max_constant, boost::abs(c.domain.entry(a, b).value()));
        for (auto& v : lemma_violations(net, c))
            s.violations.push_back("class " + std::to_string(i) + ": " + v);
        std::map<int, std::set<int>> per_t;
        for (int e : g.out[i]) per_t[g.edges[e].transition].insert(g.edges[e].target);
        for (const auto& [t, ts] : per_t) s.max_successors = std::max(s.max_successors, ts.size());
    }
    s.distinct_domains = doms.size();
    return s;
}

std::string format_interval(const Rational& lo, const Bound& hi) {
    if (hi.is_inf()) return "[" + to_string(lo) + ",inf)";
    return "[" + to_string(lo) + "," + to_string(hi) + "]";
}

std::string format_class(const Net& net, const StateClass& c) {
    std::string s = format_marking(net, c.marking);
    for (const auto& line : format_domain(c.domain, transition_names(net))) s += "\n" + line;
    for (int t : c.timed_out) s += "\n" + net.transitions[t].id + " timed out";
    return s;
}

}  // namespace waitnet
