#include "waitnet/scta.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace waitnet {

namespace {

std::string set_key(const TransitionSet& s) {
    std::string k;
    for (int t : s) k += std::to_string(t) + ",";
    return k;
}

void sort_unique(TransitionSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

std::string atoms_key(const std::vector<ClockAtom>& as) {
    std::string k;
    for (const auto& a : as)
        k += std::to_string(a.clock) + (a.cmp == Cmp::Ge ? ">=" : "<=") + to_string(a.bound) + ";";
    return k;
}

void compute_invariant(const Net& net, const Marking& m, TaLocation& l) {
    std::map<int, Rational> tightest;
    for (const auto& [clk, ts] : l.groups)
        for (int v : ts) {
            if (!is_fully_enabled(net, m, v)) continue;
            Bound b = contains(l.urgent, v) ? Bound(0) : net.transitions[v].beta;
            if (b.is_inf()) continue;
            auto it = tightest.find(clk);
            if (it == tightest.end() || b.value() < it->second) tightest[clk] = b.value();
        }
    l.invariant.clear();
    for (const auto& [clk, b] : tightest) l.invariant.push_back({clk, Cmp::Le, b});
}

}  // namespace

std::string TaLocation::key() const {
    std::string k = std::to_string(scg_class) + "|";
    for (const auto& [clk, ts] : groups) k += std::to_string(clk) + ":" + set_key(ts) + "/";
    return k + "|" + set_key(urgent) + "|" + set_key(saturated);
}

int TaLocation::clock_of(int t) const {
    for (const auto& [clk, ts] : groups)
        if (contains(ts, t)) return clk;
    return -1;
}

TimedAutomaton build_scta(const Net& net, const StateClassGraph& scg) {
    TimedAutomaton ta;
    std::unordered_map<std::string, int> index;
    std::set<std::string> edge_keys;
    int max_clock = -1;

    auto add_location = [&](TaLocation l) {
        for (auto it = l.groups.begin(); it != l.groups.end();) {
            if (it->second.empty()) {
                it = l.groups.erase(it);
            } else {
                sort_unique(it->second);
                max_clock = std::max(max_clock, it->first);
                ++it;
            }
        }
        sort_unique(l.urgent);
        sort_unique(l.saturated);
        compute_invariant(net, scg.classes[l.scg_class].marking, l);
        std::string k = l.key();
        auto it = index.find(k);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(ta.locations.size());
        index.emplace(std::move(k), id);
        ta.locations.push_back(std::move(l));
        return id;
    };

    TaLocation init;
    init.scg_class = 0;
    init.groups[0] = enabled(net, scg.classes[0].marking);
    ta.initial = add_location(std::move(init));

    for (std::size_t i = 0; i < ta.locations.size(); ++i) {
        const TaLocation loc = ta.locations[i];
        const Marking& m = scg.classes[loc.scg_class].marking;
        for (int eid : scg.out[loc.scg_class]) {
            const ScgEdge& e = scg.edges[eid];
            int t = e.transition;
            const Marking& m2 = scg.classes[e.target].marking;
            Marking mid = intermediate_marking(net, m, t);
            TransitionSet fresh = newly_enabled(net, m, t);
            auto keep = [&](int u) {
                return u != t && is_enabled(net, mid, u) && !contains(fresh, u);
            };

            // Waiting transitions that become fully enabled: either their net
            // clock had saturated at beta (guard x >= beta, fresh clock, must
            // fire at once) or it had not (clock kept, invariant x <= beta).
            std::vector<int> choice;
            for (const auto& [clk, ts] : loc.groups)
                for (int u : ts)
                    if (keep(u) && !contains(loc.urgent, u) && !is_fully_enabled(net, m, u) &&
                        is_fully_enabled(net, m2, u) && net.transitions[u].beta.finite())
                        choice.push_back(u);

            for (std::size_t mask = 0; mask < (std::size_t{1} << choice.size()); ++mask) {
                TaLocation n;
                n.scg_class = e.target;
                TransitionSet joining = fresh;
                TaEdge edge;
                edge.source = static_cast<int>(i);
                edge.transition = t;
                edge.epsilon = net.transitions[t].epsilon;
                edge.label = net.transitions[t].label();
                edge.scg_edge = eid;

                const auto& alpha = net.transitions[t].alpha;
                if (!contains(loc.urgent, t) && alpha > 0)
                    edge.guard.push_back({loc.clock_of(t), Cmp::Ge, alpha});
                TransitionSet picked;
                for (std::size_t k = 0; k < choice.size(); ++k) {
                    if (!(mask >> k & 1)) continue;
                    int u = choice[k];
                    edge.guard.push_back({loc.clock_of(u), Cmp::Ge, net.transitions[u].beta.value()});
                    picked.push_back(u);
                    joining.push_back(u);
                    n.urgent.push_back(u);
                }
                for (int u : loc.saturated) {
                    if (!keep(u)) continue;
                    if (is_fully_enabled(net, m2, u)) {
                        joining.push_back(u);
                        n.urgent.push_back(u);
                    } else {
                        n.saturated.push_back(u);
                    }
                }
                for (const auto& [clk, ts] : loc.groups)
                    for (int u : ts) {
                        if (!keep(u) || contains(picked, u)) continue;
                        if (contains(loc.urgent, u)) {
                            if (!is_fully_enabled(net, m2, u)) {
                                n.saturated.push_back(u);
                                continue;
                            }
                            n.urgent.push_back(u);
                        }
                        n.groups[clk].push_back(u);
                    }
                if (!joining.empty()) {
                    int x = 0;
                    while (n.groups.count(x) && !n.groups[x].empty()) ++x;
                    n.groups[x] = joining;
                    edge.resets.push_back(x);
                }
                std::sort(edge.guard.begin(), edge.guard.end(),
                          [](const ClockAtom& a, const ClockAtom& b) {
                              return std::tie(a.clock, a.bound) < std::tie(b.clock, b.bound);
                          });
                edge.target = add_location(std::move(n));
                std::string ek = std::to_string(edge.source) + "|" + std::to_string(t) + "|" +
                                 atoms_key(edge.guard) + "|" +
                                 (edge.resets.empty() ? "" : std::to_string(edge.resets[0])) + "|" +
                                 std::to_string(edge.target);
                if (edge_keys.insert(ek).second) ta.edges.push_back(std::move(edge));
            }
        }
    }
    ta.clocks = max_clock + 1;
    ta.accepting.assign(ta.locations.size(), true);
    std::set<std::string> sigma;
    for (const auto& tr : net.transitions)
        if (!tr.epsilon) sigma.insert(tr.symbol);
    ta.alphabet.assign(sigma.begin(), sigma.end());
    return ta;
}

TimedAutomaton build_scta(const Net& net, const ExplorationLimits& limits) {
    return build_scta(net, build_scg(net, limits));
}

std::vector<std::string> shape_violations(const Net& net, const TimedAutomaton& ta) {
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < ta.edges.size(); ++i)
        for (const auto& a : ta.edges[i].guard)
            if (a.cmp != Cmp::Ge) bad.push_back("edge " + std::to_string(i) + " has an upper-bound guard");
    for (std::size_t i = 0; i < ta.locations.size(); ++i) {
        for (const auto& a : ta.locations[i].invariant)
            if (a.cmp != Cmp::Le)
                bad.push_back("location " + std::to_string(i) + " has a lower-bound invariant");
        if (i >= ta.accepting.size() || !ta.accepting[i])
            bad.push_back("location " + std::to_string(i) + " is not accepting");
    }
    if (ta.accepting.size() != ta.locations.size()) bad.push_back("accepting set size mismatch");
    if (static_cast<std::size_t>(ta.clocks) > net.size() + 1)
        bad.push_back(std::to_string(ta.clocks) + " clocks for " + std::to_string(net.size()) +
                      " transitions");
    return bad;
}

namespace {

// Zones reuse FiringDomain: variables 0..clocks-1 are the automaton clocks,
// variable `clocks` is a global clock that is never reset.
struct Zones {
    int z;

    FiringDomain zero() const {
        std::vector<int> vars;
        for (int i = 0; i <= z; ++i) vars.push_back(i);
        FiringDomain d(vars);
        for (int i = 0; i <= z; ++i) d = add_constraint(std::move(d), i, kZero, Bound(0));
        return canonical(std::move(d));
    }

    static FiringDomain up(FiringDomain d) {
        for (std::size_t i = 1; i <= d.dim(); ++i) d.entry(i, 0) = Bound::infinity();
        return d;
    }

    static FiringDomain reset(FiringDomain d, int x) {
        std::size_t s = static_cast<std::size_t>(d.slot(x));
        for (std::size_t j = 0; j <= d.dim(); ++j) {
            d.entry(s, j) = d.entry(0, j);
            d.entry(j, s) = d.entry(j, 0);
        }
        d.entry(s, s) = Bound(0);
        return d;
    }

    static std::optional<FiringDomain> apply(FiringDomain d, const std::vector<ClockAtom>& atoms) {
        for (const auto& a : atoms) {
            if (a.cmp == Cmp::Le)
                d = add_constraint(std::move(d), a.clock, kZero, Bound(a.bound));
            else
                d = add_constraint(std::move(d), kZero, a.clock, Bound(-a.bound));
        }
        try {
            return canonical(std::move(d));
        } catch (const Unsatisfiable&) {
            return std::nullopt;
        }
    }
};

struct ZoneState {
    int loc;
    FiringDomain zone;
};

}  // namespace

bool ta_accepts(const TimedAutomaton& ta, const TimedWord& word, std::size_t max_search) {
    if (word.empty()) return true;
    Zones zs{ta.clocks};
    std::vector<std::vector<int>> out(ta.locations.size());
    for (std::size_t e = 0; e < ta.edges.size(); ++e) out[ta.edges[e].source].push_back(static_cast<int>(e));

    std::vector<ZoneState> frontier;
    if (auto z0 = Zones::apply(zs.zero(), ta.locations[ta.initial].invariant))
        frontier.push_back({ta.initial, *z0});
    std::size_t budget = 0;
    Rational prev(0);
    for (const auto& ev : word) {
        if (ev.date < prev) return false;
        prev = ev.date;
        std::vector<ClockAtom> upto{{zs.z, Cmp::Le, ev.date}};
        std::vector<ClockAtom> at{{zs.z, Cmp::Le, ev.date}, {zs.z, Cmp::Ge, ev.date}};

        // Silent closure up to the letter's date.
        std::vector<ZoneState> seen;
        std::vector<ZoneState> stack = frontier;
        while (!stack.empty()) {
            ZoneState s = std::move(stack.back());
            stack.pop_back();
            bool covered = false;
            for (const auto& o : seen)
                if (o.loc == s.loc && includes(o.zone, s.zone)) {
                    covered = true;
                    break;
                }
            if (covered) continue;
            seen.push_back(s);
            auto later = Zones::apply(Zones::up(s.zone), ta.locations[s.loc].invariant);
            if (!later || !(later = Zones::apply(*later, upto))) continue;
            for (int eid : out[s.loc]) {
                const auto& e = ta.edges[eid];
                if (!e.epsilon) continue;
                if (++budget > max_search)
                    throw SearchBudgetExceeded("silent search exceeded " + std::to_string(max_search) +
                                               " steps");
                auto g = Zones::apply(*later, e.guard);
                if (!g) continue;
                FiringDomain r = *g;
                for (int x : e.resets) r = Zones::reset(std::move(r), x);
                if (auto t = Zones::apply(r, ta.locations[e.target].invariant)) stack.push_back({e.target, *t});
            }
        }

        std::vector<ZoneState> next;
        for (const auto& s : seen) {
            auto now = Zones::apply(Zones::up(s.zone), ta.locations[s.loc].invariant);
            if (!now || !(now = Zones::apply(*now, at))) continue;
            for (int eid : out[s.loc]) {
                const auto& e = ta.edges[eid];
                if (e.epsilon || e.label != ev.label) continue;
                auto g = Zones::apply(*now, e.guard);
                if (!g) continue;
                FiringDomain r = *g;
                for (int x : e.resets) r = Zones::reset(std::move(r), x);
                auto t = Zones::apply(r, ta.locations[e.target].invariant);
                if (!t) continue;
                bool dup = false;
                for (const auto& o : next)
                    if (o.loc == e.target && includes(o.zone, *t)) {
                        dup = true;
                        break;
                    }
                if (!dup) next.push_back({e.target, *t});
            }
        }
        if (next.empty()) return false;
        frontier = std::move(next);
    }
    return true;
}

}  // namespace waitnet
