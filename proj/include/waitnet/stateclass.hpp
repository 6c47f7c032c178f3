#pragma once

#include "waitnet/dbm.hpp"
#include "waitnet/model.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace waitnet {

// Variables of the domain are the enabled transitions that have not timed out.
// A variable is the remaining time until the transition's chosen firing date;
// for a waiting transition that date stops moving at 0, and once the whole
// range has collapsed to 0 the transition is listed in timed_out instead.
struct StateClass {
    Marking marking;
    FiringDomain domain;
    TransitionSet timed_out;

    std::string key() const;
    bool operator==(const StateClass& o) const {
        return marking == o.marking && timed_out == o.timed_out && domain == o.domain;
    }
};

// 0 = points[0] < points[1] < ... ; interval r is [points[r], points[r+1]].
struct BoundsLadder {
    std::vector<Bound> points;

    std::size_t intervals() const { return points.empty() ? 0 : points.size() - 1; }
    Rational lo(std::size_t r) const { return points.at(r).value(); }
    Bound hi(std::size_t r) const { return points.at(r + 1); }
};

struct Successor {
    Rational lo;
    Bound hi;
    StateClass target;
};

struct ScgEdge {
    int source = 0;
    int transition = 0;
    Rational lo;
    Bound hi;
    int target = 0;
};

struct StateClassGraph {
    std::vector<StateClass> classes;  // classes[0] is the initial class
    std::vector<ScgEdge> edges;

    int find(const StateClass& c) const;  // -1 if absent
    std::vector<const ScgEdge*> out_edges(int source) const;

    std::unordered_map<std::string, int> index;
    std::vector<std::vector<int>> out;  // edge ids per source
};

struct ExplorationLimits {
    int max_tokens_per_place = 16;
    std::size_t max_classes = 100000;
    int jobs = 1;
};

StateClass initial_class(const Net& net);

// Drops everything a waiting variable contributes except its lower bound.
FiringDomain project_full(const Net& net, const StateClass& c);
bool firable(const Net& net, const StateClass& c, int t);

// Throws NotFirable.
BoundsLadder bounds_ladder(const Net& net, const StateClass& c, int t);

// Lets b time units pass.  A waiting variable whose range straddles b splits
// the class in two (timed out or not); included branches are dropped.
std::vector<StateClass> time_progress(const Net& net, const StateClass& c, const Rational& b);

// Successors for firing t at a delay inside ladder interval r.  Empty when
// the interval is infeasible.  Throws NotFirable, BadBoundIndex.
std::vector<StateClass> next_r(const Net& net, const StateClass& c, int t, std::size_t r);
std::vector<Successor> post_set(const Net& net, const StateClass& c, int t);

// Transition indices ordered by id; the exploration order.
std::vector<int> transition_order(const Net& net);

StateClassGraph build_scg(const Net& net, const ExplorationLimits& limits = {});

struct Verdict {
    bool yes = false;
    std::vector<int> path;        // class ids from the initial class
    std::vector<int> edge_path;   // edge ids, one fewer than path
};

Verdict find_marking(const StateClassGraph& g, const Marking& target, bool cover);
Verdict reachable(const Net& net, const Marking& target, const ExplorationLimits& limits = {});
Verdict coverable(const Net& net, const Marking& target, const ExplorationLimits& limits = {});

// 0 <= a_i <= alpha_i, 0 <= b_i <= beta_i, -alpha_k <= c_jk <= beta_j.
std::vector<std::string> lemma_violations(const Net& net, const StateClass& c);

struct DomainStats {
    std::size_t classes = 0;
    std::size_t edges = 0;
    std::size_t distinct_domains = 0;
    std::size_t max_successors = 0;  // per (class, transition)
    Rational max_constant{0};
    std::vector<std::string> violations;
};

DomainStats domain_stats(const Net& net, const StateClassGraph& g);

std::string format_class(const Net& net, const StateClass& c);
std::string format_interval(const Rational& lo, const Bound& hi);  // "[3,6]", "[6,inf)"

}  // namespace waitnet
