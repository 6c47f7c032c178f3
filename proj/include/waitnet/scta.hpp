#pragma once

#include "waitnet/semantics.hpp"
#include "waitnet/stateclass.hpp"

#include <map>
#include <string>
#include <vector>

namespace waitnet {

enum class Cmp { Ge, Le };

// x_clock >= bound or x_clock <= bound.
struct ClockAtom {
    int clock = 0;
    Cmp cmp = Cmp::Ge;
    Rational bound{0};
    bool operator==(const ClockAtom&) const = default;
};

// A location refines an SCG class with clock bookkeeping:
//  - groups: clock index -> transitions whose net clock it measures;
//  - urgent: transitions that were saturated while waiting and became fully
//    enabled on the incoming edge.  Their clock was reset there and they
//    must fire before any time passes;
//  - saturated: urgent transitions that went back to waiting.  Their net
//    clock sits at beta, so they need no clock of their own.
struct TaLocation {
    int scg_class = 0;
    std::map<int, TransitionSet> groups;
    TransitionSet urgent;
    TransitionSet saturated;
    std::vector<ClockAtom> invariant;  // Le atoms only

    std::string key() const;
    int clock_of(int t) const;  // -1 when t has no clock
};

struct TaEdge {
    int source = 0;
    int transition = 0;
    std::string label;  // "eps" for silent edges
    bool epsilon = false;
    std::vector<ClockAtom> guard;  // Ge atoms only
    std::vector<int> resets;
    int target = 0;
    int scg_edge = 0;
};

struct TimedAutomaton {
    std::vector<TaLocation> locations;
    int initial = 0;
    int clocks = 0;  // clock indices are 0 .. clocks-1
    std::vector<TaEdge> edges;
    std::vector<bool> accepting;  // every location
    std::vector<std::string> alphabet;
};

TimedAutomaton build_scta(const Net& net, const StateClassGraph& scg);
TimedAutomaton build_scta(const Net& net, const ExplorationLimits& limits = {});

// Guard atoms are all lower bounds, invariant atoms all upper bounds, every
// location accepting and at most |T| + 1 clocks.  Returns the offences.
std::vector<std::string> shape_violations(const Net& net, const TimedAutomaton& ta);

// Zone-based membership test.  max_search bounds the number of silent edge
// steps explored; exceeding it throws SearchBudgetExceeded.
bool ta_accepts(const TimedAutomaton& ta, const TimedWord& word, std::size_t max_search = 100000);

}  // namespace waitnet
