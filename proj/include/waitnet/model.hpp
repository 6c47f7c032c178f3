#pragma once

#include "waitnet/errors.hpp"
#include "waitnet/rational.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace waitnet {

struct Place {
    std::string id;
    bool control = false;
    int initial = 0;
};

struct Arc {
    int place = 0;
    int weight = 1;
    bool operator==(const Arc&) const = default;
};

struct Transition {
    std::string id;
    std::string symbol;    // ignored when epsilon is set
    bool epsilon = false;
    Rational alpha{0};
    Bound beta = Bound::infinity();
    std::vector<Arc> pre;  // sorted by place index
    std::vector<Arc> post;

    std::string label() const { return epsilon ? std::string("eps") : symbol; }
};

// Token counts over all places of a net, standard and control alike, in place
// declaration order.
struct Marking {
    std::vector<int> tokens;

    int operator[](std::size_t p) const { return tokens[p]; }
    bool covers(const Marking& other) const;  // componentwise >=
    auto operator<=>(const Marking&) const = default;
};

// Sorted transition indices.
using TransitionSet = std::vector<int>;

class Net {
public:
    std::string name = "net";
    std::vector<Place> places;
    std::vector<Transition> transitions;

    int find_place(std::string_view id) const;       // -1 if absent
    int find_transition(std::string_view id) const;  // -1 if absent
    Marking initial_marking() const;
    std::vector<int> standard_places() const;
    std::vector<int> control_places() const;
    std::size_t size() const { return transitions.size(); }

    // Throws SemanticError on a violated structural invariant.
    void validate() const;

    bool operator==(const Net&) const;
};

bool contains(const TransitionSet& s, int t);

bool is_enabled(const Net& net, const Marking& m, int t);
bool is_fully_enabled(const Net& net, const Marking& m, int t);

TransitionSet enabled(const Net& net, const Marking& m);
TransitionSet fully_enabled(const Net& net, const Marking& m);
TransitionSet waiting(const Net& net, const Marking& m);

// M - pre(t); throws NotFirable when the full preset is not covered.
Marking intermediate_marking(const Net& net, const Marking& m, int t);
Marking fire_marking(const Net& net, const Marking& m, int t);
TransitionSet newly_enabled(const Net& net, const Marking& m, int t);

// "{p1,p3}.{p2}" with multiplicities written p:k.
std::string format_marking(const Net& net, const Marking& m);
// Parses "p1=1,c3=2"; unlisted places get 0.
Marking parse_marking_spec(const Net& net, std::string_view spec);

}  // namespace waitnet
