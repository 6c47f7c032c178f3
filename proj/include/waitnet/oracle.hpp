#pragma once

#include "waitnet/semantics.hpp"
#include "waitnet/stateclass.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace waitnet {

struct CoincidenceReport {
    bool ok = false;
    std::vector<int> path;   // class ids, one more than run steps
    std::vector<int> edges;  // edge ids
    std::string reason;
};

// Searches the graph for a path whose edges carry the run's transitions, whose
// intervals contain the run's delays and whose classes are compatible with
// the run's configurations.  Greedy in edge order with backtracking.
CoincidenceReport check_completeness(const Net& net, const StateClassGraph& g, const Run& run);

// Whether some remaining-time vector of the configuration lies in the class.
bool compatible(const Net& net, const Configuration& c, const StateClass& cls);

// Builds the earliest concrete run along a path of edge ids starting at the
// initial class.  Throws RealizationFailed when none exists.
Run check_soundness(const Net& net, const StateClassGraph& g, const std::vector<int>& edge_path);

struct RandomNetSpec {
    int max_places = 4;
    int max_control = 2;
    int max_transitions = 3;
    int max_bound = 5;
    double arc_density = 0.35;
    double unbounded_beta = 0.2;
};

Net random_net(const RandomNetSpec& spec, std::uint64_t seed);

// Same net with every control place turned into a standard one.
Net without_control(const Net& net);

struct FuzzOptions {
    int trials = 1000;
    std::uint64_t seed = 1;
    int runs_per_net = 20;
    int run_length = 6;
    int path_length = 6;
    int fm_systems = 200;
    ExplorationLimits limits{3, 2000, 1};
};

struct FuzzFailure {
    std::string check;  // lemma, completeness, soundness, determinism, fm
    std::uint64_t seed = 0;
    std::string detail;
};

struct FuzzSummary {
    int trials = 0;
    int skipped = 0;
    std::size_t classes = 0;
    std::size_t runs = 0;
    std::size_t paths = 0;
    std::size_t determinism_checks = 0;
    std::size_t fm_systems = 0;
    std::vector<FuzzFailure> failures;

    std::size_t failures_of(const std::string& check) const;
    std::string to_json() const;
};

// Per trial: random net, SCG, lemma on every class, random grid runs through
// check_completeness, every SCG path up to path_length through
// check_soundness, determinism of the control-free copy.  Then the
// Fourier-Motzkin grid check.  Failures carry the seed that reproduces them.
FuzzSummary fuzz(const RandomNetSpec& spec, const FuzzOptions& opts);

// Random 3-variable systems with coefficients in {-1,0,1} inside [0,4]^3:
// projecting out one and two variables is compared against exhaustive grid
// search.  Returns the mismatches.
std::vector<FuzzFailure> fm_grid_check(std::uint64_t seed, int systems);

}  // namespace waitnet
