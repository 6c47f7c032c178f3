#pragma once

#include "waitnet/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace waitnet {

// Per-transition clock; nullopt is the disabled sentinel.
using Valuation = std::vector<std::optional<Rational>>;

struct Configuration {
    Marking marking;
    Valuation clocks;
    bool operator==(const Configuration&) const = default;
};

struct Step {
    Rational delay;
    int transition = -1;
    Configuration result;
};

struct Run {
    Configuration initial;
    std::vector<Step> steps;
    const Configuration& last() const { return steps.empty() ? initial : steps.back().result; }
};

struct TimedEvent {
    std::string label;
    Rational date;
    bool operator==(const TimedEvent&) const = default;
};
using TimedWord = std::vector<TimedEvent>;

Configuration initial_configuration(const Net& net);

// Largest delay allowed by urgency; nullopt when time may elapse forever.
std::optional<Rational> max_delay(const Net& net, const Configuration& c);

Configuration timed_move(const Net& net, const Configuration& c, const Rational& d);
Configuration discrete_move(const Net& net, const Configuration& c, int t);
bool can_fire(const Net& net, const Configuration& c, int t);

// Replays (delay, transition) pairs; throws on the first illegal move.
Run replay(const Net& net, const std::vector<std::pair<Rational, int>>& moves);

TimedWord timed_word_of(const Net& net, const Run& run, bool include_epsilon = false);

// k/q for every q in denominators and 0 <= k/q <= horizon, sorted and unique.
std::vector<Rational> delay_grid(const Rational& horizon, const std::vector<int>& denominators);

// Random legal run.  Candidate delays per step are the grid values plus the
// points where some clock reaches an interval bound; a delay is kept only if
// it passes timed_move and leaves some transition firable.
Run random_run(const Net& net, std::uint64_t seed, int max_steps,
               const std::vector<Rational>& grid);

// Exhaustive check that an epsilon-free net produces the word (labels may
// repeat, so every transition with the right label is tried).
bool net_accepts(const Net& net, const TimedWord& word);

std::string format_configuration(const Net& net, const Configuration& c);

}  // namespace waitnet
