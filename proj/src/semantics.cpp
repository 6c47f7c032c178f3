#include "waitnet/semantics.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace waitnet {

Configuration initial_configuration(const Net& net) {
    Configuration c;
    c.marking = net.initial_marking();
    c.clocks.assign(net.size(), std::nullopt);
    for (int t : enabled(net, c.marking)) c.clocks[t] = Rational(0);
    return c;
}

std::optional<Rational> max_delay(const Net& net, const Configuration& c) {
    std::optional<Rational> best;
    for (int t : fully_enabled(net, c.marking)) {
        const auto& beta = net.transitions[t].beta;
        if (beta.is_inf()) continue;
        Rational room = beta.value() - *c.clocks[t];
        if (!best || room < *best) best = room;
    }
    return best;
}

Configuration timed_move(const Net& net, const Configuration& c, const Rational& d) {
    if (d < 0) throw Error("negative delay");
    Configuration out = c;
    for (std::size_t t = 0; t < net.size(); ++t) {
        if (!c.clocks[t]) continue;
        const auto& beta = net.transitions[t].beta;
        Rational v = *c.clocks[t] + d;
        if (is_fully_enabled(net, c.marking, static_cast<int>(t))) {
            if (Bound(v) > beta)
                throw UrgencyViolation("delay " + to_string(d) + " overruns " +
                                       net.transitions[t].id);
            out.clocks[t] = v;
        } else {
            out.clocks[t] = beta.is_inf() ? v : std::min(beta.value(), v);
        }
    }
    return out;
}

bool can_fire(const Net& net, const Configuration& c, int t) {
    if (!is_fully_enabled(net, c.marking, t)) return false;
    const auto& tr = net.transitions[t];
    const Rational& v = *c.clocks[t];
    return tr.alpha <= v && Bound(v) <= tr.beta;
}

Configuration discrete_move(const Net& net, const Configuration& c, int t) {
    if (!is_fully_enabled(net, c.marking, t))
        throw NotFullyEnabled(net.transitions[t].id + " is not fully enabled");
    if (!can_fire(net, c, t))
        throw ClockOutOfInterval(net.transitions[t].id + " clock outside its interval");
    TransitionSet fresh = newly_enabled(net, c.marking, t);
    Configuration out;
    out.marking = fire_marking(net, c.marking, t);
    out.clocks.assign(net.size(), std::nullopt);
    for (std::size_t u = 0; u < net.size(); ++u) {
        int i = static_cast<int>(u);
        if (!is_enabled(net, out.marking, i)) continue;
        out.clocks[u] = contains(fresh, i) ? Rational(0) : *c.clocks[u];
    }
    return out;
}

Run replay(const Net& net, const std::vector<std::pair<Rational, int>>& moves) {
    Run run;
    run.initial = initial_configuration(net);
    Configuration cur = run.initial;
    for (const auto& [d, t] : moves) {
        cur = discrete_move(net, timed_move(net, cur, d), t);
        run.steps.push_back({d, t, cur});
    }
    return run;
}

TimedWord timed_word_of(const Net& net, const Run& run, bool include_epsilon) {
    TimedWord w;
    Rational date(0);
    for (const auto& s : run.steps) {
        date += s.delay;
        const auto& tr = net.transitions[s.transition];
        if (tr.epsilon && !include_epsilon) continue;
        w.push_back({tr.label(), date});
    }
    return w;
}

std::vector<Rational> delay_grid(const Rational& horizon, const std::vector<int>& denominators) {
    std::set<Rational> pts;
    for (int q : denominators) {
        for (std::int64_t k = 0; Rational(k, q) <= horizon; ++k) pts.insert(Rational(k, q));
    }
    return {pts.begin(), pts.end()};
}

namespace {

std::vector<Rational> candidate_delays(const Net& net, const Configuration& c,
                                       const std::vector<Rational>& grid) {
    auto cap = max_delay(net, c);
    std::set<Rational> pts;
    auto add = [&](const Rational& d) {
        if (d >= 0 && (!cap || d <= *cap)) pts.insert(d);
    };
    for (const auto& g : grid) add(g);
    for (std::size_t t = 0; t < net.size(); ++t) {
        if (!c.clocks[t]) continue;
        const auto& tr = net.transitions[t];
        add(tr.alpha - *c.clocks[t]);
        if (tr.beta.finite()) add(tr.beta.value() - *c.clocks[t]);
    }
    if (cap) add(*cap);
    return {pts.begin(), pts.end()};
}

}  // namespace

Run random_run(const Net& net, std::uint64_t seed, int max_steps,
               const std::vector<Rational>& grid) {
    std::mt19937_64 rng(seed);
    Run run;
    run.initial = initial_configuration(net);
    Configuration cur = run.initial;
    for (int step = 0; step < max_steps; ++step) {
        std::vector<std::pair<Rational, std::vector<int>>> options;
        for (const auto& d : candidate_delays(net, cur, grid)) {
            Configuration later = timed_move(net, cur, d);
            std::vector<int> ts;
            for (std::size_t t = 0; t < net.size(); ++t)
                if (can_fire(net, later, static_cast<int>(t))) ts.push_back(static_cast<int>(t));
            if (!ts.empty()) options.emplace_back(d, std::move(ts));
        }
        if (options.empty()) break;
        const auto& [d, ts] = options[rng() % options.size()];
        int t = ts[rng() % ts.size()];
        cur = discrete_move(net, timed_move(net, cur, d), t);
        run.steps.push_back({d, t, cur});
    }
    return run;
}

namespace {

bool accepts_from(const Net& net, const Configuration& c, const Rational& now,
                  const TimedWord& word, std::size_t i) {
    if (i == word.size()) return true;
    Rational d = word[i].date - now;
    if (d < 0) return false;
    auto cap = max_delay(net, c);
    if (cap && d > *cap) return false;
    Configuration later = timed_move(net, c, d);
    for (std::size_t t = 0; t < net.size(); ++t) {
        const auto& tr = net.transitions[t];
        if (tr.epsilon || tr.symbol != word[i].label) continue;
        if (!can_fire(net, later, static_cast<int>(t))) continue;
        if (accepts_from(net, discrete_move(net, later, static_cast<int>(t)), word[i].date, word,
                         i + 1))
            return true;
    }
    return false;
}

}  // namespace

bool net_accepts(const Net& net, const TimedWord& word) {
    for (const auto& tr : net.transitions)
        if (tr.epsilon) throw Error("net_accepts needs an epsilon-free net");
    return accepts_from(net, initial_configuration(net), Rational(0), word, 0);
}

std::string format_configuration(const Net& net, const Configuration& c) {
    std::string s = format_marking(net, c.marking) + " [";
    bool first = true;
    for (std::size_t t = 0; t < net.size(); ++t) {
        if (!c.clocks[t]) continue;
        if (!first) s += ", ";
        first = false;
        s += net.transitions[t].id + "=" + to_string(*c.clocks[t]);
    }
    return s + "]";
}

}  // namespace waitnet
