// Command-line driver: simulate, scg, reach, cover, export-ta, check.
// Exit codes: 0 success / YES, 1 NO or failed check, 2 error or limit hit.

#include "waitnet/oracle.hpp"
#include "waitnet/scta.hpp"
#include "waitnet/semantics.hpp"
#include "waitnet/stateclass.hpp"
#include "waitnet/textio.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>
#include <set>

using namespace waitnet;

namespace {

bool color() {
    const char* v = std::getenv("WAITNET_COLOR");
    return v && std::string(v) == "1";
}

int report_error(const std::string& msg) {
    if (color())
        std::cerr << "\033[31merror:\033[0m " << msg << "\n";
    else
        std::cerr << "error: " << msg << "\n";
    return 2;
}

struct Common {
    std::string net_path;
    int max_tokens = 16;
    std::size_t max_classes = 100000;
    int jobs = 1;

    ExplorationLimits limits() const { return {max_tokens, max_classes, jobs}; }
};

void add_limits(CLI::App* cmd, Common& c) {
    cmd->add_option("--max-tokens", c.max_tokens, "Per-place token limit")->check(CLI::PositiveNumber);
    cmd->add_option("--max-classes", c.max_classes, "State class limit")->check(CLI::PositiveNumber);
    cmd->add_option("--jobs", c.jobs, "Worker threads for graph expansion")->check(CLI::PositiveNumber);
}

void print_scg_text(const Net& net, const StateClassGraph& g) {
    for (std::size_t i = 0; i < g.classes.size(); ++i) {
        std::string body = format_class(net, g.classes[i]);
        std::cout << "Cl" << i << " ";
        for (char ch : body) {
            if (ch == '\n')
                std::cout << "\n    ";
            else
                std::cout << ch;
        }
        std::cout << "\n";
    }
    for (const auto& e : g.edges)
        std::cout << "Cl" << e.source << " -- " << net.transitions[e.transition].id << " "
                  << format_interval(e.lo, e.hi) << " --> Cl" << e.target << "\n";
}

void print_witness(const Net& net, const StateClassGraph& g, const Verdict& v) {
    std::cout << "witness: Cl0";
    for (int e : v.edge_path) {
        const auto& ed = g.edges[static_cast<std::size_t>(e)];
        std::cout << " -" << net.transitions[ed.transition].id << " " << format_interval(ed.lo, ed.hi)
                  << "-> Cl" << ed.target;
    }
    std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Waiting nets: simulation, state class graphs and timed automata"};
    app.require_subcommand(1);
    Common common;

    auto* sim = app.add_subcommand("simulate", "Print a random run and its timed word");
    sim->add_option("net", common.net_path)->required();
    std::uint64_t seed = 1;
    int steps = -1;
    int max_den = 10;
    sim->add_option("--seed", seed, "Random seed");
    sim->add_option("--steps", steps, "Maximum number of steps (default 10 per transition)");
    sim->add_option("--max-den", max_den, "Largest delay denominator")->check(CLI::PositiveNumber);

    bool dot = false, json = false;
    auto* scg = app.add_subcommand("scg", "Build the state class graph");
    scg->add_option("net", common.net_path)->required();
    scg->add_flag("--dot", dot, "Emit DOT");
    scg->add_flag("--json", json, "Emit JSON");
    add_limits(scg, common);

    std::string marking;
    auto* reach = app.add_subcommand("reach", "Is a marking reachable?");
    reach->add_option("net", common.net_path)->required();
    reach->add_option("--marking", marking, "Target, e.g. p1=1,c3=2")->required();
    add_limits(reach, common);
    auto* cover = app.add_subcommand("cover", "Is a marking coverable?");
    cover->add_option("net", common.net_path)->required();
    cover->add_option("--marking", marking, "Target, e.g. p1=1,c3=2")->required();
    add_limits(cover, common);

    auto* ta = app.add_subcommand("export-ta", "Build the state class timed automaton");
    ta->add_option("net", common.net_path)->required();
    ta->add_flag("--dot", dot, "Emit DOT");
    ta->add_flag("--json", json, "Emit JSON (default)");
    add_limits(ta, common);

    int fuzz_trials = 0;
    auto* check = app.add_subcommand("check", "Run the invariant suite on a net, optionally fuzz");
    check->add_option("net", common.net_path)->required();
    check->add_option("--fuzz", fuzz_trials, "Also run this many random-net trials");
    check->add_option("--seed", seed, "Fuzz seed");
    add_limits(check, common);

    CLI11_PARSE(app, argc, argv);

    try {
        Net net = load_net(common.net_path);

        if (sim->parsed()) {
            int n = steps >= 0 ? steps : static_cast<int>(10 * net.size());
            Rational horizon(1);
            for (const auto& t : net.transitions) {
                if (t.beta.finite()) horizon = std::max(horizon, t.beta.value());
                horizon = std::max(horizon, t.alpha);
            }
            std::vector<int> dens;
            for (int q = 1; q <= max_den; ++q) dens.push_back(q);
            Run run = random_run(net, seed, n, delay_grid(horizon, dens));
            std::cout << format_configuration(net, run.initial) << "\n";
            for (const auto& s : run.steps)
                std::cout << "  " << to_string(s.delay) << ", " << net.transitions[s.transition].id << " -> "
                          << format_configuration(net, s.result) << "\n";
            std::cout << "word:";
            for (const auto& ev : timed_word_of(net, run)) std::cout << " (" << ev.label << "," << to_string(ev.date) << ")";
            std::cout << "\n";
            return 0;
        }

        if (scg->parsed()) {
            StateClassGraph g = build_scg(net, common.limits());
            if (json) {
                std::cout << scg_to_json(net, g);
            } else if (dot) {
                std::cout << scg_to_dot(net, g);
            } else {
                print_scg_text(net, g);
                auto st = domain_stats(net, g);
                std::cout << st.classes << " classes, " << st.edges << " edges, " << st.distinct_domains
                          << " distinct domains, max constant " << to_string(st.max_constant) << "\n";
            }
            return 0;
        }

        if (reach->parsed() || cover->parsed()) {
            Marking target = parse_marking_spec(net, marking);
            StateClassGraph g = build_scg(net, common.limits());
            Verdict v = find_marking(g, target, cover->parsed());
            if (!v.yes) {
                std::cout << "NO\n";
                return 1;
            }
            std::cout << "YES\n";
            print_witness(net, g, v);
            return 0;
        }

        if (ta->parsed()) {
            TimedAutomaton a = build_scta(net, common.limits());
            std::cout << (dot ? ta_to_dot(net, a) : ta_to_json(net, a));
            return 0;
        }

        if (check->parsed()) {
            StateClassGraph g = build_scg(net, common.limits());
            auto st = domain_stats(net, g);
            bool ok = true;
            std::cout << st.classes << " classes, " << st.edges << " edges\n";
            std::cout << "lemma bounds: " << (st.violations.empty() ? "ok" : "VIOLATED") << "\n";
            for (const auto& v : st.violations) std::cout << "  " << v << "\n";
            ok = ok && st.violations.empty();

            std::set<std::string> keys;
            for (const auto& c : g.classes) keys.insert(c.key());
            bool dedup = keys.size() == g.classes.size();
            std::cout << "dedup audit: " << (dedup ? "ok" : "DUPLICATES") << "\n";
            ok = ok && dedup;

            auto bad = shape_violations(net, build_scta(net, g));
            std::cout << "automaton shape: " << (bad.empty() ? "ok" : "VIOLATED") << "\n";
            for (const auto& b : bad) std::cout << "  " << b << "\n";
            ok = ok && bad.empty();

            if (fuzz_trials > 0) {
                FuzzOptions opts;
                opts.trials = fuzz_trials;
                opts.seed = seed;
                FuzzSummary sum = fuzz(RandomNetSpec{}, opts);
                std::cout << sum.to_json();
                ok = ok && sum.failures.empty();
            }
            return ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        return report_error(e.what());
    }
    return 2;
}
