#include "waitnet/textio.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace waitnet {

namespace {

struct Token {
    std::string text;
    int line;
    int col;
};

bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '/' ||
           c == '\'';
}

std::vector<Token> tokenize_line(std::string_view line, int lineno) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        int col = static_cast<int>(i) + 1;
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
            out.push_back({"->", lineno, col});
            i += 2;
        } else if (c == '[' || c == ']' || c == '(' || c == ')' || c == ',') {
            out.push_back({std::string(1, c), lineno, col});
            ++i;
        } else if (word_char(c)) {
            std::size_t j = i;
            while (j < line.size() && word_char(line[j])) ++j;
            out.push_back({std::string(line.substr(i, j - i)), lineno, col});
            i = j;
        } else {
            throw SyntaxError(lineno, col, std::string("unexpected character '") + c + "'");
        }
    }
    return out;
}

class Cursor {
public:
    Cursor(const std::vector<Token>& toks, int line) : toks_(toks), line_(line) {}

    bool done() const { return pos_ >= toks_.size(); }
    const Token* peek() const { return done() ? nullptr : &toks_[pos_]; }

    [[noreturn]] void fail(const std::string& msg) const {
        int col = done() ? (toks_.empty() ? 1 : toks_.back().col + static_cast<int>(toks_.back().text.size()))
                         : toks_[pos_].col;
        throw SyntaxError(line_, col, msg);
    }

    const Token& next(const char* what) {
        if (done()) fail(std::string("expected ") + what);
        return toks_[pos_++];
    }

    void expect(const std::string& text) {
        if (done() || toks_[pos_].text != text) fail("expected '" + text + "'");
        ++pos_;
    }

    bool accept(const std::string& text) {
        if (!done() && toks_[pos_].text == text) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string ident(const char* what) {
        const Token& t = next(what);
        if (!word_char(t.text[0]) || t.text.find('/') != std::string::npos)
            throw SyntaxError(t.line, t.col, std::string("expected ") + what);
        return t.text;
    }

    int natural(const char* what) {
        const Token& t = next(what);
        int v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size() || v < 0)
            throw SyntaxError(t.line, t.col, std::string("expected ") + what);
        return v;
    }

    Rational rational(const char* what) {
        const Token& t = next(what);
        auto r = parse_rational(t.text);
        if (!r) throw SyntaxError(t.line, t.col, std::string("expected ") + what);
        return *r;
    }

    void end() {
        if (!done()) fail("unexpected '" + toks_[pos_].text + "'");
    }

private:
    const std::vector<Token>& toks_;
    int line_;
    std::size_t pos_ = 0;
};

struct ArcDecl {
    std::string from;
    std::string to;
    int weight;
    int line;
    int col;
};

void add_arc(std::vector<Arc>& arcs, int place, int weight) {
    for (auto& a : arcs)
        if (a.place == place) {
            a.weight += weight;
            return;
        }
    arcs.push_back({place, weight});
    std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.place < b.place; });
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out;
}

std::vector<std::string> names_of(const Net& net) {
    std::vector<std::string> names;
    for (const auto& t : net.transitions) names.push_back(t.id);
    return names;
}

using ojson = nlohmann::ordered_json;

ojson marking_json(const Net& net, const Marking& m) {
    ojson j = ojson::object();
    for (std::size_t p = 0; p < net.places.size(); ++p)
        if (m[p] != 0) j[net.places[p].id] = m[p];
    return j;
}

ojson bound_json(const Bound& b) { return b.is_inf() ? ojson(nullptr) : ojson(to_string(b.value())); }

std::string atom_text(const ClockAtom& a) {
    return "x" + std::to_string(a.clock) + (a.cmp == Cmp::Ge ? " >= " : " <= ") + to_string(a.bound);
}

ojson atoms_json(const std::vector<ClockAtom>& as) {
    ojson arr = ojson::array();
    for (const auto& a : as)
        arr.push_back(ojson{{"clock", a.clock}, {"op", a.cmp == Cmp::Ge ? ">=" : "<="},
                            {"bound", to_string(a.bound)}});
    return arr;
}

ojson ids_json(const Net& net, const TransitionSet& ts) {
    ojson arr = ojson::array();
    for (int t : ts) arr.push_back(net.transitions[t].id);
    return arr;
}

}  // namespace

Net parse_net(std::string_view text) {
    Net net;
    std::vector<ArcDecl> arcs;
    std::map<std::string, std::pair<int, int>> where;  // id -> (line, col)
    bool named = false;

    auto declare = [&](const std::string& id, int line, int col) {
        if (where.count(id)) throw SemanticError("duplicate id '" + id + "' at line " + std::to_string(line));
        where[id] = {line, col};
    };

    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        auto toks = tokenize_line(line, lineno);
        if (toks.empty()) continue;
        Cursor cur(toks, lineno);
        const Token& kw = cur.next("a keyword");
        if (kw.text == "net") {
            if (named) throw SemanticError("second net declaration at line " + std::to_string(lineno));
            net.name = cur.ident("a net name");
            named = true;
        } else if (kw.text == "place" || kw.text == "ctrl") {
            const Token& id = cur.next("a place id");
            if (!word_char(id.text[0])) throw SyntaxError(id.line, id.col, "expected a place id");
            Place p{id.text, kw.text == "ctrl", 0};
            if (cur.accept("init")) p.initial = cur.natural("a token count");
            cur.end();
            declare(p.id, id.line, id.col);
            net.places.push_back(std::move(p));
        } else if (kw.text == "trans") {
            const Token& id = cur.next("a transition id");
            if (!word_char(id.text[0])) throw SyntaxError(id.line, id.col, "expected a transition id");
            Transition t;
            t.id = id.text;
            t.symbol = id.text;
            if (cur.accept("eps")) {
                t.epsilon = true;
            } else if (cur.accept("label")) {
                t.symbol = cur.ident("a label");
            }
            cur.expect("interval");
            cur.expect("[");
            t.alpha = cur.rational("a lower bound");
            cur.expect(",");
            if (cur.accept("inf")) {
                t.beta = Bound::infinity();
                if (!cur.accept("]")) cur.expect(")");
            } else {
                t.beta = Bound(cur.rational("an upper bound"));
                cur.expect("]");
            }
            cur.end();
            if (Bound(t.alpha) > t.beta)
                throw SemanticError("interval of " + t.id + " at line " + std::to_string(lineno) +
                                    " has lower bound above upper bound");
            declare(t.id, id.line, id.col);
            net.transitions.push_back(std::move(t));
        } else if (kw.text == "arc") {
            ArcDecl a;
            const Token& from = cur.next("an arc source");
            a.from = from.text;
            a.line = from.line;
            a.col = from.col;
            cur.expect("->");
            a.to = cur.ident("an arc target");
            a.weight = 1;
            if (cur.accept("weight")) a.weight = cur.natural("an arc weight");
            cur.end();
            arcs.push_back(std::move(a));
        } else {
            throw SyntaxError(kw.line, kw.col, "unknown declaration '" + kw.text + "'");
        }
    }

    for (const auto& a : arcs) {
        int p = net.find_place(a.from), t = net.find_transition(a.to);
        if (p >= 0 && t >= 0) {
            add_arc(net.transitions[t].pre, p, a.weight);
            continue;
        }
        t = net.find_transition(a.from);
        p = net.find_place(a.to);
        if (p >= 0 && t >= 0) {
            add_arc(net.transitions[t].post, p, a.weight);
            continue;
        }
        throw SemanticError("arc at line " + std::to_string(a.line) + " must join a place and a transition (" +
                            a.from + " -> " + a.to + ")");
    }
    net.validate();
    return net;
}

Net load_net(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_net(ss.str());
}

std::string print_net(const Net& net) {
    std::string s = "net " + net.name + "\n";
    for (const auto& p : net.places) {
        s += (p.control ? "ctrl " : "place ") + p.id;
        if (p.initial) s += " init " + std::to_string(p.initial);
        s += "\n";
    }
    for (const auto& t : net.transitions) {
        s += "trans " + t.id;
        if (t.epsilon)
            s += " eps";
        else if (t.symbol != t.id)
            s += " label " + t.symbol;
        s += " interval [" + to_string(t.alpha) + "," + (t.beta.is_inf() ? "inf" : to_string(t.beta.value())) +
             "]\n";
    }
    for (const auto& t : net.transitions) {
        auto w = [](int k) { return k == 1 ? std::string() : " weight " + std::to_string(k); };
        for (const auto& a : t.pre) s += "arc " + net.places[a.place].id + " -> " + t.id + w(a.weight) + "\n";
        for (const auto& a : t.post) s += "arc " + t.id + " -> " + net.places[a.place].id + w(a.weight) + "\n";
    }
    return s;
}

std::string scg_to_dot(const Net& net, const StateClassGraph& g) {
    std::string s = "digraph \"" + dot_escape(net.name) + "\" {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < g.classes.size(); ++i)
        s += "  c" + std::to_string(i) + " [label=\"" +
             dot_escape("Cl" + std::to_string(i) + "\n" + format_class(net, g.classes[i])) + "\"];\n";
    for (const auto& e : g.edges)
        s += "  c" + std::to_string(e.source) + " -> c" + std::to_string(e.target) + " [label=\"" +
             dot_escape(net.transitions[e.transition].id + " " + format_interval(e.lo, e.hi)) + "\"];\n";
    return s + "}\n";
}

std::string scg_to_json(const Net& net, const StateClassGraph& g) {
    ojson j;
    j["net"] = net.name;
    j["initial"] = 0;
    ojson classes = ojson::array();
    auto names = names_of(net);
    for (std::size_t i = 0; i < g.classes.size(); ++i) {
        const auto& c = g.classes[i];
        ojson vars = ojson::array();
        for (int v : c.domain.vars())
            vars.push_back(ojson{{"transition", net.transitions[v].id},
                                 {"lower", to_string(c.domain.lower(v))},
                                 {"upper", bound_json(c.domain.upper(v))}});
        ojson diffs = ojson::array();
        for (int a : c.domain.vars())
            for (int b : c.domain.vars())
                if (a != b && c.domain.get(a, b).finite())
                    diffs.push_back(ojson{{"lhs", net.transitions[a].id},
                                          {"rhs", net.transitions[b].id},
                                          {"bound", to_string(c.domain.get(a, b).value())}});
        classes.push_back(ojson{{"id", i},
                                {"marking", marking_json(net, c.marking)},
                                {"variables", vars},
                                {"differences", diffs},
                                {"timed_out", ids_json(net, c.timed_out)},
                                {"constraints", format_domain(c.domain, names)}});
    }
    j["classes"] = classes;
    ojson edges = ojson::array();
    for (const auto& e : g.edges)
        edges.push_back(ojson{{"source", e.source},
                              {"transition", net.transitions[e.transition].id},
                              {"lower", to_string(e.lo)},
                              {"upper", bound_json(e.hi)},
                              {"target", e.target}});
    j["edges"] = edges;
    return j.dump(2) + "\n";
}

std::string ta_to_dot(const Net& net, const TimedAutomaton& ta) {
    std::string s = "digraph \"" + dot_escape(net.name) + "_ta\" {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < ta.locations.size(); ++i) {
        const auto& l = ta.locations[i];
        std::string label = "L" + std::to_string(i) + " (Cl" + std::to_string(l.scg_class) + ")";
        for (const auto& [clk, ts] : l.groups) {
            label += "\nx" + std::to_string(clk) + ":";
            for (int t : ts) label += " " + net.transitions[t].id;
        }
        for (const auto& a : l.invariant) label += "\n" + atom_text(a);
        s += "  l" + std::to_string(i) + " [label=\"" + dot_escape(label) + "\"" +
             (static_cast<int>(i) == ta.initial ? ", penwidth=2" : "") + "];\n";
    }
    for (const auto& e : ta.edges) {
        std::string label = e.label;
        for (const auto& a : e.guard) label += "\n" + atom_text(a);
        for (int x : e.resets) label += "\nx" + std::to_string(x) + " := 0";
        s += "  l" + std::to_string(e.source) + " -> l" + std::to_string(e.target) + " [label=\"" +
             dot_escape(label) + "\"];\n";
    }
    return s + "}\n";
}

std::string ta_to_json(const Net& net, const TimedAutomaton& ta) {
    ojson j;
    j["net"] = net.name;
    j["clocks"] = ta.clocks;
    j["alphabet"] = ta.alphabet;
    j["initial"] = ta.initial;
    ojson locs = ojson::array();
    for (std::size_t i = 0; i < ta.locations.size(); ++i) {
        const auto& l = ta.locations[i];
        ojson groups = ojson::array();
        for (const auto& [clk, ts] : l.groups) groups.push_back(ojson{{"clock", clk}, {"transitions", ids_json(net, ts)}});
        locs.push_back(ojson{{"id", i},
                             {"class", l.scg_class},
                             {"clocks", groups},
                             {"urgent", ids_json(net, l.urgent)},
                             {"saturated", ids_json(net, l.saturated)},
                             {"invariant", atoms_json(l.invariant)},
                             {"accepting", static_cast<bool>(ta.accepting[i])}});
    }
    j["locations"] = locs;
    ojson edges = ojson::array();
    for (const auto& e : ta.edges)
        edges.push_back(ojson{{"source", e.source},
                              {"label", e.label},
                              {"transition", net.transitions[e.transition].id},
                              {"guard", atoms_json(e.guard)},
                              {"resets", e.resets},
                              {"target", e.target}});
    j["edges"] = edges;
    return j.dump(2) + "\n";
}

std::string constraint_graph_to_dot(const Net& net, const FiringDomain& d) {
    auto g = constraint_graph(d);
    auto name = [&](int v) { return v == kZero ? std::string("zero") : net.transitions[v].id; };
    std::string s = "digraph constraints {\n";
    for (int v : g.nodes) s += "  \"" + dot_escape(name(v)) + "\";\n";
    for (const auto& e : g.edges)
        s += "  \"" + dot_escape(name(e.from)) + "\" -> \"" + dot_escape(name(e.to)) + "\" [label=\"" +
             to_string(e.weight) + "\"];\n";
    return s + "}\n";
}

}  // namespace waitnet
