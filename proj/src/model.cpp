#include "waitnet/model.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace waitnet {

bool Marking::covers(const Marking& other) const {
    for (std::size_t p = 0; p < tokens.size(); ++p)
        if (tokens[p] < other.tokens[p]) return false;
    return true;
}

int Net::find_place(std::string_view id) const {
    for (std::size_t i = 0; i < places.size(); ++i)
        if (places[i].id == id) return static_cast<int>(i);
    return -1;
}

int Net::find_transition(std::string_view id) const {
    for (std::size_t i = 0; i < transitions.size(); ++i)
        if (transitions[i].id == id) return static_cast<int>(i);
    return -1;
}

Marking Net::initial_marking() const {
    Marking m;
    m.tokens.reserve(places.size());
    for (const auto& p : places) m.tokens.push_back(p.initial);
    return m;
}

std::vector<int> Net::standard_places() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < places.size(); ++i)
        if (!places[i].control) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> Net::control_places() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < places.size(); ++i)
        if (places[i].control) out.push_back(static_cast<int>(i));
    return out;
}

void Net::validate() const {
    if (places.empty()) throw SemanticError("net has no places");
    std::set<std::string> ids;
    for (const auto& p : places) {
        if (!ids.insert(p.id).second) throw SemanticError("duplicate id " + p.id);
        if (p.initial < 0) throw SemanticError("negative initial marking on " + p.id);
    }
    for (const auto& t : transitions) {
        if (!ids.insert(t.id).second) throw SemanticError("duplicate id " + t.id);
        if (t.alpha < 0) throw SemanticError("negative earliest firing time on " + t.id);
        if (Bound(t.alpha) > t.beta)
            throw SemanticError("interval of " + t.id + " has alpha > beta");
        for (const auto* arcs : {&t.pre, &t.post})
            for (const auto& a : *arcs) {
                if (a.place < 0 || a.place >= static_cast<int>(places.size()))
                    throw SemanticError("arc of " + t.id + " refers to an unknown place");
                if (a.weight < 0) throw SemanticError("negative arc weight on " + t.id);
            }
    }
}

bool Net::operator==(const Net& o) const {
    if (name != o.name || places.size() != o.places.size() ||
        transitions.size() != o.transitions.size())
        return false;
    for (std::size_t i = 0; i < places.size(); ++i) {
        const auto &a = places[i], &b = o.places[i];
        if (a.id != b.id || a.control != b.control || a.initial != b.initial) return false;
    }
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        const auto &a = transitions[i], &b = o.transitions[i];
        if (a.id != b.id || a.epsilon != b.epsilon || a.label() != b.label() ||
            a.alpha != b.alpha || !(a.beta == b.beta) || a.pre != b.pre || a.post != b.post)
            return false;
    }
    return true;
}

bool contains(const TransitionSet& s, int t) {
    return std::binary_search(s.begin(), s.end(), t);
}

bool is_enabled(const Net& net, const Marking& m, int t) {
    for (const auto& a : net.transitions[t].pre)
        if (!net.places[a.place].control && m[a.place] < a.weight) return false;
    return true;
}

bool is_fully_enabled(const Net& net, const Marking& m, int t) {
    for (const auto& a : net.transitions[t].pre)
        if (m[a.place] < a.weight) return false;
    return true;
}

TransitionSet enabled(const Net& net, const Marking& m) {
    TransitionSet out;
    for (std::size_t t = 0; t < net.size(); ++t)
        if (is_enabled(net, m, static_cast<int>(t))) out.push_back(static_cast<int>(t));
    return out;
}

TransitionSet fully_enabled(const Net& net, const Marking& m) {
    TransitionSet out;
    for (std::size_t t = 0; t < net.size(); ++t)
        if (is_fully_enabled(net, m, static_cast<int>(t))) out.push_back(static_cast<int>(t));
    return out;
}

TransitionSet waiting(const Net& net, const Marking& m) {
    TransitionSet out;
    for (std::size_t t = 0; t < net.size(); ++t) {
        int i = static_cast<int>(t);
        if (is_enabled(net, m, i) && !is_fully_enabled(net, m, i)) out.push_back(i);
    }
    return out;
}

Marking intermediate_marking(const Net& net, const Marking& m, int t) {
    if (!is_fully_enabled(net, m, t))
        throw NotFirable("transition " + net.transitions[t].id + " is not fully enabled");
    Marking mid = m;
    for (const auto& a : net.transitions[t].pre) mid.tokens[a.place] -= a.weight;
    return mid;
}

Marking fire_marking(const Net& net, const Marking& m, int t) {
    Marking next = intermediate_marking(net, m, t);
    for (const auto& a : net.transitions[t].post) next.tokens[a.place] += a.weight;
    return next;
}

TransitionSet newly_enabled(const Net& net, const Marking& m, int t) {
    Marking mid = intermediate_marking(net, m, t);
    Marking next = fire_marking(net, m, t);
    TransitionSet out;
    for (std::size_t u = 0; u < net.size(); ++u) {
        int i = static_cast<int>(u);
        if (!is_enabled(net, next, i)) continue;
        if (i == t || !is_enabled(net, mid, i)) out.push_back(i);
    }
    return out;
}

std::string format_marking(const Net& net, const Marking& m) {
    std::string standard, control;
    for (std::size_t p = 0; p < net.places.size(); ++p) {
        if (m[p] == 0) continue;
        std::string& part = net.places[p].control ? control : standard;
        if (!part.empty()) part += ",";
        part += net.places[p].id;
        if (m[p] > 1) part += ":" + std::to_string(m[p]);
    }
    return "{" + standard + "}.{" + control + "}";
}

Marking parse_marking_spec(const Net& net, std::string_view spec) {
    Marking m;
    m.tokens.assign(net.places.size(), 0);
    std::size_t pos = 0;
    while (pos < spec.size()) {
        auto comma = spec.find(',', pos);
        auto item = spec.substr(pos, comma == std::string_view::npos ? spec.npos : comma - pos);
        pos = comma == std::string_view::npos ? spec.size() : comma + 1;
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (item.empty()) continue;
        auto eq = item.find('=');
        std::string_view id = item.substr(0, eq);
        int count = 1;
        if (eq != std::string_view::npos) {
            auto num = item.substr(eq + 1);
            auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), count);
            if (ec != std::errc() || ptr != num.data() + num.size() || count < 0)
                throw SemanticError("bad token count in marking item '" + std::string(item) + "'");
        }
        int p = net.find_place(id);
        if (p < 0) throw SemanticError("unknown place '" + std::string(id) + "' in marking");
        m.tokens[p] = count;
    }
    return m;
}

}  // namespace waitnet
