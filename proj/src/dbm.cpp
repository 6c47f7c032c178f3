#include "waitnet/dbm.hpp"

#include <algorithm>

namespace waitnet {

FiringDomain::FiringDomain(std::vector<int> vars) : vars_(std::move(vars)) {
    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
    std::size_t n = dim() + 1;
    m_.assign(n * n, Bound::infinity());
    for (std::size_t i = 0; i < n; ++i) entry(i, i) = Bound(0);
    for (std::size_t i = 1; i < n; ++i) entry(0, i) = Bound(0);
    canonical_ = true;
}

bool FiringDomain::has(int var) const {
    return var == kZero || std::binary_search(vars_.begin(), vars_.end(), var);
}

int FiringDomain::slot(int var) const {
    if (var == kZero) return 0;
    auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
    if (it == vars_.end() || *it != var)
        throw UnknownVariable("no variable for transition index " + std::to_string(var));
    return static_cast<int>(it - vars_.begin()) + 1;
}

std::string FiringDomain::key() const {
    std::string k;
    for (int v : vars_) k += std::to_string(v) + ",";
    k += "|";
    for (const auto& b : m_) k += to_string(b) + ";";
    return k;
}

ConstraintGraph constraint_graph(const FiringDomain& d) {
    ConstraintGraph g;
    g.nodes.push_back(kZero);
    for (int v : d.vars()) g.nodes.push_back(v);
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        for (std::size_t j = 0; j < g.nodes.size(); ++j)
            if (i != j && d.entry(i, j).finite())
                g.edges.push_back({g.nodes[i], g.nodes[j], d.entry(i, j).value()});
    return g;
}

FiringDomain canonical(FiringDomain d) {
    std::size_t n = d.dim() + 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (d.entry(i, k).is_inf()) continue;
            for (std::size_t j = 0; j < n; ++j) {
                Bound via = d.entry(i, k) + d.entry(k, j);
                if (via < d.entry(i, j)) d.entry(i, j) = via;
            }
        }
    for (std::size_t i = 0; i < n; ++i)
        if (d.entry(i, i) < Bound(0)) throw Unsatisfiable("negative cycle in constraint graph");
    d.set_canonical_flag(true);
    return d;
}

bool satisfiable(const FiringDomain& d) {
    try {
        canonical(d);
        return true;
    } catch (const Unsatisfiable&) {
        return false;
    }
}

FiringDomain add_constraint(FiringDomain d, int lhs, int rhs, const Bound& bound) {
    auto i = d.slot(lhs), j = d.slot(rhs);
    if (bound < d.entry(i, j)) {
        d.entry(i, j) = bound;
        d.set_canonical_flag(false);
    }
    return d;
}

FiringDomain add_variable(FiringDomain d, int var, const Rational& lo, const Bound& hi) {
    if (d.has(var)) throw Error("variable already present");
    std::vector<int> vars = d.vars();
    vars.push_back(var);
    FiringDomain out(vars);
    for (int a : d.vars())
        for (int b : d.vars()) out.entry(out.slot(a), out.slot(b)) = d.get(a, b);
    for (int a : d.vars()) {
        out.entry(out.slot(a), 0) = d.upper(a);
        out.entry(0, out.slot(a)) = d.get(kZero, a);
    }
    out.entry(out.slot(var), 0) = hi;
    out.entry(0, out.slot(var)) = Bound(-lo);
    out.set_canonical_flag(false);
    return out;
}

LinearSystem to_linear(const FiringDomain& d) {
    LinearSystem sys;
    std::vector<int> ids{kZero};
    ids.insert(ids.end(), d.vars().begin(), d.vars().end());
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = 0; j < ids.size(); ++j) {
            if (i == j) continue;
            const Bound& b = d.entry(i, j);
            if (b.is_inf()) continue;
            std::map<int, Rational> c;
            if (ids[i] != kZero) c[ids[i]] += 1;
            if (ids[j] != kZero) c[ids[j]] -= 1;
            sys.add(std::move(c), b.value());
        }
    return sys;
}

FiringDomain from_linear(const LinearSystem& sys, std::vector<int> vars) {
    FiringDomain d(std::move(vars));
    bool infeasible = false;
    for (const auto& r : sys.rows) {
        std::vector<std::pair<int, Rational>> terms;
        for (const auto& [v, k] : r.coeffs)
            if (k != Rational(0)) terms.emplace_back(v, k);
        if (terms.empty()) {
            if (r.bound < 0) infeasible = true;
            continue;
        }
        int lhs = kZero, rhs = kZero;
        Rational scale;
        if (terms.size() == 1) {
            scale = boost::abs(terms[0].second);
            (terms[0].second > 0 ? lhs : rhs) = terms[0].first;
        } else if (terms.size() == 2 && terms[0].second == -terms[1].second) {
            scale = boost::abs(terms[0].second);
            if (terms[0].second > 0) {
                lhs = terms[0].first;
                rhs = terms[1].first;
            } else {
                lhs = terms[1].first;
                rhs = terms[0].first;
            }
        } else {
            throw Error("row is not a difference constraint");
        }
        d = add_constraint(std::move(d), lhs, rhs, Bound(r.bound / scale));
    }
    if (infeasible) {
        d.entry(0, 0) = Bound(-1);
        d.set_canonical_flag(false);
    }
    return d;
}

LinearSystem substitute_shift(const FiringDomain& d, int pivot) {
    d.slot(pivot);
    LinearSystem sys;
    auto expand = [&](int v) {
        // theta_v as a linear form over {pivot} and the shifted variables
        std::map<int, Rational> form;
        if (v == kZero) return form;
        form[v] += 1;
        if (v != pivot) form[pivot] += 1;
        return form;
    };
    std::vector<int> ids{kZero};
    ids.insert(ids.end(), d.vars().begin(), d.vars().end());
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = 0; j < ids.size(); ++j) {
            if (i == j) continue;
            const Bound& b = d.entry(i, j);
            if (b.is_inf()) continue;
            auto c = expand(ids[i]);
            for (const auto& [v, k] : expand(ids[j])) c[v] -= k;
            sys.add(std::move(c), b.value());
        }
    return sys;
}

FiringDomain shift_constant(const FiringDomain& d, const Rational& b) {
    // theta'_i >= 0 is theta_i >= b; close under that first, then translate.
    FiringDomain out = d;
    for (int v : d.vars()) out = add_constraint(std::move(out), kZero, v, Bound(-b));
    out = canonical(std::move(out));
    for (std::size_t i = 1; i <= d.dim(); ++i) {
        out.entry(i, 0) = out.entry(i, 0) - b;
        out.entry(0, i) = out.entry(0, i) + Bound(b);
    }
    return canonical(std::move(out));
}

FiringDomain eliminate(const FiringDomain& d, int var) {
    d.slot(var);
    std::vector<int> rest;
    for (int v : d.vars())
        if (v != var) rest.push_back(v);
    return canonical(from_linear(fm_eliminate(to_linear(d), var), rest));
}

bool includes(const FiringDomain& big, const FiringDomain& small) {
    if (big.vars() != small.vars()) return false;
    std::size_t n = big.dim() + 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (small.entry(i, j) > big.entry(i, j)) return false;
    return true;
}

bool contains_point(const FiringDomain& d, const std::map<int, Rational>& point) {
    auto val = [&](int v) { return v == kZero ? Rational(0) : point.at(v); };
    std::vector<int> ids{kZero};
    ids.insert(ids.end(), d.vars().begin(), d.vars().end());
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = 0; j < ids.size(); ++j)
            if (Bound(val(ids[i]) - val(ids[j])) > d.entry(i, j)) return false;
    return true;
}

std::vector<std::string> format_domain(const FiringDomain& d,
                                       const std::vector<std::string>& names) {
    std::vector<std::string> out;
    for (int v : d.vars()) {
        Rational lo = d.lower(v);
        Bound hi = d.upper(v);
        if (hi == Bound(lo))
            out.push_back(names[v] + " = " + to_string(lo));
        else if (hi.is_inf())
            out.push_back(to_string(lo) + " <= " + names[v]);
        else
            out.push_back(to_string(lo) + " <= " + names[v] + " <= " + to_string(hi));
    }
    for (int a : d.vars())
        for (int b : d.vars()) {
            if (a == b) continue;
            Bound c = d.get(a, b);
            if (c.finite()) out.push_back(names[a] + " - " + names[b] + " <= " + to_string(c));
        }
    return out;
}

}  // namespace waitnet
