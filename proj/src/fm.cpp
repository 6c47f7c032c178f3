#include "waitnet/fm.hpp"

#include <algorithm>

namespace waitnet {

namespace {

LinearConstraint normalised(LinearConstraint c) {
    for (auto it = c.coeffs.begin(); it != c.coeffs.end();) {
        if (it->second == Rational(0))
            it = c.coeffs.erase(it);
        else
            ++it;
    }
    if (c.coeffs.empty()) return c;
    Rational scale = boost::abs(c.coeffs.begin()->second);
    for (auto& [v, k] : c.coeffs) k /= scale;
    c.bound /= scale;
    return c;
}

void push_unique(std::vector<LinearConstraint>& rows, LinearConstraint c) {
    c = normalised(std::move(c));
    if (c.coeffs.empty() && c.bound >= 0) return;  // 0 <= b, trivially true
    // Same left-hand side: keep the tighter bound.
    for (auto& r : rows)
        if (r.coeffs == c.coeffs) {
            r.bound = std::min(r.bound, c.bound);
            return;
        }
    rows.push_back(std::move(c));
}

}  // namespace

void LinearSystem::add(std::map<int, Rational> coeffs, Rational bound) {
    push_unique(rows, LinearConstraint{std::move(coeffs), bound});
}

std::set<int> LinearSystem::variables() const {
    std::set<int> vs;
    for (const auto& r : rows)
        for (const auto& [v, k] : r.coeffs)
            if (k != Rational(0)) vs.insert(v);
    return vs;
}

bool LinearSystem::holds(const std::map<int, Rational>& point) const {
    for (const auto& r : rows) {
        Rational lhs(0);
        for (const auto& [v, k] : r.coeffs) lhs += k * point.at(v);
        if (lhs > r.bound) return false;
    }
    return true;
}

LinearSystem fm_eliminate(const LinearSystem& sys, int var) {
    std::vector<const LinearConstraint*> pos, neg;
    LinearSystem out;
    for (const auto& r : sys.rows) {
        auto it = r.coeffs.find(var);
        Rational k = it == r.coeffs.end() ? Rational(0) : it->second;
        if (k > 0)
            pos.push_back(&r);
        else if (k < 0)
            neg.push_back(&r);
        else
            push_unique(out.rows, r);
    }
    // p: a*x + P <= bp (a > 0) and n: -b*x + N <= bn (b > 0) combine to
    // b*P + a*N <= b*bp + a*bn.
    for (const auto* p : pos) {
        Rational a = p->coeffs.at(var);
        for (const auto* n : neg) {
            Rational b = -n->coeffs.at(var);
            LinearConstraint c;
            for (const auto& [v, k] : p->coeffs)
                if (v != var) c.coeffs[v] += b * k;
            for (const auto& [v, k] : n->coeffs)
                if (v != var) c.coeffs[v] += a * k;
            c.bound = b * p->bound + a * n->bound;
            push_unique(out.rows, std::move(c));
        }
    }
    return out;
}

bool fm_satisfiable(const LinearSystem& sys) {
    LinearSystem cur = sys;
    for (int v : sys.variables()) cur = fm_eliminate(cur, v);
    for (const auto& r : cur.rows)
        if (r.coeffs.empty() && r.bound < 0) return false;
    return true;
}

std::string format_linear(const LinearSystem& sys, const std::map<int, std::string>& names) {
    std::string out;
    for (const auto& r : sys.rows) {
        std::string row;
        for (const auto& [v, k] : r.coeffs) {
            if (k == Rational(0)) continue;
            std::string name = names.count(v) ? names.at(v) : "x" + std::to_string(v);
            if (!row.empty()) row += k > 0 ? " + " : " - ";
            else if (k < 0) row += "-";
            Rational a = boost::abs(k);
            if (a != Rational(1)) row += to_string(a) + "*";
            row += name;
        }
        if (row.empty()) row = "0";
        out += row + " <= " + to_string(r.bound) + "\n";
    }
    return out;
}

}  // namespace waitnet
