#pragma once

#include "waitnet/rational.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace waitnet {

// sum(coeffs[v] * x_v) <= bound
struct LinearConstraint {
    std::map<int, Rational> coeffs;
    Rational bound{0};
    bool operator==(const LinearConstraint&) const = default;
};

struct LinearSystem {
    std::vector<LinearConstraint> rows;

    void add(std::map<int, Rational> coeffs, Rational bound);
    std::set<int> variables() const;
    bool holds(const std::map<int, Rational>& point) const;
};

// Projects the solution set onto the remaining variables.  Rows are scaled so
// the leading coefficient has magnitude one and exact duplicates are dropped.
LinearSystem fm_eliminate(const LinearSystem& sys, int var);
bool fm_satisfiable(const LinearSystem& sys);

std::string format_linear(const LinearSystem& sys, const std::map<int, std::string>& names);

}  // namespace waitnet
