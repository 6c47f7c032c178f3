#pragma once

#include "waitnet/errors.hpp"
#include "waitnet/fm.hpp"
#include "waitnet/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace waitnet {

// Reference variable standing for the constant 0.
constexpr int kZero = -1;

// Difference bound matrix over firing-time variables theta_v (v = transition
// index).  Slot 0 is the reference, slot i+1 is vars()[i];
// entry(i, j) bounds theta_i - theta_j from above.
class FiringDomain {
public:
    FiringDomain() : FiringDomain(std::vector<int>{}) {}
    explicit FiringDomain(std::vector<int> vars);  // only theta >= 0

    const std::vector<int>& vars() const { return vars_; }
    std::size_t dim() const { return vars_.size(); }
    bool has(int var) const;
    int slot(int var) const;  // throws UnknownVariable

    const Bound& entry(std::size_t i, std::size_t j) const { return m_[i * (dim() + 1) + j]; }
    Bound& entry(std::size_t i, std::size_t j) { return m_[i * (dim() + 1) + j]; }

    // Upper bound on theta_lhs - theta_rhs (either side may be kZero).
    Bound get(int lhs, int rhs) const { return entry(slot(lhs), slot(rhs)); }
    Rational lower(int var) const { return -get(kZero, var).value(); }
    Bound upper(int var) const { return get(var, kZero); }

    bool canonical_flag() const { return canonical_; }
    void set_canonical_flag(bool f) { canonical_ = f; }

    bool operator==(const FiringDomain& o) const { return vars_ == o.vars_ && m_ == o.m_; }
    std::string key() const;

private:
    std::vector<int> vars_;
    std::vector<Bound> m_;
    bool canonical_ = false;
};

struct ConstraintEdge {
    int from;
    int to;
    Rational weight;
};
struct ConstraintGraph {
    std::vector<int> nodes;  // kZero first, then variables
    std::vector<ConstraintEdge> edges;
};

ConstraintGraph constraint_graph(const FiringDomain& d);

// Floyd-Warshall closure; throws Unsatisfiable on a negative cycle.
FiringDomain canonical(FiringDomain d);
bool satisfiable(const FiringDomain& d);

FiringDomain add_constraint(FiringDomain d, int lhs, int rhs, const Bound& bound);
FiringDomain add_variable(FiringDomain d, int var, const Rational& lo, const Bound& hi);

LinearSystem to_linear(const FiringDomain& d);
// Reads a system made only of difference constraints back into a DBM over
// the given variables.  Throws Error on any other row shape.
FiringDomain from_linear(const LinearSystem& sys, std::vector<int> vars);

// theta_j := theta_pivot + theta'_j for every other variable.  Bounds on
// theta_j turn into two-variable sums, so the result is a general system; the
// shifted variables keep their ids.
LinearSystem substitute_shift(const FiringDomain& d, int pivot);

// theta_i := theta'_i + b with theta'_i >= 0; canonical result.
FiringDomain shift_constant(const FiringDomain& d, const Rational& b);

// Fourier-Motzkin projection of one variable; canonical result.
FiringDomain eliminate(const FiringDomain& d, int var);

// Both canonical and over the same variables.
bool includes(const FiringDomain& big, const FiringDomain& small);
bool contains_point(const FiringDomain& d, const std::map<int, Rational>& point);

// Unary bounds first, then every finite off-diagonal difference.
std::vector<std::string> format_domain(const FiringDomain& d,
                                       const std::vector<std::string>& names);

}  // namespace waitnet
