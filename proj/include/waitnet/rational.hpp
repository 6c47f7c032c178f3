#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace waitnet {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);
std::optional<Rational> parse_rational(std::string_view text);

// A non-negative-or-negative rational, or +infinity.  Used for latest firing
// times and for DBM entries (which never need -infinity).
class Bound {
public:
    Bound() = default;  // infinity
    Bound(Rational v) : inf_(false), v_(v) {}
    Bound(std::int64_t v) : inf_(false), v_(v) {}

    static Bound infinity() { return Bound(); }

    bool is_inf() const { return inf_; }
    bool finite() const { return !inf_; }
    const Rational& value() const { return v_; }

    friend Bound operator+(const Bound& a, const Bound& b) {
        if (a.inf_ || b.inf_) return Bound();
        return Bound(a.v_ + b.v_);
    }
    friend Bound operator-(const Bound& a, const Rational& b) {
        if (a.inf_) return a;
        return Bound(a.v_ - b);
    }
    friend bool operator==(const Bound& a, const Bound& b) {
        return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
    }
    friend bool operator<(const Bound& a, const Bound& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator<=(const Bound& a, const Bound& b) { return !(b < a); }
    friend bool operator>(const Bound& a, const Bound& b) { return b < a; }
    friend bool operator>=(const Bound& a, const Bound& b) { return !(a < b); }

private:
    bool inf_ = true;
    Rational v_{0};
};

inline Bound min(const Bound& a, const Bound& b) { return b < a ? b : a; }
inline Bound max(const Bound& a, const Bound& b) { return a < b ? b : a; }

std::string to_string(const Bound& b);

}  // namespace waitnet
