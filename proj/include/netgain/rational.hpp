#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

// Exact overloads for rational == integer. Boost's templated mixed
// comparison recurses forever under C++20 rewritten-operator lookup.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) {
    return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, int b) { return a == static_cast<std::int64_t>(b); }
}  // namespace boost

namespace netgain {

using Rational = boost::rational<std::int64_t>;

/// "num/den", always with an explicit denominator.
std::string to_string(const Rational& q);

/// Parses "num/den" or an integer.
Rational parse_rational(const std::string& text);

inline double to_double(const Rational& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

/// b^e for e >= 0, throwing on int64 overflow.
std::int64_t checked_pow(std::int64_t b, int e);

/// b^e as a rational, e may be negative.
Rational rational_pow(std::int64_t b, int e);

/// True when q = b^e for some integer e (possibly negative).
bool is_power_of(const Rational& q, std::int64_t b);

}  // namespace netgain
