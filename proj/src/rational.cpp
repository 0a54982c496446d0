#include "netgain/rational.hpp"

#include <limits>
#include <stdexcept>

namespace netgain {

std::string to_string(const Rational& q) {
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(text));
        return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational '" + text + "'");
    }
}

std::int64_t checked_pow(std::int64_t b, int e) {
    if (e < 0) throw std::invalid_argument("negative exponent");
    std::int64_t v = 1;
    for (int i = 0; i < e; ++i) {
        if (b != 0 && (v > std::numeric_limits<std::int64_t>::max() / b || v < std::numeric_limits<std::int64_t>::min() / b))
            throw std::overflow_error("integer power overflows 64 bits");
        v *= b;
    }
    return v;
}

Rational rational_pow(std::int64_t b, int e) {
    if (e >= 0) return Rational(checked_pow(b, e));
    return Rational(1, checked_pow(b, -e));
}

bool is_power_of(const Rational& q, std::int64_t b) {
    if (q <= 0) return false;
    std::int64_t num = q.numerator();
    std::int64_t den = q.denominator();
    if (num != 1 && den != 1) return false;
    std::int64_t v = num == 1 ? den : num;
    while (v % b == 0) v /= b;
    return v == 1;
}

}  // namespace netgain
