#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "qtors/error.hpp"

namespace qtors {

// Exact rational with small numerator/denominator, used for chain breakpoints
// and filtration labels.  Always kept normalized with positive denominator.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw InputError("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num * b.den < b.num * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

// Parses "p", "p/q"; throws InputError on anything else.
inline Rational parse_rational(const std::string& text) {
    size_t slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(text));
        size_t used = 0;
        long long n = std::stoll(text.substr(0, slash), &used);
        if (used != slash) throw InputError("bad rational: " + text);
        long long d = std::stoll(text.substr(slash + 1), &used);
        if (used != text.size() - slash - 1) throw InputError("bad rational: " + text);
        return Rational(n, d);
    } catch (const std::invalid_argument&) {
        throw InputError("bad rational: " + text);
    } catch (const std::out_of_range&) {
        throw InputError("rational out of range: " + text);
    }
}

}  // namespace qtors
