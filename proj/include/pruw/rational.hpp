#pragma once

// Exact rational arithmetic for the storage planner. All planner math runs on
// boost::rational over arbitrary-precision integers so constraint identities
// (storage sums, partition fills) can be asserted with equality, not epsilon.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cstdint>
#include <string>

#include "pruw/errors.hpp"

namespace pruw {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::rational<Int>;

inline Rat rat(std::int64_t num, std::int64_t den = 1) { return Rat(Int(num), Int(den)); }

inline Int floor_int(const Rat& x) {
    Int n = x.numerator(), d = x.denominator();  // d > 0 by boost::rational invariant
    if (n >= 0) return Int(n / d);
    return Int(-((-n + d - 1) / d));
}

inline Int ceil_int(const Rat& x) { return Int(-floor_int(-x)); }

inline Rat rat_floor(const Rat& x) { return Rat(floor_int(x)); }
inline Rat rat_ceil(const Rat& x) { return Rat(ceil_int(x)); }

inline bool is_integer(const Rat& x) { return x.denominator() == 1; }

inline Rat frac_part(const Rat& x) { return x - rat_floor(x); }

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a > b ? a : b; }

// [x]^+ clamp used by the storage allocators
inline Rat pos_part(const Rat& x) { return x > Rat(0) ? x : Rat(0); }

inline double to_double(const Rat& x) { return boost::rational_cast<double>(x); }

inline std::int64_t to_int64(const Int& x) { return x.convert_to<std::int64_t>(); }

// "num/den" with den omitted for integers
inline std::string rat_string(const Rat& x) {
    std::string s = x.numerator().str();
    if (x.denominator() != 1) s += "/" + x.denominator().str();
    return s;
}

// Fixed-point decimal rounded to `places`, half away from zero. Used by the
// reports so the same rational always prints identically.
inline std::string decimal_string(const Rat& x, int places = 6) {
    Int scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    Int num = x.numerator() * scale * 2;
    Int den = x.denominator();
    bool neg = num < 0;
    if (neg) num = -num;
    Int scaled = (num + den) / (den * 2);  // round half away from zero
    Int whole = scaled / scale, frac = scaled % scale;
    std::string fs = frac.str();
    fs.insert(0, static_cast<size_t>(places) - fs.size(), '0');
    return (neg ? "-" : "") + whole.str() + "." + fs;
}

// Parses "37/100", "0.37", "2.7", "1" into an exact rational. Decimal strings
// map to num/10^digits, so planner inputs never pass through binary floats.
// Digits are accumulated manually: cpp_int's string constructor would treat a
// leading zero (as in ".0951") as an octal prefix.
inline Rat parse_rational(const std::string& text) {
    if (text.empty()) fail(Errc::ConfigError, "empty rational literal");
    auto bad = [&]() { fail(Errc::ConfigError, "malformed rational literal '" + text + "'"); };
    size_t pos = 0;
    bool neg = false;
    if (text[pos] == '+' || text[pos] == '-') neg = text[pos++] == '-';
    if (pos >= text.size()) bad();

    auto digits = [&](size_t& i, size_t* count = nullptr) {
        size_t start = i;
        Int v = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
            v = v * 10 + (text[i] - '0');
            ++i;
        }
        if (i == start) bad();
        if (count) *count = i - start;
        return v;
    };

    Int int_part = digits(pos);
    Rat value;
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        Int den = digits(pos);
        if (pos != text.size()) bad();
        if (den == 0) fail(Errc::ConfigError, "zero denominator in '" + text + "'");
        value = Rat(int_part, den);
    } else if (pos < text.size() && text[pos] == '.') {
        ++pos;
        size_t n_digits = 0;
        Int frac = digits(pos, &n_digits);
        if (pos != text.size()) bad();
        Int scale = 1;
        for (size_t i = 0; i < n_digits; ++i) scale *= 10;
        value = Rat(int_part * scale + frac, scale);
    } else {
        if (pos != text.size()) bad();
        value = Rat(int_part);
    }
    return neg ? -value : value;
}

} // namespace pruw
