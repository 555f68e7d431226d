#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace cubetower {

// All measure/weight bookkeeping is exact. Weights in the branched systems are
// dyadic and cell volumes are powers of m, so every identity we verify is an
// equality of rationals, never a float comparison.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat_pow(const Rat& base, long e) {
    if (e < 0) {
        Rat p = rat_pow(base, -e);
        return Rat(1) / p;
    }
    Rat r(1);
    Rat b = base;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

/// Side length m^-level as an exact rational.
inline Rat cell_side(long m, long level) { return rat_pow(Rat(m), -level); }

/// "p/q" (or "p" when q == 1), the wire format used by all JSON outputs.
inline std::string rat_to_string(const Rat& r) {
    Int num = boost::multiprecision::numerator(r);
    Int den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace cubetower
